// SPDX-License-Identifier: Apache-2.0
#pragma once

// estimate, verify and experiment. Each command resolves its configuration,
// writes only inside cfg.out and returns a process exit code.

#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "musicnd/cli/config.hpp"
#include "musicnd/cli/io.hpp"
#include "musicnd/core.hpp"
#include "musicnd/experiments/studies.hpp"
#include "musicnd/hankel.hpp"
#include "musicnd/music.hpp"
#include "musicnd/verify.hpp"

namespace musicnd::cli {

inline const std::vector<std::string>& verify_targets()
{
    static const std::vector<std::string> t{"thm2", "thm3", "lemma4", "thm4", "thm5", "hankel", "selberg"};
    return t;
}

inline const std::vector<std::string>& experiment_targets()
{
    static const std::vector<std::string> t{"noiseless", "nsr-sweep", "n-scaling", "sigma-power", "phase-transition"};
    return t;
}

namespace detail {

inline Dims half_pencil(const Dims& n)
{
    Dims l(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) l[k] = n[k] / 2;
    return l;
}

inline void default_if_empty(Dims& v, const Dims& d)
{
    if (v.empty()) v = d;
}

inline void default_if_empty(std::vector<double>& v, const std::vector<double>& d)
{
    if (v.empty()) v = d;
}

inline void check_pencil_config(const Dims& n, const Dims& l)
{
    try {
        SamplingGrid g(n);
        check_pencil(l, n);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

inline std::vector<SupportFamily> families(const RunConfig& c)
{
    std::vector<SupportFamily> f;
    for (const auto& name : c.family) {
        try {
            f.push_back(parse_family(name));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    return f;
}

inline experiments::CommonOptions common(const RunConfig& c)
{
    experiments::CommonOptions o;
    o.seed = c.seed;
    o.jobs = c.jobs;
    o.grid_res = c.grid_res;
    o.refine_iters = c.refine_iters;
    o.timing = c.timing;
    return o;
}

inline nlohmann::json point_json(const TorusPoint& p)
{
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t k = 0; k < p.dim(); ++k) a.push_back(p[k]);
    return a;
}

inline nlohmann::json fit_json(const experiments::FamilyFit& f)
{
    nlohmann::json j;
    j["family"] = to_string(f.family);
    if (f.fit) {
        j["exponent"] = f.fit->exponent;
        j["intercept"] = f.fit->intercept;
        j["rms_residual"] = f.fit->rms_residual;
        j["q_min"] = f.fit->q_min;
        j["q_max"] = f.fit->q_max;
        j["points"] = f.fit->points;
    } else {
        j["exponent"] = nullptr;
        j["note"] = f.note;
    }
    return j;
}

inline nlohmann::json suite_json(const verify::SuiteReport& r)
{
    nlohmann::json j;
    j["name"] = r.name;
    j["cases"] = r.cases;
    j["violations"] = r.violations;
    j["inapplicable"] = r.inapplicable;
    j["passed"] = r.passed();
    j["diagnostics"] = r.diagnostics;
    nlohmann::json st = nlohmann::json::object();
    for (const auto& [k, v] : r.stats) st[k] = v;
    j["stats"] = st;
    return j;
}

inline void print_suite(std::ostream& os, const verify::SuiteReport& r)
{
    os << std::left << std::setw(18) << r.name << " cases " << std::setw(8) << r.cases << " violations " << std::setw(6)
       << r.violations << " inapplicable " << std::setw(6) << r.inapplicable << (r.passed() ? " ok" : " VIOLATED") << '\n';
    for (const auto& [k, v] : r.stats) os << "    " << k << " = " << v << '\n';
    for (const auto& d : r.diagnostics) os << "    ! " << d << '\n';
}

}  // namespace detail

/// Fills every omitted field with the default of the command and target and
/// validates the result.
inline void resolve(RunConfig& c)
{
    using detail::default_if_empty;
    if (c.grid_res < 1) throw ConfigError("grid-res must be positive");
    if (c.refine_iters < 0) throw ConfigError("refine-iters must be nonnegative");

    if (c.command == "estimate") {
        if (c.s == 0) throw ConfigError("estimate needs --s (model order)");
        default_if_empty(c.n, {10, 10});
        default_if_empty(c.l, detail::half_pencil(c.n));
        default_if_empty(c.nsr, {0.0});
        default_if_empty(c.dyn_range, {1.0});
        if (c.min_sep < 0.0) c.min_sep = 2.0;
        if (c.trials == 0) c.trials = 1;
        detail::check_pencil_config(c.n, c.l);
        const long rows = count(c.l), cols = count(difference(c.n, c.l));
        if (static_cast<long>(c.s) >= std::min(rows, cols))
            throw ConfigError("model order s must be below min(#(L), #(N-L)) = " + std::to_string(std::min(rows, cols)));
        if (c.nsr.size() != 1 || c.dyn_range.size() != 1) throw ConfigError("estimate takes a single nsr and dyn-range");
        return;
    }

    if (c.command == "verify") {
        const std::string& t = c.target;
        if (t == "thm2" || t == "hankel") {
            if (c.trials == 0) c.trials = 100;
        } else if (t == "thm3") {
            if (c.trials == 0) c.trials = 100;
            if (c.s == 0) c.s = 5;
            default_if_empty(c.n, {10, 10});
            default_if_empty(c.l, detail::half_pencil(c.n));
            detail::check_pencil_config(c.n, c.l);
        } else if (t == "lemma4" || t == "thm4") {
            if (c.trials == 0) c.trials = 500;
            if (c.nsr.size() > 1) throw ConfigError(t + " takes at most one nsr value");
        } else if (t == "thm5") {
            if (c.trials == 0) c.trials = 200;
            if (c.sigma <= 0.0) c.sigma = 1.0;
            default_if_empty(c.n, {20, 20});
            default_if_empty(c.l, detail::half_pencil(c.n));
            detail::check_pencil_config(c.n, c.l);
        } else if (t == "selberg") {
            if (c.trials == 0) c.trials = 1;
        } else {
            throw ConfigError("unknown bound '" + t + "'");
        }
        return;
    }

    if (c.command == "experiment") {
        const std::string& t = c.target;
        if (t == "noiseless") {
            const experiments::NoiselessConfig d;
            if (c.trials == 0) c.trials = d.trials;
            if (c.s == 0) c.s = d.s;
            default_if_empty(c.n, d.n);
            default_if_empty(c.l, detail::half_pencil(c.n));
            detail::check_pencil_config(c.n, c.l);
            if (!theorem3_check(c.s, c.l, c.n)) throw ConfigError("noiseless study needs L_k >= s and N_k - L_k + 1 >= s");
        } else if (t == "nsr-sweep") {
            const experiments::NsrSweepConfig d;
            if (c.trials == 0) c.trials = d.trials;
            if (c.s == 0) c.s = d.s;
            default_if_empty(c.n, d.n);
            default_if_empty(c.l, detail::half_pencil(c.n));
            default_if_empty(c.nsr, d.nsr);
            default_if_empty(c.dyn_range, d.dynamic_ranges);
            if (c.min_sep < 0.0) c.min_sep = d.min_sep_rl;
            detail::check_pencil_config(c.n, c.l);
        } else if (t == "n-scaling") {
            const experiments::NScalingConfig d;
            if (c.trials == 0) c.trials = d.trials;
            if (c.n_values.empty()) c.n_values = d.n_values;
            if (c.sigma <= 0.0) c.sigma = d.sigma;
            if (c.min_sep < 0.0) c.min_sep = d.spacing_rl;
            for (int v : c.n_values)
                if (v < 2) throw ConfigError("n-values must be at least 2");
        } else if (t == "sigma-power" || t == "phase-transition") {
            if (c.trials == 0) c.trials = t == "sigma-power" ? 1 : experiments::PhaseTransitionConfig{}.trials;
            if (c.family.empty()) c.family = {"A", "B", "C"};
            default_if_empty(c.n, {20, 20});
            default_if_empty(c.l, detail::half_pencil(c.n));
            detail::check_pencil_config(c.n, c.l);
            if (c.n.size() != 2) throw ConfigError(t + " uses two-dimensional support families");
            detail::families(c);
        } else {
            throw ConfigError("unknown experiment '" + t + "'");
        }
        return;
    }
    throw ConfigError("unknown command '" + c.command + "'");
}

inline int cmd_estimate(RunConfig cfg, std::ostream& log)
{
    cfg.command = "estimate";
    MeasurementArray ye;
    std::optional<SpectralModel> truth;
    if (!cfg.input.empty()) {
        ye = read_measurements(cfg.input);
        if (!cfg.n.empty() && cfg.n != ye.grid().max_index())
            throw ConfigError("n does not match the measurement file");
        cfg.n = ye.grid().max_index();
    }
    resolve(cfg);
    if (cfg.input.empty()) {
        const SamplingGrid grid(cfg.n);
        truth = random_model(cfg.s, grid, cfg.min_sep, cfg.dyn_range.front(),
                             derive_seed(cfg.seed, {label_hash("estimate/model")}));
        const MeasurementArray y = synthesize(*truth, grid);
        ye = add_noise(y, nsr_to_sigma(cfg.nsr.front(), y), NoiseKind::complex_gaussian,
                       derive_seed(cfg.seed, {label_hash("estimate/noise")}));
    }

    const SupportEstimate est = recover_support(build_hankel(ye, cfg.l), static_cast<long>(cfg.s), cfg.grid_res, cfg.refine_iters);
    nlohmann::json res;
    res["frequencies"] = nlohmann::json::array();
    for (const auto& p : est.support) res["frequencies"].push_back(detail::point_json(p));
    res["residuals"] = est.correlation;
    res["deficient"] = est.deficient;
    res["shape_warning"] = est.shape_warning;
    res["amplitudes"] = nlohmann::json::array();
    if (!est.support.empty()) {
        const AmplitudeEstimate amp = recover_amplitudes(ye, est.support);
        for (const auto& a : amp.values) res["amplitudes"].push_back({{"re", a.real()}, {"im", a.imag()}});
        res["amplitude_rank_deficient"] = amp.rank_deficient;
        res["amplitude_residual_norm"] = amp.residual_norm;
    }
    if (truth) {
        nlohmann::json t;
        t["frequencies"] = nlohmann::json::array();
        for (const auto& p : truth->support) t["frequencies"].push_back(detail::point_json(p));
        t["amplitudes"] = nlohmann::json::array();
        for (const auto& a : truth->amplitudes.values()) t["amplitudes"].push_back({{"re", a.real()}, {"im", a.imag()}});
        res["truth"] = t;
        if (!est.support.empty()) res["err_rl"] = experiments::hausdorff_rl(truth->support, est.support, cfg.n);
    }
    const auto path = output_file(cfg.out, "estimate.json");
    write_text_file(path, with_provenance(res, to_json(cfg)).dump(2) + "\n");
    log << "estimated " << est.support.size() << " frequencies";
    if (res.contains("err_rl")) log << ", error " << res["err_rl"].get<double>() << " RL";
    log << "; wrote " << path.string() << '\n';
    return kExitOk;
}

inline int cmd_verify(RunConfig cfg, std::ostream& log)
{
    cfg.command = "verify";
    resolve(cfg);
    std::vector<verify::SuiteReport> reports;
    const std::string& t = cfg.target;
    if (t == "thm2") {
        reports.push_back(verify::theorem2_suite(cfg.seed, cfg.trials, false));
        reports.push_back(verify::theorem2_suite(cfg.seed, cfg.trials, true));
    } else if (t == "thm3") {
        experiments::NoiselessConfig nc;
        nc.trials = cfg.trials;
        nc.s = cfg.s;
        nc.n = cfg.n;
        nc.l = cfg.l;
        if (!theorem3_check(nc.s, nc.l, nc.n)) throw ConfigError("thm3 needs L_k >= s and N_k - L_k + 1 >= s");
        reports.push_back(verify::theorem3_suite(cfg.seed, nc, 1e-3, cfg.jobs));
    } else if (t == "lemma4" || t == "thm4") {
        const bool fixed = !cfg.nsr.empty();
        const auto trials = verify::perturbation_trials(cfg.seed, cfg.trials, fixed ? cfg.trials : 10 * cfg.trials, cfg.jobs, 4,
                                                        fixed ? cfg.nsr.front() : -1.0);
        reports.push_back(t == "lemma4" ? verify::lemma4_suite(trials) : verify::theorem4_suite(trials));
    } else if (t == "thm5") {
        reports.push_back(verify::theorem5_suite(cfg.seed, cfg.trials, cfg.sigma, cfg.n, cfg.l, {1.0, 0.5, 0.1, 0.01, 0.001},
                                                 0.99, cfg.jobs));
    } else if (t == "hankel") {
        reports.push_back(verify::hankel_identity_suite(cfg.seed, cfg.trials));
    } else if (t == "selberg") {
        reports.push_back(verify::selberg_suite());
    }

    bool ok = true;
    nlohmann::json res = nlohmann::json::array();
    for (const auto& r : reports) {
        detail::print_suite(log, r);
        res.push_back(detail::suite_json(r));
        ok = ok && r.passed();
    }
    write_text_file(output_file(cfg.out, "verify-" + t + ".json"), with_provenance(res, to_json(cfg)).dump(2) + "\n");
    return ok ? kExitOk : kExitVerificationFailure;
}

inline int cmd_experiment(RunConfig cfg, std::ostream& log)
{
    cfg.command = "experiment";
    resolve(cfg);
    const experiments::CommonOptions opt = detail::common(cfg);
    const std::string& t = cfg.target;
    std::vector<experiments::ExperimentRecord> rec;
    nlohmann::json sum;

    if (t == "noiseless") {
        experiments::NoiselessConfig c;
        c.trials = cfg.trials;
        c.s = cfg.s;
        c.n = cfg.n;
        c.l = cfg.l;
        rec = experiments::exp_noiseless(c, opt);
        double worst = 0.0, mean = 0.0;
        for (const auto& r : rec) {
            worst = std::max(worst, r.err_rl);
            mean += r.err_rl;
        }
        sum["max_err_rl"] = worst;
        sum["mean_err_rl"] = rec.empty() ? 0.0 : mean / static_cast<double>(rec.size());
        log << "noiseless: max error " << worst << " RL over " << rec.size() << " trials\n";
    } else if (t == "nsr-sweep") {
        experiments::NsrSweepConfig c;
        c.trials = cfg.trials;
        c.s = cfg.s;
        c.n = cfg.n;
        c.l = cfg.l;
        c.nsr = cfg.nsr;
        c.dynamic_ranges = cfg.dyn_range;
        c.min_sep_rl = cfg.min_sep;
        rec = experiments::exp_nsr_sweep(c, opt);
        sum["cells"] = nlohmann::json::array();
        for (const auto& cell : experiments::summarize_nsr_sweep(c, rec)) {
            sum["cells"].push_back(
                {{"dyn_range", cell.dyn_range}, {"nsr", cell.nsr}, {"method", cell.method}, {"mean_err_rl", cell.mean_err_rl}});
            log << "DR " << cell.dyn_range << " NSR " << cell.nsr << ' ' << cell.method << ": " << cell.mean_err_rl << " RL\n";
        }
    } else if (t == "n-scaling") {
        experiments::NScalingConfig c;
        c.trials = cfg.trials;
        c.n_values = cfg.n_values;
        c.sigma = cfg.sigma;
        c.spacing_rl = cfg.min_sep;
        c.reference_n = cfg.n_values.front();
        rec = experiments::exp_n_scaling(c, opt);
        sum["rows"] = nlohmann::json::array();
        for (const auto& row : experiments::summarize_n_scaling(c, rec)) {
            sum["rows"].push_back({{"n", row.n},
                                   {"mean_err_rl", row.mean_err_rl},
                                   {"mean_err", row.mean_err},
                                   {"mean_nsr", row.mean_nsr},
                                   {"rate", row.rate}});
            log << "N " << row.n << ": error " << row.mean_err << " (" << row.mean_err_rl << " RL), NSR " << row.mean_nsr
                << ", rate " << row.rate << '\n';
        }
    } else if (t == "sigma-power") {
        experiments::SigmaPowerConfig c;
        c.families = detail::families(cfg);
        c.n = cfg.n;
        c.l = cfg.l;
        rec = experiments::exp_sigma_power(c, opt);
        sum["fits"] = nlohmann::json::array();
        for (const auto& f : experiments::fit_sigma_power(c, rec)) {
            sum["fits"].push_back(detail::fit_json(f));
            log << "family " << to_string(f.family) << ": gamma " << (f.fit ? std::to_string(f.fit->exponent) : f.note) << '\n';
        }
    } else if (t == "phase-transition") {
        experiments::PhaseTransitionConfig c;
        c.families = detail::families(cfg);
        c.trials = cfg.trials;
        c.n = cfg.n;
        c.l = cfg.l;
        rec = experiments::exp_phase_transition(c, opt);
        const auto ps = experiments::summarize_phase_transition(c, rec);
        sum["cells"] = nlohmann::json::array();
        for (const auto& cell : ps.cells)
            sum["cells"].push_back({{"family", to_string(cell.family)},
                                    {"q_rl", cell.q_rl},
                                    {"nsr", cell.nsr},
                                    {"mean_err_over_q", cell.mean_err_over_q},
                                    {"log2_mean", cell.log2_mean},
                                    {"success", cell.success}});
        sum["transitions"] = nlohmann::json::array();
        for (const auto& [fam, curve] : ps.transitions) {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& p : curve) pts.push_back({{"q_rl", p.q_rl}, {"nsr", p.nsr}, {"in_fit", p.in_fit}});
            sum["transitions"].push_back({{"family", to_string(fam)}, {"points", pts}});
        }
        sum["fits"] = nlohmann::json::array();
        for (const auto& f : ps.fits) {
            sum["fits"].push_back(detail::fit_json(f));
            log << "family " << to_string(f.family) << ": tau " << (f.fit ? std::to_string(f.fit->exponent) : f.note) << '\n';
        }
    }

    const nlohmann::json config = to_json(cfg);
    std::ostringstream csv;
    write_records_csv(csv, rec, config);
    write_text_file(output_file(cfg.out, t + ".csv"), csv.str());
    write_text_file(output_file(cfg.out, t + ".summary.json"), with_provenance(sum, config).dump(2) + "\n");
    log << "wrote " << rec.size() << " records to " << output_file(cfg.out, t + ".csv").string() << '\n';
    return kExitOk;
}

}  // namespace musicnd::cli
