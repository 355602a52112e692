// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reproducible numerical studies. Every trial derives its seed from the
// master seed and its position in the study, so results are independent of
// the number of worker threads.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "musicnd/baseline.hpp"
#include "musicnd/bounds.hpp"
#include "musicnd/core.hpp"
#include "musicnd/experiments/record.hpp"
#include "musicnd/hankel.hpp"
#include "musicnd/music.hpp"
#include "musicnd/vandermonde.hpp"

namespace musicnd::experiments {

struct CommonOptions {
    std::uint64_t seed = 0;
    unsigned jobs = 0;  // 0: hardware concurrency
    int grid_res = kDefaultGridResolution;
    int refine_iters = kDefaultRefineRounds;
    bool timing = false;  // record wall_ms; off keeps output byte-identical
};

/// Mean of a statistic over records matching a predicate, in record order.
template <class Pred, class Stat>
double mean_of(const std::vector<ExperimentRecord>& records, Pred pred, Stat stat)
{
    double sum = 0.0;
    std::size_t m = 0;
    for (const auto& r : records)
        if (pred(r)) {
            sum += stat(r);
            ++m;
        }
    return m ? sum / static_cast<double>(m) : std::numeric_limits<double>::quiet_NaN();
}

namespace detail {

inline const TorusPoint& family_center()
{
    static const TorusPoint c{0.5, 0.5};
    return c;
}

/// MUSIC on y^e with model order s; Hausdorff error in RL against exact.
inline SupportEstimate run_music(const MeasurementArray& ye, std::size_t s, const Dims& l, const CommonOptions& opt)
{
    return recover_support(build_hankel(ye, l), static_cast<long>(s), opt.grid_res, opt.refine_iters);
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct NoiselessConfig {
    std::size_t trials = 100;
    std::size_t s = 5;
    Dims n{10, 10};
    Dims l{5, 5};
};

/// Random distinct frequencies with unit-modulus random-phase amplitudes,
/// no noise. metric holds the largest R at the recovered frequencies.
inline std::vector<ExperimentRecord> exp_noiseless(const NoiselessConfig& cfg, const CommonOptions& opt)
{
    if (!theorem3_check(cfg.s, cfg.l, cfg.n))
        throw std::invalid_argument("noiseless study needs L_k >= s and N_k - L_k + 1 >= s");
    const SamplingGrid grid(cfg.n);
    std::vector<ExperimentRecord> out(cfg.trials);
    parallel_for(cfg.trials, opt.jobs, [&](std::size_t t) {
        const Stopwatch clock;
        const std::uint64_t seed = derive_seed(opt.seed, {label_hash("noiseless"), t});
        const SpectralModel model = random_model(cfg.s, grid, 0.0, 1.0, seed);
        const SupportEstimate est = detail::run_music(synthesize(model, grid), cfg.s, cfg.l, opt);
        ExperimentRecord& r = out[t];
        r.scenario = "noiseless";
        r.seed = seed;
        r.s = cfg.s;
        r.n = cfg.n;
        r.l = cfg.l;
        r.family = "random";
        r.err_rl = hausdorff_rl(model.support, est.support, cfg.n);
        r.metric = est.correlation.empty() ? 0.0 : *std::max_element(est.correlation.begin(), est.correlation.end());
        if (opt.timing) r.wall_ms = clock.elapsed_ms();
    });
    return out;
}

// ---------------------------------------------------------------------------

struct NsrSweepConfig {
    std::vector<double> dynamic_ranges{1.0, 5.0, 10.0};
    std::vector<double> nsr{0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5};
    std::size_t trials = 100;
    std::size_t s = 20;
    Dims n{10, 10};
    Dims l{5, 5};
    double min_sep_rl = 2.0;
    bool baseline = true;
};

struct SweepCell {
    double dyn_range = 0.0;
    double nsr = 0.0;
    std::string method;
    double mean_err_rl = 0.0;
};

/// For every (dynamic range, NSR, trial): a random separated model and
/// complex noise at the requested NSR, localised by MUSIC and (optionally)
/// by the Fourier baseline on the same data. metric holds the realised NSR.
inline std::vector<ExperimentRecord> exp_nsr_sweep(const NsrSweepConfig& cfg, const CommonOptions& opt)
{
    const SamplingGrid grid(cfg.n);
    const std::size_t methods = cfg.baseline ? 2 : 1;
    const std::size_t per_cell = cfg.trials;
    const std::size_t cells = cfg.dynamic_ranges.size() * cfg.nsr.size();
    std::vector<ExperimentRecord> out(cells * per_cell * methods);

    parallel_for(cells * per_cell, opt.jobs, [&](std::size_t job) {
        const std::size_t cell = job / per_cell, t = job % per_cell;
        const std::size_t di = cell / cfg.nsr.size(), ni = cell % cfg.nsr.size();
        const double dr = cfg.dynamic_ranges[di], nsr = cfg.nsr[ni];

        // the scene depends on (dynamic range, trial) only, so every NSR sees the same models
        const std::uint64_t model_seed = derive_seed(opt.seed, {label_hash("nsr-sweep"), di, t});
        const std::uint64_t noise_seed = derive_seed(opt.seed, {label_hash("nsr-sweep/noise"), di, ni, t});
        const SpectralModel model = random_model(cfg.s, grid, cfg.min_sep_rl, dr, model_seed);
        const MeasurementArray y = synthesize(model, grid);
        const MeasurementArray ye = add_noise(y, nsr_to_sigma(nsr, y), NoiseKind::complex_gaussian, noise_seed);
        double realised = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) realised += std::norm(ye.data()[i] - y.data()[i]);
        realised = std::sqrt(realised) / y.frobenius_norm();

        for (std::size_t m = 0; m < methods; ++m) {
            const Stopwatch clock;
            const SupportEstimate est = m == 0 ? detail::run_music(ye, cfg.s, cfg.l, opt)
                                               : fourier_localize(ye, cfg.s, opt.grid_res, opt.refine_iters);
            ExperimentRecord& r = out[job * methods + m];
            r.scenario = "nsr-sweep";
            r.seed = noise_seed;
            r.s = cfg.s;
            r.n = cfg.n;
            r.l = cfg.l;
            r.q_rl = cfg.min_sep_rl;
            r.nsr = nsr;
            r.dyn_range = dr;
            r.family = "random";
            r.method = m == 0 ? "music" : "fourier";
            r.err_rl = est.support.empty() ? std::numeric_limits<double>::infinity()
                                           : hausdorff_rl(model.support, est.support, cfg.n);
            r.metric = realised;
            if (opt.timing) r.wall_ms = clock.elapsed_ms();
        }
    });
    return out;
}

inline std::vector<SweepCell> summarize_nsr_sweep(const NsrSweepConfig& cfg, const std::vector<ExperimentRecord>& rec)
{
    std::vector<SweepCell> cells;
    for (double dr : cfg.dynamic_ranges)
        for (double nsr : cfg.nsr)
            for (const char* method : {"music", "fourier"}) {
                if (!cfg.baseline && std::string(method) == "fourier") continue;
                const double m = mean_of(
                    rec, [&](const ExperimentRecord& r) { return r.dyn_range == dr && r.nsr == nsr && r.method == method; },
                    [](const ExperimentRecord& r) { return r.err_rl; });
                cells.push_back({dr, nsr, method, m});
            }
    return cells;
}

// ---------------------------------------------------------------------------

struct NScalingConfig {
    std::vector<int> n_values{10, 20, 30, 40};
    int side = 3;
    double spacing_rl = 2.0;
    int reference_n = 10;  // spacing_rl is in RL of this N; 0 rescales it with every N
    double sigma = 5.0;
    std::size_t trials = 100;
};

struct ScalingRow {
    int n = 0;
    double mean_err_rl = 0.0;
    double mean_err = 0.0;  // torus units, comparable across N
    double mean_nsr = 0.0;
    double rate = 0.0;
};

/// side x side lattice, fixed across the sweep, whose spacing is spacing_rl
/// Rayleigh lengths of reference_n. Unit-modulus random phases, fixed complex noise level sigma, N = (n, n) and L = N/2. The nsr
/// column holds the realised ||e||_F / ||y||_F.
inline std::vector<ExperimentRecord> exp_n_scaling(const NScalingConfig& cfg, const CommonOptions& opt)
{
    const std::size_t per = cfg.trials;
    std::vector<ExperimentRecord> out(cfg.n_values.size() * per);
    parallel_for(out.size(), opt.jobs, [&](std::size_t job) {
        const Stopwatch clock;
        const std::size_t ni = job / per, t = job % per;
        const int nn = cfg.n_values[ni];
        const Dims n{nn, nn}, l{nn / 2, nn / 2};
        const SamplingGrid grid(n);
        const double spacing = cfg.spacing_rl / (cfg.reference_n > 0 ? cfg.reference_n : nn);
        const FrequencySupport support = lattice_support(cfg.side, spacing, detail::family_center());
        const std::uint64_t seed = derive_seed(opt.seed, {label_hash("n-scaling"), ni, t});
        Rng rng(seed);
        const SpectralModel model(support, random_amplitudes(support.size(), 1.0, rng));
        const MeasurementArray y = synthesize(model, grid);
        const MeasurementArray e = gaussian_noise(grid, cfg.sigma, NoiseKind::complex_gaussian, mix_seed(seed));
        const MeasurementArray ye = y + e;
        const SupportEstimate est = detail::run_music(ye, support.size(), l, opt);

        ExperimentRecord& r = out[job];
        r.scenario = "n-scaling";
        r.seed = seed;
        r.s = support.size();
        r.n = n;
        r.l = l;
        r.q_rl = spacing * nn;
        r.nsr = e.frobenius_norm() / y.frobenius_norm();
        r.family = "lattice";
        r.err_rl = hausdorff_rl(model.support, est.support, n);
        r.err_over_q = r.err_rl / r.q_rl;
        r.metric = asymptotic_rate(cfg.sigma, n);
        if (opt.timing) r.wall_ms = clock.elapsed_ms();
    });
    return out;
}

inline std::vector<ScalingRow> summarize_n_scaling(const NScalingConfig& cfg, const std::vector<ExperimentRecord>& rec)
{
    std::vector<ScalingRow> rows;
    for (int nn : cfg.n_values) {
        auto match = [nn](const ExperimentRecord& r) { return r.n.front() == nn; };
        const double err_rl = mean_of(rec, match, [](const ExperimentRecord& r) { return r.err_rl; });
        rows.push_back({nn, err_rl, err_rl / nn,
                        mean_of(rec, match, [](const ExperimentRecord& r) { return r.nsr; }),
                        asymptotic_rate(cfg.sigma, Dims{nn, nn})});
    }
    return rows;
}

// ---------------------------------------------------------------------------

struct SigmaPowerConfig {
    std::vector<SupportFamily> families{SupportFamily::A, SupportFamily::B, SupportFamily::C};
    double q_min_rl = 0.3;
    double q_max_rl = 2.0;
    std::size_t q_points = 12;
    std::size_t exclude_largest = 1;
    Dims n{20, 20};
    Dims l{10, 10};
};

struct FamilyFit {
    SupportFamily family{};
    std::optional<PowerLawFit> fit;
    std::string note;
};

/// sigma_s^2(Phi^L) / #(L) for each family and q, stored in metric.
inline std::vector<ExperimentRecord> exp_sigma_power(const SigmaPowerConfig& cfg, const CommonOptions& opt)
{
    const auto qs = log_space(cfg.q_min_rl, cfg.q_max_rl, cfg.q_points);
    std::vector<ExperimentRecord> out(cfg.families.size() * qs.size());
    parallel_for(out.size(), opt.jobs, [&](std::size_t job) {
        const Stopwatch clock;
        const std::size_t fi = job / qs.size(), qi = job % qs.size();
        const double q = qs[qi] / cfg.n.front();
        const FrequencySupport support = make_support(cfg.families[fi], q, detail::family_center());
        const RVector sv = singular_values(build_phi(support, cfg.l));
        const double smin = sv(sv.size() - 1);

        ExperimentRecord& r = out[job];
        r.scenario = "sigma-power";
        r.seed = opt.seed;
        r.s = support.size();
        r.n = cfg.n;
        r.l = cfg.l;
        r.q_rl = qs[qi];
        r.family = to_string(cfg.families[fi]);
        r.err_rl = 0.0;
        r.method = "svd";
        r.metric = smin * smin / static_cast<double>(count(cfg.l));
        if (opt.timing) r.wall_ms = clock.elapsed_ms();
    });
    return out;
}

/// Log-log least-squares slope per family over all but the largest
/// exclude_largest q values.
inline std::vector<FamilyFit> fit_sigma_power(const SigmaPowerConfig& cfg, const std::vector<ExperimentRecord>& rec)
{
    const auto qs = log_space(cfg.q_min_rl, cfg.q_max_rl, cfg.q_points);
    const std::size_t keep = qs.size() > cfg.exclude_largest ? qs.size() - cfg.exclude_largest : 0;
    std::vector<FamilyFit> fits;
    for (SupportFamily f : cfg.families) {
        std::vector<double> x, y;
        for (const auto& r : rec)
            if (r.family == to_string(f) && r.q_rl <= qs[keep ? keep - 1 : 0] * (1 + 1e-12)) {
                x.push_back(r.q_rl);
                y.push_back(r.metric);
            }
        FamilyFit ff{f, std::nullopt, ""};
        try {
            ff.fit = fit_power_law(x, y);
        } catch (const std::domain_error& e) {
            ff.note = e.what();
        }
        fits.push_back(ff);
    }
    return fits;
}

// ---------------------------------------------------------------------------

struct PhaseTransitionConfig {
    std::vector<SupportFamily> families{SupportFamily::A, SupportFamily::B, SupportFamily::C};
    double q_min_rl = 0.5;
    double q_max_rl = 2.0;
    std::size_t q_points = 10;
    double nsr_min = 1e-6;
    double nsr_max = 1.0;
    std::size_t nsr_points = 20;
    bool include_zero_nsr = true;
    std::size_t trials = 20;
    std::size_t exclude_largest = 1;
    Dims n{20, 20};
    Dims l{10, 10};

    std::vector<double> q_grid() const { return log_space(q_min_rl, q_max_rl, q_points); }
    std::vector<double> nsr_grid() const
    {
        std::vector<double> g;
        if (include_zero_nsr) g.push_back(0.0);
        for (double v : log_space(nsr_min, nsr_max, nsr_points)) g.push_back(v);
        return g;
    }
};

struct PhaseCell {
    SupportFamily family{};
    double q_rl = 0.0;
    double nsr = 0.0;
    double mean_err_over_q = 0.0;
    double log2_mean = 0.0;
    bool success = false;  // mean d/q < 1/2
};

struct TransitionPoint {
    double q_rl = 0.0;
    double nsr = 0.0;  // largest NSR before the first failure scanning upward; 0 if none
    bool in_fit = false;
};

struct PhaseSummary {
    std::vector<PhaseCell> cells;
    std::vector<std::pair<SupportFamily, std::vector<TransitionPoint>>> transitions;
    std::vector<FamilyFit> fits;
};

/// Five unit-modulus random-phase amplitudes on each family; error d/q with q
/// the family spacing in torus units.
inline std::vector<ExperimentRecord> exp_phase_transition(const PhaseTransitionConfig& cfg, const CommonOptions& opt)
{
    const auto qs = cfg.q_grid();
    const auto nsrs = cfg.nsr_grid();
    const SamplingGrid grid(cfg.n);
    const std::size_t per = cfg.trials;
    const std::size_t total = cfg.families.size() * qs.size() * nsrs.size() * per;
    std::vector<ExperimentRecord> out(total);
    parallel_for(total, opt.jobs, [&](std::size_t job) {
        const Stopwatch clock;
        std::size_t rest = job;
        const std::size_t t = rest % per;
        rest /= per;
        const std::size_t ni = rest % nsrs.size();
        rest /= nsrs.size();
        const std::size_t qi = rest % qs.size();
        const std::size_t fi = rest / qs.size();

        const double q = qs[qi] / cfg.n.front();
        const FrequencySupport support = make_support(cfg.families[fi], q, detail::family_center());
        const std::uint64_t seed = derive_seed(opt.seed, {label_hash("phase-transition"), fi, qi, ni, t});
        Rng rng(seed);
        const SpectralModel model(support, random_amplitudes(support.size(), 1.0, rng));
        const MeasurementArray y = synthesize(model, grid);
        const MeasurementArray ye = add_noise(y, nsr_to_sigma(nsrs[ni], y), NoiseKind::complex_gaussian, mix_seed(seed));
        const SupportEstimate est = detail::run_music(ye, support.size(), cfg.l, opt);

        ExperimentRecord& r = out[job];
        r.scenario = "phase-transition";
        r.seed = seed;
        r.s = support.size();
        r.n = cfg.n;
        r.l = cfg.l;
        r.q_rl = qs[qi];
        r.nsr = nsrs[ni];
        r.family = to_string(cfg.families[fi]);
        r.err_rl = hausdorff_rl(model.support, est.support, cfg.n);
        r.err_over_q = hausdorff_error(model.support, est.support) / q;
        if (opt.timing) r.wall_ms = clock.elapsed_ms();
    });
    return out;
}

inline PhaseSummary summarize_phase_transition(const PhaseTransitionConfig& cfg, const std::vector<ExperimentRecord>& rec)
{
    const auto qs = cfg.q_grid();
    const auto nsrs = cfg.nsr_grid();
    const std::size_t per = cfg.trials;
    PhaseSummary sum;
    for (std::size_t fi = 0; fi < cfg.families.size(); ++fi) {
        std::vector<TransitionPoint> curve;
        for (std::size_t qi = 0; qi < qs.size(); ++qi) {
            TransitionPoint tp{qs[qi], 0.0, false};
            bool failed = false;
            for (std::size_t ni = 0; ni < nsrs.size(); ++ni) {
                const std::size_t base = ((fi * qs.size() + qi) * nsrs.size() + ni) * per;
                double acc = 0.0;
                for (std::size_t t = 0; t < per; ++t) acc += rec[base + t].err_over_q;
                PhaseCell c;
                c.family = cfg.families[fi];
                c.q_rl = qs[qi];
                c.nsr = nsrs[ni];
                c.mean_err_over_q = acc / static_cast<double>(per);
                c.log2_mean = std::log2(c.mean_err_over_q);
                c.success = c.mean_err_over_q < 0.5;
                sum.cells.push_back(c);
                if (!failed) {
                    if (c.success)
                        tp.nsr = nsrs[ni];
                    else
                        failed = true;
                }
            }
            curve.push_back(tp);
        }

        const std::size_t keep = qs.size() > cfg.exclude_largest ? qs.size() - cfg.exclude_largest : 0;
        std::vector<double> x, y;
        for (std::size_t qi = 0; qi < keep; ++qi)
            if (curve[qi].nsr > 0.0) {
                curve[qi].in_fit = true;
                x.push_back(curve[qi].q_rl);
                y.push_back(curve[qi].nsr);
            }
        FamilyFit ff{cfg.families[fi], std::nullopt, ""};
        try {
            ff.fit = fit_power_law(x, y);
        } catch (const std::domain_error& e) {
            ff.note = e.what();
        }
        sum.fits.push_back(ff);
        sum.transitions.emplace_back(cfg.families[fi], std::move(curve));
    }
    return sum;
}

}  // namespace musicnd::experiments
