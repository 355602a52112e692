// SPDX-License-Identifier: Apache-2.0
#pragma once

// Randomised verification suites for the structural identities and bounds.
// Each suite counts cases, violations and cases whose hypotheses fail.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "musicnd/bounds.hpp"
#include "musicnd/core.hpp"
#include "musicnd/experiments/studies.hpp"
#include "musicnd/extremal.hpp"
#include "musicnd/grid.hpp"
#include "musicnd/hankel.hpp"
#include "musicnd/music.hpp"
#include "musicnd/vandermonde.hpp"

namespace musicnd::verify {

struct SuiteReport {
    std::string name;
    std::size_t cases = 0;
    std::size_t violations = 0;
    std::size_t inapplicable = 0;
    std::vector<std::string> diagnostics;  // first kMaxDiagnostics violations
    std::vector<std::pair<std::string, double>> stats;

    static constexpr std::size_t kMaxDiagnostics = 20;

    bool passed() const { return violations == 0; }
    void violation(const std::string& what)
    {
        ++violations;
        if (diagnostics.size() < kMaxDiagnostics) diagnostics.push_back(what);
    }
    void stat(std::string key, double value) { stats.emplace_back(std::move(key), value); }
    double get(const std::string& key) const
    {
        for (const auto& [k, v] : stats)
            if (k == key) return v;
        return std::numeric_limits<double>::quiet_NaN();
    }
};

namespace detail {

inline FrequencySupport uniform_support(std::size_t s, std::size_t d, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<TorusPoint> pts;
    for (std::size_t j = 0; j < s; ++j) {
        std::vector<double> c(d);
        for (auto& v : c) v = unit(rng);
        pts.emplace_back(std::move(c));
    }
    return FrequencySupport(std::move(pts));
}

inline std::vector<cplx> random_complex(std::size_t s, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cplx> x(s);
    for (auto& v : x) v = {normal(rng), normal(rng)};
    return x;
}

inline std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

/// All grids 1 <= N_k <= max_n in dimension d.
inline std::vector<Dims> all_boxes(std::size_t d, int lo, int hi)
{
    std::vector<Dims> out{{}};
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<Dims> next;
        for (const auto& b : out)
            for (int v = lo; v <= hi; ++v) {
                Dims e = b;
                e.push_back(v);
                next.push_back(std::move(e));
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace detail

/// Recursive Hankel construction against the entrywise index law (exact
/// equality) and against Phi^L X (Phi^{N-L})^T (relative error), for every
/// D <= max_dim, N_k <= max_n and valid L, models_per_case random models each.
inline SuiteReport hankel_identity_suite(std::uint64_t seed, std::size_t models_per_case = 100, std::size_t max_dim = 3,
                                         int max_n = 4, double tol = 1e-12)
{
    SuiteReport rep;
    rep.name = "hankel-identity";
    Rng rng(derive_seed(seed, {label_hash("hankel-identity")}));
    std::uniform_int_distribution<int> sparsity(1, 4);
    double worst = 0.0;
    std::size_t pencils = 0;
    for (std::size_t d = 1; d <= max_dim; ++d)
        for (const Dims& n : detail::all_boxes(d, 1, max_n))
            for (const Dims& l : detail::all_boxes(d, 1, max_n - 1)) {
                bool valid = true;
                for (std::size_t k = 0; k < d; ++k) valid = valid && l[k] < n[k];
                if (!valid) continue;
                ++pencils;
                const SamplingGrid grid(n);
                for (std::size_t m = 0; m < models_per_case; ++m) {
                    ++rep.cases;
                    const auto s = static_cast<std::size_t>(sparsity(rng));
                    const SpectralModel model(detail::uniform_support(s, d, rng), Amplitudes(detail::random_complex(s, rng)));
                    const MeasurementArray y = synthesize(model, grid);
                    const CMatrix h = build_hankel(y, l).matrix();
                    if (!(h == hankel_by_index_law(y, l)))
                        rep.violation("recursive and index-law Hankel differ at N=" + to_string(n) + " L=" + to_string(l));
                    const double rel = (h - vandermonde_factors(model, l, n).product()).norm() / h.norm();
                    worst = std::max(worst, rel);
                    if (!(rel < tol))
                        rep.violation("factorisation error " + detail::fmt(rel) + " at N=" + to_string(n) +
                                      " L=" + to_string(l));
                }
            }
    rep.stat("pencils", static_cast<double>(pencils));
    rep.stat("max_relative_error", worst);
    return rep;
}

/// Vandermonde singular-value bounds on random gapped supports: per_dim
/// supports for each D in dims, with even L (odd = false) or odd L.
inline SuiteReport theorem2_suite(std::uint64_t seed, std::size_t per_dim = 100, bool odd = false,
                                  std::vector<std::size_t> dims = {1, 2, 3})
{
    SuiteReport rep;
    rep.name = odd ? "remark2-odd" : "thm2-even";
    double min_upper = std::numeric_limits<double>::infinity();
    double min_lower = std::numeric_limits<double>::infinity();
    std::size_t lower_checked = 0;
    for (std::size_t d : dims) {
        const int max_half = d == 1 ? 20 : (d == 2 ? 8 : 4);
        for (std::size_t t = 0; t < per_dim; ++t) {
            Rng rng(derive_seed(seed, {label_hash(rep.name), d, t}));
            std::uniform_int_distribution<int> half(1, max_half);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            Dims l(d);
            std::vector<double> q(d);
            std::size_t cap = 8;
            for (std::size_t k = 0; k < d; ++k) {
                l[k] = 2 * half(rng) + (odd ? 1 : 0);
                const double lo = std::min(0.5, 1.05 / l[k]);
                const double hi = std::min(0.5, 4.0 / l[k]);
                q[k] = lo + (hi - lo) * unit(rng);
                cap = std::min(cap, static_cast<std::size_t>(std::floor(1.0 / q[k])));
            }
            std::uniform_int_distribution<std::size_t> sparsity(1, std::max<std::size_t>(cap, 1));
            const FrequencySupport support = random_gapped_support(sparsity(rng), q, rng());
            const Theorem2Report r = verify_theorem2(support, l, GapParams(q));
            ++rep.cases;
            min_upper = std::min(min_upper, r.upper_slack / r.bounds.sigma_max_sq());
            if (r.lower_applicable) {
                ++lower_checked;
                if (r.bounds.sigma_min_sq() > 0.0) min_lower = std::min(min_lower, r.lower_slack / r.bounds.sigma_min_sq());
            } else {
                ++rep.inapplicable;
            }
            if (r.violated())
                rep.violation("D=" + std::to_string(d) + " L=" + to_string(l) + " s=" + std::to_string(support.size()) +
                              " smax^2=" + detail::fmt(r.sigma_max * r.sigma_max) + " upper=" +
                              detail::fmt(r.bounds.sigma_max_sq()) + " smin^2=" + detail::fmt(r.sigma_min * r.sigma_min) +
                              " lower=" + detail::fmt(r.bounds.sigma_min_sq()));
        }
    }
    rep.stat("lower_checked", static_cast<double>(lower_checked));
    rep.stat("min_relative_upper_slack", min_upper);
    rep.stat("min_relative_lower_slack", min_lower);
    return rep;
}

struct SelbergCase {
    double q;
    double length;
};

/// H <= indicator <= G on a dense grid, and integral(G - indicator) and
/// integral(indicator - H) against 1/q. Integrals use composite Simpson on
/// the pieces where the indicator is constant, over |q t| <= half_span.
inline SuiteReport selberg_suite(const std::vector<SelbergCase>& cases = {{0.5, 1.0}, {1.0, 2.5}, {2.0, 4.0}, {3.0, 0.7}},
                                 double tol = 1e-8, double rel_tol = 0.01, double half_span = 1000.0)
{
    SuiteReport rep;
    rep.name = "selberg";
    double worst_rel = 0.0;
    for (const auto& c : cases) {
        const double a = 0.5 * c.length;

        // pointwise sandwich, nodes including the jump points
        const double reach = a + 40.0 / c.q;
        const int dense = 40001;
        for (int i = 0; i < dense; ++i) {
            double t = -reach + 2.0 * reach * i / (dense - 1);
            if (i == dense / 3) t = a;
            if (i == dense / 3 + 1) t = -a;
            const double chi = interval_indicator(t, c.length);
            const double g = selberg_majorant(t, c.q, c.length);
            const double h = selberg_minorant(t, c.q, c.length);
            ++rep.cases;
            if (!(h <= chi + tol) || !(chi <= g + tol))
                rep.violation("q=" + detail::fmt(c.q) + " L=" + detail::fmt(c.length) + " t=" + detail::fmt(t) +
                              " H=" + detail::fmt(h) + " G=" + detail::fmt(g));
        }

        auto simpson = [](const std::function<double(double)>& f, double lo, double hi, double step) {
            int m = std::max(2, static_cast<int>(std::ceil((hi - lo) / step)));
            if (m % 2) ++m;
            const double hh = (hi - lo) / m;
            double acc = f(lo) + f(hi);
            for (int i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(lo + i * hh);
            return acc * hh / 3.0;
        };
        const double far = half_span / c.q;
        const double step = 0.02 / c.q;
        auto g_excess = [&](double chi) { return [&, chi](double t) { return selberg_majorant(t, c.q, c.length) - chi; }; };
        auto h_deficit = [&](double chi) { return [&, chi](double t) { return chi - selberg_minorant(t, c.q, c.length); }; };
        const double ig = simpson(g_excess(0.0), -far, -a, step) + simpson(g_excess(1.0), -a, a, step) +
                          simpson(g_excess(0.0), a, far, step);
        const double ih = simpson(h_deficit(0.0), -far, -a, step) + simpson(h_deficit(1.0), -a, a, step) +
                          simpson(h_deficit(0.0), a, far, step);
        const double target = 1.0 / c.q;
        for (double v : {ig, ih}) {
            const double rel = std::abs(v - target) / target;
            worst_rel = std::max(worst_rel, rel);
            ++rep.cases;
            if (!(rel < rel_tol))
                rep.violation("integral " + detail::fmt(v) + " vs 1/q=" + detail::fmt(target) + " at q=" + detail::fmt(c.q) +
                              " L=" + detail::fmt(c.length));
        }
    }
    rep.stat("max_integral_relative_error", worst_rel);
    return rep;
}

/// Noiseless exactness: every trial recovers the support to within tol RL.
inline SuiteReport theorem3_suite(std::uint64_t seed, const experiments::NoiselessConfig& cfg = {}, double tol_rl = 1e-3,
                                  unsigned jobs = 0)
{
    SuiteReport rep;
    rep.name = "thm3-exactness";
    experiments::CommonOptions opt;
    opt.seed = seed;
    opt.jobs = jobs;
    const auto rec = experiments::exp_noiseless(cfg, opt);
    double worst = 0.0;
    for (const auto& r : rec) {
        ++rep.cases;
        worst = std::max(worst, r.err_rl);
        if (!(r.err_rl < tol_rl)) rep.violation("trial seed " + std::to_string(r.seed) + " error " + detail::fmt(r.err_rl) + " RL");
    }
    rep.stat("max_error_rl", worst);
    return rep;
}

/// One randomised noisy trial of the perturbation study.
struct PerturbationTrial {
    std::uint64_t seed = 0;
    Dims n;
    Dims l;
    std::vector<double> q;
    double nsr = 0.0;
    double observed = 0.0;  // grid max of |R^e - R|
    PerturbationBound lemma4;
    PerturbationBound thm4;
    Theorem4Constants constants;
    double sigma1 = 0.0;
    double sigmas = 0.0;
};

/// D = 2 with random even N_k in [12, 20], L = N/2, gap parameters with
/// q_k min(L_k, N_k - L_k) >= 1.5, 2 <= s <= 6, dynamic range in [1, 5] and
/// complex noise at log-uniform NSR in [1e-3, 0.5] unless fixed_nsr >= 0.
/// The correlation perturbation is maximised over a grid with grid_res nodes
/// per RL.
inline PerturbationTrial perturbation_trial(std::uint64_t seed, int grid_res = 4, double fixed_nsr = -1.0)
{
    Rng rng(seed);
    std::uniform_int_distribution<int> half(6, 10);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PerturbationTrial tr;
    tr.seed = seed;
    const std::size_t d = 2;
    tr.n.resize(d);
    tr.l.resize(d);
    tr.q.resize(d);
    std::size_t cap = 6;
    for (std::size_t k = 0; k < d; ++k) {
        tr.n[k] = 2 * half(rng);
        tr.l[k] = tr.n[k] / 2;
        const double lo = 1.5 / tr.l[k];
        const double hi = 0.3;
        tr.q[k] = lo + (hi - lo) * unit(rng);
        cap = std::min(cap, static_cast<std::size_t>(std::floor(1.0 / tr.q[k])));
    }
    std::uniform_int_distribution<std::size_t> sparsity(2, std::max<std::size_t>(cap, 2));
    const std::size_t s = sparsity(rng);
    const FrequencySupport support = random_gapped_support(s, tr.q, rng());
    const double dr = 1.0 + 4.0 * unit(rng);
    const SpectralModel model(support, random_amplitudes(s, dr, rng));
    tr.nsr = std::pow(10.0, -3.0 + (std::log10(0.5) + 3.0) * unit(rng));
    if (fixed_nsr >= 0.0) tr.nsr = fixed_nsr;

    const SamplingGrid grid(tr.n);
    const MeasurementArray y = synthesize(model, grid);
    const MeasurementArray e = gaussian_noise(grid, nsr_to_sigma(tr.nsr, y), NoiseKind::complex_gaussian, rng());
    const MultiLevelHankel h = build_hankel(y, tr.l);
    const MultiLevelHankel he = build_hankel(y + e, tr.l);
    const RVector sv = singular_values(h.matrix());
    tr.sigma1 = sv(0);
    tr.sigmas = sv(static_cast<long>(s) - 1);
    const double e_norm = spectral_norm(build_hankel(e, tr.l).matrix());
    tr.lemma4 = lemma4_bound(tr.sigma1, tr.sigmas, e_norm);
    tr.constants = theorem4_constants(model.amplitudes.x_max(), model.amplitudes.x_min(), GapParams(tr.q), tr.l, tr.n);
    tr.thm4 = theorem4_bound(tr.constants, e_norm);

    if (tr.lemma4.applicable) {
        const TorusGrid tg = TorusGrid::per_rayleigh_length(tr.n, grid_res);
        const auto r0 = correlation_grid(decompose(h, static_cast<long>(s)), tg);
        const auto r1 = correlation_grid(decompose(he, static_cast<long>(s)), tg);
        for (std::size_t g = 0; g < r0.values.size(); ++g)
            tr.observed = std::max(tr.observed, std::abs(r1.values[g] - r0.values[g]));
    }
    return tr;
}

/// Draws trials until `applicable` of them satisfy ||E|| < sigma_s(H), or
/// max_attempts is reached.
inline std::vector<PerturbationTrial> perturbation_trials(std::uint64_t seed, std::size_t applicable = 500,
                                                          std::size_t max_attempts = 5000, unsigned jobs = 0,
                                                          int grid_res = 4, double fixed_nsr = -1.0)
{
    std::vector<PerturbationTrial> out;
    std::size_t ok = 0, next = 0;
    while (ok < applicable && next < max_attempts) {
        const std::size_t batch = std::min(max_attempts - next, std::max<std::size_t>(applicable - ok, 16));
        std::vector<PerturbationTrial> part(batch);
        experiments::parallel_for(batch, jobs, [&](std::size_t i) {
            part[i] = perturbation_trial(derive_seed(seed, {label_hash("perturbation"), next + i}), grid_res, fixed_nsr);
        });
        for (auto& t : part) {
            if (ok >= applicable) break;
            if (t.lemma4.applicable) ++ok;
            out.push_back(std::move(t));
        }
        next += batch;
    }
    return out;
}

/// grid max |R^e - R| <= (4 sigma_1 + 2 ||E||) ||E|| / (sigma_s - ||E||)^2
/// wherever ||E|| < sigma_s.
inline SuiteReport lemma4_suite(const std::vector<PerturbationTrial>& trials)
{
    SuiteReport rep;
    rep.name = "lemma4";
    double max_ratio = 0.0;
    for (const auto& t : trials) {
        if (!t.lemma4.applicable) {
            ++rep.inapplicable;
            continue;
        }
        ++rep.cases;
        max_ratio = std::max(max_ratio, t.observed / t.lemma4.value);
        if (!(t.observed <= t.lemma4.value))
            rep.violation("seed " + std::to_string(t.seed) + " observed " + detail::fmt(t.observed) + " > bound " +
                          detail::fmt(t.lemma4.value));
    }
    rep.stat("max_observed_over_bound", max_ratio);
    return rep;
}

/// On trials where the explicit constants apply (alpha_2 defined and
/// ||E|| / sqrt(#(L)#(N-L)) < alpha_2): sigma_1 <= alpha_1 K, sigma_s >= alpha_2 K,
/// explicit bound >= observed and >= the perturbation bound in sigma_1, sigma_s.
inline SuiteReport theorem4_suite(const std::vector<PerturbationTrial>& trials, double rel = 1e-12)
{
    SuiteReport rep;
    rep.name = "thm4-chain";
    double min_gap = std::numeric_limits<double>::infinity();
    for (const auto& t : trials) {
        if (!t.thm4.applicable) {
            ++rep.inapplicable;
            continue;
        }
        ++rep.cases;
        const double k = t.constants.scale();
        const std::string who = "seed " + std::to_string(t.seed) + ": ";
        if (!(t.sigma1 <= t.constants.alpha1 * k * (1.0 + rel)))
            rep.violation(who + "sigma_1 " + detail::fmt(t.sigma1) + " > alpha_1 K " + detail::fmt(t.constants.alpha1 * k));
        if (!(t.sigmas >= t.constants.alpha2 * k * (1.0 - rel)))
            rep.violation(who + "sigma_s " + detail::fmt(t.sigmas) + " < alpha_2 K " + detail::fmt(t.constants.alpha2 * k));
        if (!(t.thm4.value >= t.observed))
            rep.violation(who + "explicit bound " + detail::fmt(t.thm4.value) + " < observed " + detail::fmt(t.observed));
        if (!(t.lemma4.applicable && t.thm4.value >= t.lemma4.value * (1.0 - rel)))
            rep.violation(who + "explicit bound " + detail::fmt(t.thm4.value) + " < singular-value bound " +
                          detail::fmt(t.lemma4.value));
        min_gap = std::min(min_gap, t.thm4.value / t.lemma4.value);
    }
    rep.stat("min_explicit_over_lemma", min_gap);
    return rep;
}

/// P(X >= k) for X ~ Binomial(n, p).
inline double binomial_upper_tail(std::size_t n, std::size_t k, double p)
{
    if (k == 0) return 1.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double acc = 0.0;
    for (std::size_t i = k; i <= n; ++i) {
        const double lg = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                          static_cast<double>(i) * std::log(p) + static_cast<double>(n - i) * std::log1p(-p);
        acc += std::exp(lg);
    }
    return std::min(1.0, acc);
}

/// Real Gaussian noise: sample mean of ||E|| against the expectation bound,
/// and the empirical tail at the t where the tail formula equals each of
/// tail_levels, tested one-sided at the given binomial confidence.
inline SuiteReport theorem5_suite(std::uint64_t seed, std::size_t draws = 200, double sigma = 1.0, const Dims& n = {20, 20},
                                  const Dims& l = {10, 10}, std::vector<double> tail_levels = {1.0, 0.5, 0.1, 0.01, 0.001},
                                  double confidence = 0.99, unsigned jobs = 0)
{
    SuiteReport rep;
    rep.name = "thm5";
    const GaussianNormBounds b = theorem5_bounds(sigma, l, n);
    const SamplingGrid grid(n);
    std::vector<double> norms(draws);
    experiments::parallel_for(draws, jobs, [&](std::size_t i) {
        const MeasurementArray e =
            gaussian_noise(grid, sigma, NoiseKind::real_gaussian, derive_seed(seed, {label_hash("thm5"), i}));
        norms[i] = spectral_norm(build_hankel(e, l).matrix());
    });
    double mean = 0.0;
    for (double v : norms) mean += v;
    mean /= static_cast<double>(draws);
    ++rep.cases;
    if (!(mean <= b.expectation))
        rep.violation("sample mean " + detail::fmt(mean) + " > expectation bound " + detail::fmt(b.expectation));
    rep.stat("sample_mean", mean);
    rep.stat("expectation_bound", b.expectation);

    const double m = std::max(b.rows, b.cols);
    for (double level : tail_levels) {
        const double t = std::sqrt(2.0 * sigma * sigma * m * std::log((b.rows + b.cols) / level));
        const double p = b.tail(t);
        const auto k = static_cast<std::size_t>(std::count_if(norms.begin(), norms.end(), [t](double v) { return v >= t; }));
        ++rep.cases;
        const double pvalue = binomial_upper_tail(draws, k, p);
        if (pvalue < 1.0 - confidence)
            rep.violation("t=" + detail::fmt(t) + " empirical tail " + detail::fmt(static_cast<double>(k) / draws) +
                          " exceeds formula " + detail::fmt(p) + " (p-value " + detail::fmt(pvalue) + ")");
        rep.stat("tail_t_" + detail::fmt(level), t);
        rep.stat("tail_empirical_" + detail::fmt(level), static_cast<double>(k) / static_cast<double>(draws));
    }
    return rep;
}

}  // namespace musicnd::verify
