// SPDX-License-Identifier: Apache-2.0
#pragma once

// MUSIC on a D-fold Hankel matrix.
//
//   1. H^e = [U1 U2] diag(sigma) V^*, U1 holding the s leading left singular
//      vectors (signal space) and U2 the rest (noise space).
//   2. R(w) = ||U2^* phi^L(w)|| / ||phi^L(w)||, J(w) = 1 / R(w).
//   3. The support estimate is the s largest local maxima of J, located on a
//      periodic grid and refined locally by minimising R.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "musicnd/core/model.hpp"
#include "musicnd/grid.hpp"
#include "musicnd/hankel.hpp"
#include "musicnd/linalg.hpp"

namespace musicnd {

class SubspaceDecomposition {
public:
    SubspaceDecomposition(CMatrix u1, CMatrix u2, RVector sigma, Dims l, Dims n)
        : u1_(std::move(u1)), u2_(std::move(u2)), sigma_(std::move(sigma)), l_(std::move(l)), n_(std::move(n))
    {}

    const CMatrix& signal_space() const { return u1_; }
    const CMatrix& noise_space() const { return u2_; }
    const RVector& singular_values() const { return sigma_; }
    long sparsity() const { return u1_.cols(); }
    const Dims& pencil() const { return l_; }
    const Dims& max_index() const { return n_; }
    std::size_t dim() const { return l_.size(); }

private:
    CMatrix u1_;
    CMatrix u2_;
    RVector sigma_;
    Dims l_;
    Dims n_;
};

/// Split the SVD of H at rank s, irrespective of any gap in the spectrum.
inline SubspaceDecomposition decompose(const MultiLevelHankel& h, long s)
{
    const long limit = std::min(h.rows(), h.cols());
    if (s < 0 || s >= limit)
        throw std::invalid_argument("model order must satisfy 0 <= s < min(#(L), #(N-L)) = " + std::to_string(limit));
    const Svd f = svd(h.matrix());
    const long m = f.U.rows();
    return {f.U.leftCols(s), f.U.rightCols(m - s), f.sigma, h.pencil(), h.max_index()};
}

/// R(w) from the signal space, as the relative residual of projecting phi
/// onto span(U1): ||phi - U1 U1^* phi|| / ||phi||. Same cost as the
/// complement formula, without its loss of accuracy near zeros of R.
inline double noise_correlation(const SubspaceDecomposition& dec, const TorusPoint& w)
{
    const CVector phi = imaging_vector(w, dec.pencil());
    if (dec.sparsity() == 0) return 1.0;
    const CVector coef = dec.signal_space().adjoint() * phi;
    const CVector residual = phi - dec.signal_space() * coef;
    return residual.norm() / phi.norm();
}

/// sqrt(max(0, 1 - ||U1^* phi||^2 / #(L))). Used on evaluation grids.
inline double noise_correlation_complement(const SubspaceDecomposition& dec, const TorusPoint& w)
{
    const CVector phi = imaging_vector(w, dec.pencil());
    const double proj = (dec.signal_space().adjoint() * phi).squaredNorm();
    return std::sqrt(std::max(0.0, 1.0 - proj / static_cast<double>(phi.size())));
}

/// ||U2^* phi|| / ||phi|| by direct multiplication with the noise space.
inline double noise_correlation_direct(const SubspaceDecomposition& dec, const TorusPoint& w)
{
    const CVector phi = imaging_vector(w, dec.pencil());
    return (dec.noise_space().adjoint() * phi).norm() / phi.norm();
}

inline constexpr double kImagingCap = 1e15;

inline double imaging_from_correlation(double r)
{
    return r < 1.0 / kImagingCap ? kImagingCap : 1.0 / r;
}

inline double imaging_function(const SubspaceDecomposition& dec, const TorusPoint& w)
{
    return imaging_from_correlation(noise_correlation(dec, w));
}

/// Values on a periodic grid, in grid flat order.
struct ImagingGrid {
    TorusGrid grid;
    std::vector<double> values;
};

/// R on every node of the grid via separable evaluation of U1^* phi.
inline ImagingGrid correlation_grid(const SubspaceDecomposition& dec, const TorusGrid& grid)
{
    const double rows = static_cast<double>(count(dec.pencil()));
    std::vector<double> energy(static_cast<std::size_t>(grid.size()), 0.0);
    std::vector<cplx> coeffs(static_cast<std::size_t>(dec.signal_space().rows()));
    for (long j = 0; j < dec.sparsity(); ++j) {
        for (long m = 0; m < dec.signal_space().rows(); ++m)
            coeffs[static_cast<std::size_t>(m)] = std::conj(dec.signal_space()(m, j));
        const auto vals = evaluate_on_grid(coeffs, dec.pencil(), grid, 1.0);
        for (std::size_t g = 0; g < vals.size(); ++g) energy[g] += std::norm(vals[g]);
    }
    ImagingGrid out{grid, std::vector<double>(energy.size())};
    for (std::size_t g = 0; g < energy.size(); ++g) out.values[g] = std::sqrt(std::max(0.0, 1.0 - energy[g] / rows));
    return out;
}

inline ImagingGrid imaging_grid(const SubspaceDecomposition& dec, const TorusGrid& grid)
{
    ImagingGrid r = correlation_grid(dec, grid);
    for (auto& v : r.values) v = imaging_from_correlation(v);
    return r;
}

struct SupportEstimate {
    FrequencySupport support;
    std::vector<double> correlation;  // R^e at each recovered frequency
    bool deficient = false;           // fewer than s local maxima were found
    bool shape_warning = false;       // L_k >= s and N_k - L_k + 1 >= s not met
};

inline constexpr int kDefaultGridResolution = 20;
inline constexpr int kDefaultRefineRounds = 3;

namespace detail {

inline constexpr std::size_t kCandidateFactor = 3;
inline constexpr int kZoom = 4;

/// Local minima of objective on a patch with kZoom nodes per grid cell
/// spanning +- one grid cell around center: interior patch nodes whose
/// 3^D - 1 neighbours are all larger (or equal with a later index). If there
/// are none, the smallest patch node.
inline std::vector<TorusPoint> patch_minima(const std::function<double(const TorusPoint&)>& objective,
                                            const TorusPoint& center, const TorusGrid& grid)
{
    const std::size_t d = grid.dim();
    const Dims box(d, 2 * kZoom);
    const long total = count(box);
    std::vector<double> val(static_cast<std::size_t>(total));
    std::vector<TorusPoint> pts;
    pts.reserve(static_cast<std::size_t>(total));
    for (MultiIndexRange it(box); !it.done(); it.next()) {
        std::vector<double> w(d);
        for (std::size_t k = 0; k < d; ++k) w[k] = center[k] + ((*it)[k] - kZoom) * grid.step(k) / kZoom;
        pts.emplace_back(std::move(w));
        val[pts.size() - 1] = objective(pts.back());
    }

    std::vector<TorusPoint> out;
    std::vector<int> nb(d);
    for (MultiIndexRange it(box); !it.done(); it.next()) {
        const auto& g = *it;
        if (std::any_of(g.begin(), g.end(), [](int v) { return v == 0 || v == 2 * kZoom; })) continue;
        const long m = flatten(g, box);
        bool is_min = true;
        for (MultiIndexRange o(Dims(d, 2)); is_min && !o.done(); o.next()) {
            for (std::size_t k = 0; k < d; ++k) nb[k] = g[k] + (*o)[k] - 1;
            const long q = flatten(nb, box);
            if (q == m) continue;
            const double a = val[static_cast<std::size_t>(q)], b = val[static_cast<std::size_t>(m)];
            if (a < b || (a == b && q < m)) is_min = false;
        }
        if (is_min) out.push_back(pts[static_cast<std::size_t>(m)]);
    }
    if (out.empty()) out.push_back(pts[static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin())]);
    return out;
}

/// Shared peak extraction. The kCandidateFactor * s largest local maxima of
/// score on the grid are examined on a kZoom-times finer patch, and every
/// local minimum of objective there is refined within +- one grid cell.
/// Refined points are ranked by objective (ties by discovery order), points
/// left on the edge of their refinement box after all interior ones, and
/// taken greedily, skipping any within half a fine cell along every direction
/// of one already taken.
///
/// With deflate (objective >= 0 vanishing at the targets), each taken point p
/// is also searched for a second zero nearby by minimising
/// objective(w) / min(1, |w - p| / cell). A point found this way that an
/// undeflated refinement keeps away from every taken point replaces the worst
/// taken point when its objective is smaller. This separates pairs closer
/// than a grid cell.
inline std::vector<TorusPoint> extract_peaks(const std::vector<double>& score, const TorusGrid& grid, std::size_t s,
                                             int refine_rounds,
                                             const std::function<double(const TorusPoint&)>& objective,
                                             bool deflate = false)
{
    const auto peaks = top_local_maxima(score, grid, kCandidateFactor * s);
    const std::size_t d = grid.dim();
    std::vector<double> cell(d), fine(d);
    for (std::size_t k = 0; k < d; ++k) {
        cell[k] = grid.step(k);
        fine[k] = cell[k] / kZoom;
    }

    struct Candidate {
        TorusPoint point;
        bool edge;
        double value;
        std::size_t order;
    };
    std::vector<Candidate> cand;
    for (long p : peaks)
        for (const auto& seed : patch_minima(objective, grid.point(p), grid)) {
            TorusPoint x = refine_rounds > 0 ? refine_minimum(objective, seed, cell, refine_rounds) : seed;
            bool edge = false;
            for (std::size_t k = 0; k < d && refine_rounds > 0; ++k)
                edge = edge || wrapped_distance_k(x, seed, k) >= cell[k] * (1.0 - 1e-9);
            const double v = objective(x);
            cand.push_back({std::move(x), edge, v, cand.size()});
        }
    std::stable_sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
        if (a.edge != b.edge) return !a.edge;
        return a.value < b.value || (a.value == b.value && a.order < b.order);
    });

    auto duplicate = [&](const TorusPoint& a, const TorusPoint& b) {
        for (std::size_t k = 0; k < d; ++k)
            if (wrapped_distance_k(a, b, k) >= 0.5 * fine[k]) return false;
        return true;
    };
    std::vector<TorusPoint> pts;
    std::vector<double> vals;
    for (const auto& c : cand) {
        if (pts.size() == s) break;
        if (std::any_of(pts.begin(), pts.end(), [&](const TorusPoint& q) { return duplicate(q, c.point); })) continue;
        pts.push_back(c.point);
        vals.push_back(c.value);
    }
    if (!deflate || refine_rounds <= 0 || pts.empty()) return pts;

    const std::size_t taken = pts.size();
    for (std::size_t i = 0; i < taken; ++i) {
        const TorusPoint p = pts[i];
        auto deflated = [&](const TorusPoint& w) {
            double r = 0.0;
            for (std::size_t k = 0; k < d; ++k) r = std::max(r, wrapped_distance_k(w, p, k) / cell[k]);
            if (r == 0.0) return std::numeric_limits<double>::infinity();
            return objective(w) / std::min(1.0, r);
        };
        for (const auto& seed : patch_minima(deflated, p, grid)) {
            const TorusPoint q0 = refine_minimum(deflated, seed, cell, refine_rounds);
            const TorusPoint q = refine_minimum(objective, q0, cell, refine_rounds);
            if (std::any_of(pts.begin(), pts.end(), [&](const TorusPoint& t) { return duplicate(t, q); })) continue;
            const double v = objective(q);
            const auto worst = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
            if (pts.size() < s) {
                pts.push_back(q);
                vals.push_back(v);
            } else if (v < vals[worst]) {
                pts[worst] = q;
                vals[worst] = v;
            }
        }
    }

    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<TorusPoint> out;
    for (std::size_t j : idx) out.push_back(pts[j]);
    return out;
}

inline bool order_fits_pencil(std::size_t s, const Dims& l, const Dims& n)
{
    for (std::size_t k = 0; k < l.size(); ++k)
        if (l[k] < static_cast<long>(s) || n[k] - l[k] + 1 < static_cast<long>(s)) return false;
    return true;
}

}  // namespace detail

inline SupportEstimate recover_support(const SubspaceDecomposition& dec, int grid_res = kDefaultGridResolution,
                                       int refine_rounds = kDefaultRefineRounds)
{
    const auto s = static_cast<std::size_t>(dec.sparsity());
    const TorusGrid grid = TorusGrid::per_rayleigh_length(dec.max_index(), grid_res);
    const ImagingGrid j = imaging_grid(dec, grid);
    auto objective = [&dec](const TorusPoint& w) { return noise_correlation(dec, w); };

    SupportEstimate out;
    auto pts = detail::extract_peaks(j.values, grid, s, refine_rounds, objective, true);
    out.deficient = pts.size() < s;
    out.shape_warning = !detail::order_fits_pencil(s, dec.pencil(), dec.max_index());
    for (const auto& p : pts) out.correlation.push_back(noise_correlation(dec, p));
    out.support = FrequencySupport(std::move(pts));
    return out;
}

/// MUSIC support estimate from the noisy Hankel matrix and model order s.
inline SupportEstimate recover_support(const MultiLevelHankel& he, long s, int grid_res = kDefaultGridResolution,
                                       int refine_rounds = kDefaultRefineRounds)
{
    return recover_support(decompose(he, s), grid_res, refine_rounds);
}

struct AmplitudeEstimate {
    std::vector<cplx> values;
    bool rank_deficient = false;
    double residual_norm = 0.0;
};

/// Least-squares amplitudes for a given support: minimise
/// sum_n |sum_j x_j e^{2 pi i w^j . n} - y(n)|^2. A rank-deficient design
/// (coincident frequencies) yields the minimum-norm solution.
inline AmplitudeEstimate recover_amplitudes(const MeasurementArray& y, const FrequencySupport& support)
{
    if (support.empty()) throw std::invalid_argument("amplitude recovery needs at least one frequency");
    const Dims& n = y.grid().max_index();
    CMatrix a(y.grid().sample_count(), static_cast<long>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) a.col(static_cast<long>(j)) = imaging_vector(support[j], n);
    const CVector b = Eigen::Map<const CVector>(y.data().data(), static_cast<long>(y.size()));

    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(a);
    const CVector x = cod.solve(b);
    AmplitudeEstimate out;
    out.values.assign(x.data(), x.data() + x.size());
    out.rank_deficient = cod.rank() < a.cols();
    out.residual_norm = (a * x - b).norm();
    return out;
}

}  // namespace musicnd
