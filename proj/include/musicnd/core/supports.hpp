// SPDX-License-Identifier: Apache-2.0
#pragma once

// Generators for test and experiment scenes: the three five-point families,
// square lattices, random separated models and per-axis gapped supports.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "musicnd/core/model.hpp"
#include "musicnd/core/random.hpp"

namespace musicnd {

enum class SupportFamily { A, B, C };

inline std::string to_string(SupportFamily f)
{
    switch (f) {
    case SupportFamily::A: return "A";
    case SupportFamily::B: return "B";
    case SupportFamily::C: return "C";
    }
    return "?";
}

inline SupportFamily parse_family(const std::string& s)
{
    if (s == "A" || s == "a") return SupportFamily::A;
    if (s == "B" || s == "b") return SupportFamily::B;
    if (s == "C" || s == "c") return SupportFamily::C;
    throw std::invalid_argument("unknown support family '" + s + "'");
}

class PackingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Five-point planar supports with spacing q, translated to center:
/// A is an L shape, B a plus, C five collinear points along the first axis.
inline FrequencySupport make_support(SupportFamily family, double q, const TorusPoint& center)
{
    if (!(q > 0.0 && q < 0.25)) throw std::invalid_argument("family spacing must satisfy 0 < q < 1/4");
    if (center.dim() != 2) throw std::invalid_argument("support families are two-dimensional");
    std::vector<std::pair<double, double>> offsets;
    switch (family) {
    case SupportFamily::A: offsets = {{0, 0}, {q, 0}, {2 * q, 0}, {0, q}, {0, 2 * q}}; break;
    case SupportFamily::B: offsets = {{0, 0}, {q, 0}, {-q, 0}, {0, q}, {0, -q}}; break;
    case SupportFamily::C: offsets = {{-2 * q, 0}, {-q, 0}, {0, 0}, {q, 0}, {2 * q, 0}}; break;
    }
    std::vector<TorusPoint> pts;
    for (auto [dx, dy] : offsets) pts.emplace_back(std::vector<double>{center[0] + dx, center[1] + dy});
    return FrequencySupport(std::move(pts));
}

/// side^D lattice with the given spacing, centred at center.
inline FrequencySupport lattice_support(int side, double spacing, const TorusPoint& center)
{
    if (side < 1 || !(spacing > 0.0) || side * spacing > 1.0)
        throw std::invalid_argument("lattice does not fit on the torus");
    const Dims box(center.dim(), side - 1);
    std::vector<TorusPoint> pts;
    for (MultiIndexRange it(box); !it.done(); it.next()) {
        std::vector<double> c(center.dim());
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = center[k] + ((*it)[k] - 0.5 * (side - 1)) * spacing;
        pts.emplace_back(std::move(c));
    }
    return FrequencySupport(std::move(pts));
}

/// Random phases with magnitudes log-uniform in [1, dynamic_range];
/// for s >= 2 one entry is exactly 1 and one exactly dynamic_range.
inline Amplitudes random_amplitudes(std::size_t s, double dynamic_range, Rng& rng)
{
    if (!(dynamic_range >= 1.0)) throw std::invalid_argument("dynamic range must be >= 1");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> mag(s);
    for (auto& m : mag) m = std::exp(unit(rng) * std::log(dynamic_range));
    if (s >= 2) {
        std::vector<std::size_t> idx(s);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        mag[idx[0]] = 1.0;
        mag[idx[1]] = dynamic_range;
    } else if (s == 1) {
        mag[0] = 1.0;
    }
    std::vector<cplx> x(s);
    for (std::size_t j = 0; j < s; ++j) x[j] = mag[j] * unit_phase(unit(rng));
    return Amplitudes(std::move(x));
}

inline constexpr int kPackingAttemptBudget = 10000;

namespace detail {

/// Separation in Rayleigh-length units under the max-over-directions metric.
inline double separation_rl(const std::vector<double>& a, const std::vector<double>& b, const Dims& n)
{
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, wrapped_distance(a[k], b[k]) * n[k]);
    return d;
}

inline bool compatible(const std::vector<std::vector<double>>& pts, std::size_t skip, const std::vector<double>& cand,
                       const Dims& n, double min_sep_rl)
{
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j == skip) continue;
        const double d = separation_rl(pts[j], cand, n);
        if (d == 0.0 || d < min_sep_rl * (1.0 - 1e-12)) return false;
    }
    return true;
}

/// Hard-core Metropolis relaxation started from random lattice sites. Used
/// when sequential random addition jams before reaching s points.
inline bool relax_from_lattice(std::vector<std::vector<double>>& pts, std::size_t s, const Dims& n, double min_sep_rl,
                               Rng& rng)
{
    const std::size_t d = n.size();
    Dims sites(d);
    long total = 1;
    for (std::size_t k = 0; k < d; ++k) {
        sites[k] = static_cast<int>(std::floor(n[k] / min_sep_rl + 1e-12));
        if (sites[k] < 1) return false;
        total *= sites[k];
    }
    if (total < static_cast<long>(s)) return false;

    std::vector<long> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), 0L);
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> offset(d);
    for (auto& o : offset) o = unit(rng);

    Dims box(d);
    for (std::size_t k = 0; k < d; ++k) box[k] = sites[k] - 1;
    pts.clear();
    for (std::size_t j = 0; j < s; ++j) {
        const auto idx = unflatten(order[j], box);
        std::vector<double> p(d);
        for (std::size_t k = 0; k < d; ++k) p[k] = wrap_unit(offset[k] + static_cast<double>(idx[k]) / sites[k]);
        pts.push_back(std::move(p));
    }

    constexpr int sweeps = 200;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (std::size_t j = 0; j < s; ++j) {
            std::vector<double> cand(d);
            for (std::size_t k = 0; k < d; ++k) cand[k] = wrap_unit(pts[j][k] + (2.0 * unit(rng) - 1.0) / sites[k]);
            if (compatible(pts, j, cand, n, min_sep_rl)) pts[j] = std::move(cand);
        }
    }
    return true;
}

}  // namespace detail

/// Random s-sparse model on the grid's torus. Pairwise separation, measured in
/// the max-over-directions metric with direction k scaled by N_k, is at least
/// min_sep_rl Rayleigh lengths (min_sep_rl = 0 only asks for distinct points).
inline SpectralModel random_model(std::size_t s, const SamplingGrid& grid, double min_sep_rl, double dynamic_range,
                                  std::uint64_t seed)
{
    if (!(min_sep_rl >= 0.0)) throw std::invalid_argument("minimum separation must be nonnegative");
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Dims& n = grid.max_index();
    const std::size_t d = grid.dim();

    std::vector<std::vector<double>> pts;
    int attempts = 0;
    while (pts.size() < s && attempts < kPackingAttemptBudget) {
        ++attempts;
        std::vector<double> cand(d);
        for (auto& c : cand) c = unit(rng);
        if (detail::compatible(pts, pts.size(), cand, n, min_sep_rl)) pts.push_back(std::move(cand));
    }
    if (pts.size() < s && !(min_sep_rl > 0.0 && detail::relax_from_lattice(pts, s, n, min_sep_rl, rng)))
        throw PackingError("could not place " + std::to_string(s) + " frequencies " + std::to_string(min_sep_rl) +
                           " RL apart within " + std::to_string(kPackingAttemptBudget) + " attempts");

    std::vector<TorusPoint> support;
    for (auto& p : pts) support.emplace_back(std::move(p));
    return SpectralModel(FrequencySupport(std::move(support)), random_amplitudes(s, dynamic_range, rng));
}

/// Random support whose points are pairwise at least q[k] apart along every
/// direction k (the per-axis gap condition). Each coordinate set is an exact
/// uniform draw of s circular points with gaps >= q[k]; coordinates are then
/// paired across directions by independent random permutations.
inline FrequencySupport random_gapped_support(std::size_t s, const std::vector<double>& q, std::uint64_t seed)
{
    if (s == 0) return {};
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    const std::size_t d = q.size();
    std::vector<std::vector<double>> coord(d, std::vector<double>(s));
    for (std::size_t k = 0; k < d; ++k) {
        const double slack = 1.0 - static_cast<double>(s) * q[k];
        if (!(q[k] >= 0.0) || slack < 0.0) throw PackingError("per-axis gap is infeasible for this sparsity");
        std::vector<double> w(s);
        double total = 0.0;
        for (auto& v : w) total += (v = expo(rng));
        double pos = unit(rng);
        for (std::size_t j = 0; j < s; ++j) {
            coord[k][j] = wrap_unit(pos);
            pos += q[k] + slack * w[j] / total;
        }
        std::shuffle(coord[k].begin(), coord[k].end(), rng);
    }
    std::vector<TorusPoint> pts;
    for (std::size_t j = 0; j < s; ++j) {
        std::vector<double> c(d);
        for (std::size_t k = 0; k < d; ++k) c[k] = coord[k][j];
        pts.emplace_back(std::move(c));
    }
    return FrequencySupport(std::move(pts));
}

}  // namespace musicnd
