// SPDX-License-Identifier: Apache-2.0
#pragma once

// Periodic evaluation grids on the torus, separable evaluation of
// trigonometric polynomials on them, wrapped local-maximum search and
// box-constrained line-search refinement.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "musicnd/core/multi_index.hpp"
#include "musicnd/core/torus.hpp"
#include "musicnd/linalg.hpp"

namespace musicnd {

/// Regular periodic grid with points_[k] nodes along direction k at g / points_[k].
class TorusGrid {
public:
    TorusGrid() = default;
    explicit TorusGrid(std::vector<int> points) : points_(std::move(points))
    {
        for (int p : points_)
            if (p < 1) throw std::invalid_argument("grid needs at least one node per direction");
    }

    /// resolution nodes per Rayleigh length 1/N_k along each direction.
    static TorusGrid per_rayleigh_length(const Dims& n, int resolution)
    {
        if (resolution < 1) throw std::invalid_argument("grid resolution must be positive");
        std::vector<int> p(n.size());
        for (std::size_t k = 0; k < n.size(); ++k) p[k] = n[k] * resolution;
        return TorusGrid(std::move(p));
    }

    std::size_t dim() const { return points_.size(); }
    const std::vector<int>& points() const { return points_; }
    long size() const
    {
        long c = 1;
        for (int p : points_) c *= p;
        return c;
    }
    double step(std::size_t k) const { return 1.0 / points_[k]; }

    std::vector<int> index(long flat) const
    {
        std::vector<int> g(points_.size());
        for (std::size_t k = points_.size(); k-- > 0;) {
            g[k] = static_cast<int>(flat % points_[k]);
            flat /= points_[k];
        }
        return g;
    }
    long flat(std::span<const int> g) const
    {
        long m = 0;
        for (std::size_t k = 0; k < points_.size(); ++k) m = m * points_[k] + g[k];
        return m;
    }
    TorusPoint point(long flat_index) const
    {
        const auto g = index(flat_index);
        std::vector<double> w(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) w[k] = static_cast<double>(g[k]) / points_[k];
        return TorusPoint(std::move(w));
    }

private:
    std::vector<int> points_;
};

/// Values of p(w) = sum_{0<=n<=max_index} c[n] e^{sign 2 pi i n.w} at every
/// grid node, in grid flat order. Evaluated one direction at a time, which
/// is exact summation rearranged, not an approximation.
inline std::vector<cplx> evaluate_on_grid(std::span<const cplx> coeffs, const Dims& max_index, const TorusGrid& grid,
                                          double sign)
{
    using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    if (grid.dim() != max_index.size()) throw std::invalid_argument("dimension mismatch");
    if (static_cast<long>(coeffs.size()) != count(max_index)) throw std::invalid_argument("coefficient count mismatch");

    const std::size_t d = max_index.size();
    std::vector<long> dims(d);
    for (std::size_t k = 0; k < d; ++k) dims[k] = max_index[k] + 1L;
    std::vector<cplx> cur(coeffs.begin(), coeffs.end());

    for (std::size_t k = 0; k < d; ++k) {
        const long ek = dims[k];
        const long gk = grid.points()[k];
        RowMajor a(gk, ek);
        for (long g = 0; g < gk; ++g)
            for (long n = 0; n < ek; ++n)
                a(g, n) = unit_phase(sign * static_cast<double>((n * g) % gk) / static_cast<double>(gk));

        long outer = 1, inner = 1;
        for (std::size_t j = 0; j < k; ++j) outer *= dims[j];
        for (std::size_t j = k + 1; j < d; ++j) inner *= dims[j];
        std::vector<cplx> next(static_cast<std::size_t>(outer * gk * inner));
        for (long o = 0; o < outer; ++o) {
            Eigen::Map<const RowMajor> src(cur.data() + o * ek * inner, ek, inner);
            Eigen::Map<RowMajor> dst(next.data() + o * gk * inner, gk, inner);
            dst.noalias() = a * src;
        }
        cur.swap(next);
        dims[k] = gk;
    }
    return cur;
}

/// Flat indices of wrapped local maxima: every neighbour in the 3^D - 1
/// neighbourhood is smaller, or equal with a larger flat index.
inline std::vector<long> local_maxima(std::span<const double> values, const TorusGrid& grid)
{
    if (static_cast<long>(values.size()) != grid.size()) throw std::invalid_argument("grid value count mismatch");
    const std::size_t d = grid.dim();
    const Dims offsets_box(d, 2);
    std::vector<std::vector<int>> offsets;
    for (MultiIndexRange it(offsets_box); !it.done(); it.next()) {
        std::vector<int> o(d);
        bool zero = true;
        for (std::size_t k = 0; k < d; ++k) {
            o[k] = (*it)[k] - 1;
            zero = zero && o[k] == 0;
        }
        if (!zero) offsets.push_back(std::move(o));
    }

    std::vector<long> maxima;
    std::vector<int> nb(d);
    for (long m = 0; m < grid.size(); ++m) {
        const auto g = grid.index(m);
        const double v = values[static_cast<std::size_t>(m)];
        bool is_max = true;
        for (const auto& o : offsets) {
            for (std::size_t k = 0; k < d; ++k) {
                const int p = grid.points()[k];
                nb[k] = ((g[k] + o[k]) % p + p) % p;
            }
            const long q = grid.flat(nb);
            if (q == m) continue;
            const double w = values[static_cast<std::size_t>(q)];
            if (w > v || (w == v && q < m)) {
                is_max = false;
                break;
            }
        }
        if (is_max) maxima.push_back(m);
    }
    return maxima;
}

/// The count largest local maxima, ordered by value (descending) and then by
/// flat index.
inline std::vector<long> top_local_maxima(std::span<const double> values, const TorusGrid& grid, std::size_t count)
{
    auto maxima = local_maxima(values, grid);
    std::stable_sort(maxima.begin(), maxima.end(), [&](long a, long b) {
        const double va = values[static_cast<std::size_t>(a)], vb = values[static_cast<std::size_t>(b)];
        return va > vb || (va == vb && a < b);
    });
    if (maxima.size() > count) maxima.resize(count);
    return maxima;
}

namespace detail {

/// Golden-section minimisation of g on [lo, hi]; returns (argmin, min).
inline std::pair<double, double> golden_section(const std::function<double(double)>& g, double lo, double hi)
{
    constexpr int kGoldenSteps = 48;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - ratio * (hi - lo);
    double e = lo + ratio * (hi - lo);
    double fc = g(c), fe = g(e);
    for (int it = 0; it < kGoldenSteps; ++it) {
        if (fc < fe) {
            hi = e;
            e = c;
            fe = fc;
            c = hi - ratio * (hi - lo);
            fc = g(c);
        } else {
            lo = c;
            c = e;
            fc = fe;
            e = lo + ratio * (hi - lo);
            fe = g(e);
        }
    }
    return fc < fe ? std::pair{c, fc} : std::pair{e, fe};
}

}  // namespace detail

/// Derivative-free descent of f inside the box start +- half_width by
/// golden-section line searches (Powell's direction-set scheme). Each round
/// searches along every direction of the set, then along the round's net
/// displacement, which replaces the oldest direction. The set starts as the
/// coordinate axes; on a quadratic it becomes conjugate after D rounds. A
/// line search only replaces the current point when it improves f.
inline TorusPoint refine_minimum(const std::function<double(const TorusPoint&)>& f, const TorusPoint& start,
                                 const std::vector<double>& half_width, int rounds)
{
    const std::size_t d = start.dim();
    // unwrapped coordinates around the start node
    std::vector<double> x(start.coords().begin(), start.coords().end());
    double fx = f(start);

    std::vector<std::vector<double>> dirs(d, std::vector<double>(d, 0.0));
    for (std::size_t k = 0; k < d; ++k) dirs[k][k] = half_width[k];

    auto line_search = [&](const std::vector<double>& u) {
        double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < d; ++k) {
            if (u[k] == 0.0) continue;
            const double a = (start[k] - half_width[k] - x[k]) / u[k];
            const double b = (start[k] + half_width[k] - x[k]) / u[k];
            lo = std::max(lo, std::min(a, b));
            hi = std::min(hi, std::max(a, b));
        }
        if (!(hi > lo)) return;
        std::vector<double> y = x;
        const auto [t, ft] = detail::golden_section(
            [&](double v) {
                for (std::size_t k = 0; k < d; ++k) y[k] = x[k] + v * u[k];
                return f(TorusPoint(y));
            },
            lo, hi);
        if (ft < fx) {
            for (std::size_t k = 0; k < d; ++k) x[k] += t * u[k];
            fx = ft;
        }
    };

    for (int r = 0; r < rounds; ++r) {
        const std::vector<double> x0 = x;
        for (const auto& u : dirs) line_search(u);
        if (d < 2) continue;
        std::vector<double> net(d);
        double size = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            net[k] = x[k] - x0[k];
            size = std::max(size, std::abs(net[k]) / half_width[k]);
        }
        if (size == 0.0) continue;
        for (auto& v : net) v /= size;
        line_search(net);
        dirs.erase(dirs.begin());
        dirs.push_back(std::move(net));
    }
    return TorusPoint(std::move(x));
}

}  // namespace musicnd
