// SPDX-License-Identifier: Apache-2.0
#pragma once

// Fourier transform followed by peak localisation:
//   xhat(w) = sum_{0<=n<=N} y(n) e^{-2 pi i w.n}

#include <cmath>
#include <vector>

#include "musicnd/core/model.hpp"
#include "musicnd/grid.hpp"
#include "musicnd/music.hpp"

namespace musicnd {

struct Periodogram {
    TorusGrid grid;
    std::vector<double> values;  // |xhat| at every grid node
};

/// |xhat(w)| by direct summation.
inline double fourier_magnitude(const MeasurementArray& y, const TorusPoint& w)
{
    const CVector phi = imaging_vector(w, y.grid().max_index());
    cplx acc = 0.0;
    for (long m = 0; m < phi.size(); ++m) acc += y[m] * std::conj(phi(m));
    return std::abs(acc);
}

inline Periodogram periodogram(const MeasurementArray& y, const TorusGrid& grid)
{
    const auto vals = evaluate_on_grid(y.data(), y.grid().max_index(), grid, -1.0);
    Periodogram p{grid, std::vector<double>(vals.size())};
    for (std::size_t g = 0; g < vals.size(); ++g) p.values[g] = std::abs(vals[g]);
    return p;
}

/// s largest local maxima of |xhat|, with the same grid, tie-break and
/// refinement policy as recover_support.
inline SupportEstimate fourier_localize(const MeasurementArray& y, std::size_t s, int grid_res = kDefaultGridResolution,
                                        int refine_rounds = kDefaultRefineRounds)
{
    const TorusGrid grid = TorusGrid::per_rayleigh_length(y.grid().max_index(), grid_res);
    const Periodogram p = periodogram(y, grid);
    auto objective = [&y](const TorusPoint& w) { return -fourier_magnitude(y, w); };

    SupportEstimate out;
    auto pts = detail::extract_peaks(p.values, grid, s, refine_rounds, objective);
    out.deficient = pts.size() < s;
    for (const auto& w : pts) out.correlation.push_back(fourier_magnitude(y, w));
    out.support = FrequencySupport(std::move(pts));
    return out;
}

}  // namespace musicnd
