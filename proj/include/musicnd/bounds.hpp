// SPDX-License-Identifier: Apache-2.0
#pragma once

// Closed-form guarantees for MUSIC.
//
//   exactness:     L_k >= s and N_k - L_k + 1 >= s
//   perturbation:  |R^e - R| <= (4 sigma_1 + 2 ||E||) ||E|| / (sigma_s - ||E||)^2
//   explicit form: the same with sigma_1, sigma_s replaced by Vandermonde
//                  brackets, after normalising by sqrt(#(L) #(N-L))
//   Gaussian E:    E||E|| <= sigma sqrt(2 m log(#(L) + #(N-L))), m = max(#(L), #(N-L))

#include <cmath>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "musicnd/core/multi_index.hpp"
#include "musicnd/vandermonde.hpp"

namespace musicnd {

inline bool theorem3_check(std::size_t s, const Dims& l, const Dims& n)
{
    if (l.size() != n.size()) throw std::invalid_argument("dimension mismatch");
    for (std::size_t k = 0; k < l.size(); ++k)
        if (l[k] < static_cast<long>(s) || n[k] - l[k] + 1 < static_cast<long>(s)) return false;
    return true;
}

struct PerturbationBound {
    double value = 0.0;
    double sigma1 = 0.0;
    double sigmas = 0.0;
    double e_norm = 0.0;
    bool applicable = false;  // ||E|| < sigma_s
};

inline PerturbationBound lemma4_bound(double sigma1, double sigmas, double e_norm)
{
    if (!(sigmas > 0.0)) throw std::domain_error("perturbation bound needs sigma_s(H) > 0");
    if (!(e_norm >= 0.0)) throw std::invalid_argument("noise norm must be nonnegative");
    PerturbationBound b{0.0, sigma1, sigmas, e_norm, e_norm < sigmas};
    if (b.applicable) {
        const double gap = sigmas - e_norm;
        b.value = (4.0 * sigma1 + 2.0 * e_norm) * e_norm / (gap * gap);
    } else {
        b.value = std::numeric_limits<double>::infinity();
    }
    return b;
}

struct Theorem4Constants {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    GapParams q;
    Dims l;
    Dims n;
    double x_max = 0.0;
    double x_min = 0.0;
    bool alpha2_defined = false;  // every factor (1 - 1/(q_k L_k)), (1 - 1/(q_k (N_k - L_k))) positive
    bool even = false;            // all L_k, N_k - L_k even; otherwise odd sizes are rounded per bound

    double scale() const { return std::sqrt(static_cast<double>(count(l)) * static_cast<double>(count(difference(n, l)))); }
};

/// alpha_1, alpha_2. For odd L_k or N_k - L_k the Vandermonde bounds of the
/// corresponding factor use the rounded-up size above and rounded-down size
/// below, so that sigma_1(H) <= alpha_1 K and sigma_s(H) >= alpha_2 K still hold
/// with K = sqrt(#(L) #(N-L)).
inline Theorem4Constants theorem4_constants(double x_max, double x_min, const GapParams& q, const Dims& l, const Dims& n)
{
    check_pencil(l, n);
    if (q.dim() != l.size()) throw std::invalid_argument("dimension mismatch");
    if (!(x_max >= x_min && x_min > 0.0)) throw std::invalid_argument("need x_max >= x_min > 0");
    const Dims m = difference(n, l);
    Theorem4Constants c{0.0, 0.0, q, l, n, x_max, x_min, false, true};
    for (std::size_t k = 0; k < l.size(); ++k)
        if (l[k] % 2 != 0 || m[k] % 2 != 0) c.even = false;

    const SingularValueBounds bl = remark2_bounds(q, l);
    const SingularValueBounds bm = remark2_bounds(q, m);
    const double k2 = static_cast<double>(count(l)) * static_cast<double>(count(m));
    c.alpha1 = x_max * std::sqrt(bl.sigma_max_sq() * bm.sigma_max_sq() / k2);
    c.alpha2_defined = bl.lower_available && bm.lower_available;
    if (c.alpha2_defined) c.alpha2 = x_min * std::sqrt(bl.sigma_min_sq() * bm.sigma_min_sq() / k2);
    return c;
}

/// eta = ||E|| / sqrt(#(L) #(N-L)); value (4 alpha_1 + 2 eta) eta / (alpha_2 - eta)^2.
inline PerturbationBound theorem4_bound(const Theorem4Constants& c, double e_norm)
{
    if (!(e_norm >= 0.0)) throw std::invalid_argument("noise norm must be nonnegative");
    const double eta = e_norm / c.scale();
    PerturbationBound b{std::numeric_limits<double>::infinity(), c.alpha1, c.alpha2, eta, false};
    if (c.alpha2_defined && eta < c.alpha2) {
        b.applicable = true;
        const double gap = c.alpha2 - eta;
        b.value = (4.0 * c.alpha1 + 2.0 * eta) * eta / (gap * gap);
    }
    return b;
}

struct HankelSigmaBounds {
    double sigma1_upper = 0.0;
    double sigmas_lower = 0.0;
    bool lower_available = false;
};

/// sigma_1(H) <= x_max sigma_max(Phi^L) sigma_max(Phi^{N-L}) and
/// sigma_s(H) >= x_min sigma_min(Phi^L) sigma_min(Phi^{N-L}), with the
/// Vandermonde factors replaced by their gap bounds.
inline HankelSigmaBounds hankel_sigma_bounds(double x_max, double x_min, const GapParams& q, const Dims& l, const Dims& n)
{
    const Theorem4Constants c = theorem4_constants(x_max, x_min, q, l, n);
    return {c.alpha1 * c.scale(), c.alpha2 * c.scale(), c.alpha2_defined};
}

inline HankelSigmaBounds hankel_sigma_bounds(const SpectralModel& model, const GapParams& q, const Dims& l, const Dims& n)
{
    return hankel_sigma_bounds(model.amplitudes.x_max(), model.amplitudes.x_min(), q, l, n);
}

struct GaussianNormBounds {
    double expectation = 0.0;
    double rows = 0.0;
    double cols = 0.0;
    double sigma = 0.0;

    /// P(||E|| >= t) <= (#(L) + #(N-L)) exp(-t^2 / (2 sigma^2 max(#(L), #(N-L)))), capped at 1.
    double tail(double t) const
    {
        if (sigma == 0.0) return t > 0.0 ? 0.0 : 1.0;
        const double m = std::max(rows, cols);
        return std::min(1.0, (rows + cols) * std::exp(-t * t / (2.0 * sigma * sigma * m)));
    }
    /// The tail formula without the cap at 1.
    double tail_raw(double t) const
    {
        const double m = std::max(rows, cols);
        return (rows + cols) * std::exp(-t * t / (2.0 * sigma * sigma * m));
    }
};

/// Bounds on the spectral norm of the Hankel matrix of i.i.d. N(0, sigma^2)
/// real noise. Natural logarithm.
inline GaussianNormBounds theorem5_bounds(double sigma, const Dims& l, const Dims& n)
{
    if (!(sigma >= 0.0)) throw std::invalid_argument("noise level must be nonnegative");
    check_pencil(l, n);
    GaussianNormBounds b;
    b.sigma = sigma;
    b.rows = static_cast<double>(count(l));
    b.cols = static_cast<double>(count(difference(n, l)));
    b.expectation = sigma * std::sqrt(2.0 * std::max(b.rows, b.cols) * std::log(b.rows + b.cols));
    return b;
}

/// sigma sqrt(log #(N) / #(N)).
inline double asymptotic_rate(double sigma, const Dims& n)
{
    const double c = static_cast<double>(count(n));
    return sigma * std::sqrt(std::log(c) / c);
}

}  // namespace musicnd
