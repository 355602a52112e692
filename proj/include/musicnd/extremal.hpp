// SPDX-License-Identifier: Apache-2.0
#pragma once

// Beurling's entire majorant of sgn(t) and the Selberg majorant/minorant of
// the indicator of [-L/2, L/2], whose Fourier transforms are supported on
// [-q, q]:
//
//   B(t) = (sin(pi t)/pi)^2 [ sum_{n>=0} (t-n)^-2 - sum_{n<=-1} (t-n)^-2 + 2/t ]
//   G(t) =  (B(q(L/2 - t)) + B(q(t + L/2))) / 2      >= indicator
//   H(t) = -(B(q(t - L/2)) + B(q(-L/2 - t))) / 2     <= indicator
//
// with integral(G - indicator) = integral(indicator - H) = 1/q.

#include <cmath>
#include <cstdlib>

#include "musicnd/linalg.hpp"

namespace musicnd {

namespace detail {

/// sin(pi x) / (pi x)
inline double sinc(double x)
{
    if (std::abs(x) < 1e-8) return 1.0 - (kPi * x) * (kPi * x) / 6.0;
    return std::sin(kPi * x) / (kPi * x);
}

/// Trigamma tail sum_{k>=0} (z + k)^-2 for z >= 32 by its asymptotic series.
inline double trigamma_tail(double z)
{
    const double w = 1.0 / z;
    const double w2 = w * w;
    return w + w2 * (0.5 + w * (1.0 / 6.0 + w2 * (-1.0 / 30.0 + w2 * (1.0 / 42.0 + w2 * (-1.0 / 30.0)))));
}

inline constexpr int kSeriesMargin = 64;

}  // namespace detail

/// Beurling's function. The series are summed directly up to kSeriesMargin
/// terms past the pole region and the remainder is taken from the trigamma
/// asymptotic expansion, giving close to machine accuracy for moderate |t|.
/// The term whose pole is nearest to t is folded together with (sin pi t)^2
/// as a squared sinc, so integer t needs no special case.
inline double beurling_B(double t)
{
    const double s = std::sin(kPi * t) / kPi;
    const long nearest = std::lround(t);

    // sum_{n=0}^{m1} (t-n)^-2, skipping the nearest pole, then the tail
    const long m1 = std::max(0L, static_cast<long>(std::ceil(t))) + detail::kSeriesMargin;
    double plus = 0.0;
    for (long n = m1; n >= 0; --n) {
        if (n == nearest) continue;
        const double d = t - static_cast<double>(n);
        plus += 1.0 / (d * d);
    }
    plus += detail::trigamma_tail(static_cast<double>(m1 + 1) - t);

    // sum_{n=1}^{m2} (t+n)^-2, skipping the nearest pole (at n = -nearest)
    const long m2 = std::max(0L, static_cast<long>(std::ceil(-t))) + detail::kSeriesMargin;
    double minus = 0.0;
    for (long n = m2; n >= 1; --n) {
        if (-n == nearest) continue;
        const double d = t + static_cast<double>(n);
        minus += 1.0 / (d * d);
    }
    minus += detail::trigamma_tail(static_cast<double>(m2 + 1) + t);

    double value = s * s * (plus - minus);
    const double pole = detail::sinc(t - static_cast<double>(nearest));
    value += (nearest >= 0 ? 1.0 : -1.0) * pole * pole;
    value += 2.0 * s * detail::sinc(t);  // (sin pi t / pi)^2 * 2/t
    return value;
}

/// Indicator of the closed interval [-L/2, L/2].
inline double interval_indicator(double t, double length)
{
    return std::abs(t) <= 0.5 * length ? 1.0 : 0.0;
}

inline double selberg_majorant(double t, double q, double length)
{
    return 0.5 * (beurling_B(q * (0.5 * length - t)) + beurling_B(q * (t + 0.5 * length)));
}

inline double selberg_minorant(double t, double q, double length)
{
    return -0.5 * (beurling_B(q * (t - 0.5 * length)) + beurling_B(q * (-0.5 * length - t)));
}

}  // namespace musicnd
