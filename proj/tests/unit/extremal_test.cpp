// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>

#include "musicnd/extremal.hpp"

using namespace musicnd;

namespace {

// B(t) = (sin pi t / pi)^2 (psi1(-t) - psi1(1 + t) + 2 / t) for non-integer t.
double beurling_oracle(double t)
{
    const double s = std::sin(M_PI * t) / M_PI;
    return s * s * (boost::math::trigamma(-t) - boost::math::trigamma(1.0 + t) + 2.0 / t);
}

double sgn(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

template <class F>
double simpson(F f, double a, double b, int panels)
{
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
}

}  // namespace

TEST(Extremal, TrigammaTailMatchesBoost)
{
    for (double z : {32.0, 40.5, 77.25, 500.0, 1e4})
        EXPECT_NEAR(detail::trigamma_tail(z) / boost::math::trigamma(z), 1.0, 1e-14) << z;
}

TEST(Extremal, BeurlingMatchesTrigammaClosedForm)
{
    for (double t = -40.0 + 0.0137; t < 40.0; t += 0.731)
        EXPECT_NEAR(beurling_B(t), beurling_oracle(t), 1e-12 * std::max(1.0, std::abs(beurling_oracle(t)))) << t;
}

TEST(Extremal, BeurlingInterpolatesSignAtIntegers)
{
    for (int m = 1; m <= 30; ++m) {
        EXPECT_NEAR(beurling_B(m), 1.0, 1e-13);
        EXPECT_NEAR(beurling_B(-m), -1.0, 1e-13);
    }
    EXPECT_NEAR(beurling_B(0.0), 1.0, 1e-13);
}

TEST(Extremal, BeurlingMajorisesSign)
{
    for (long i = -50000; i <= 50000; ++i) {
        const double t = i * 1e-3;
        ASSERT_GE(beurling_B(t), sgn(t) - 1e-12) << t;
    }
}

TEST(Extremal, BeurlingExcessIntegratesToOne)
{
    const auto excess = [](double t) { return beurling_B(t) - sgn(t); };
    double total = 0.0;
    for (int a = -200; a < 200; ++a) total += simpson(excess, a, a + 1, 40);
    EXPECT_NEAR(total, 1.0, 0.01);
}

TEST(Extremal, SelbergSandwich)
{
    const double q = 1.0, len = 2.0;
    for (int i = -3000; i <= 3000; ++i) {
        const double t = i * len / 1000.0;
        const double chi = interval_indicator(t, len);
        ASSERT_GE(selberg_majorant(t, q, len), chi - 1e-12) << t;
        ASSERT_LE(selberg_minorant(t, q, len), chi + 1e-12) << t;
    }
}

TEST(Extremal, SelbergIntegrals)
{
    const double q = 1.0, len = 2.0;
    // the indicator integrates to len exactly, so only the smooth functions are sampled
    double upper = -len, lower = len;
    for (int a = -400; a < 400; ++a) {
        upper += simpson([&](double t) { return selberg_majorant(t, q, len); }, a, a + 1, 40);
        lower -= simpson([&](double t) { return selberg_minorant(t, q, len); }, a, a + 1, 40);
    }
    EXPECT_NEAR(upper, 1.0 / q, 0.01 / q);
    EXPECT_NEAR(lower, 1.0 / q, 0.01 / q);
}

TEST(Extremal, SelbergAtCentre)
{
    for (double q : {0.3, 1.0, 2.5})
        for (double len : {0.5, 2.0, 7.0}) {
            EXPECT_GE(selberg_majorant(0.0, q, len), 1.0);
            EXPECT_LE(selberg_minorant(0.0, q, len), 1.0);
        }
}
