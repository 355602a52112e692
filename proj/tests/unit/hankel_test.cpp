// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <complex>
#include <stdexcept>
#include <vector>

#include "musicnd/core.hpp"
#include "musicnd/hankel.hpp"
#include "musicnd/linalg.hpp"

using namespace musicnd;

namespace {

MeasurementArray counting_signal(const Dims& n)
{
    MeasurementArray y{SamplingGrid(n)};
    for (long m = 0; m < static_cast<long>(y.size()); ++m) y[m] = cplx(m + 1.0, -0.5 * m);
    return y;
}

double relative_residual(const SpectralModel& model, const Dims& n, const Dims& l)
{
    const auto h = build_hankel(synthesize(model, SamplingGrid(n)), l).matrix();
    const auto f = vandermonde_factors(model, l, n);
    const CMatrix rebuilt = f.phi_rows * f.weights.asDiagonal() * f.phi_cols.transpose();
    return (h - rebuilt).norm() / h.norm();
}

}  // namespace

TEST(Hankel, OneDimensionalTwoByThree)
{
    const auto y = counting_signal({3});
    const auto h = build_hankel(y, {1}).matrix();
    ASSERT_EQ(h.rows(), 2);
    ASSERT_EQ(h.cols(), 3);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_EQ(h(i, j), y[i + j]);
}

TEST(Hankel, TwoLevelMatchesIndexLaw)
{
    const auto y = counting_signal({2, 2});
    const auto h = build_hankel(y, {1, 1}).matrix();
    ASSERT_EQ(h.rows(), 4);
    ASSERT_EQ(h.cols(), 4);
    for (int a1 = 0; a1 <= 1; ++a1)
        for (int a2 = 0; a2 <= 1; ++a2)
            for (int b1 = 0; b1 <= 1; ++b1)
                for (int b2 = 0; b2 <= 1; ++b2) {
                    const std::vector<int> sum{a1 + b1, a2 + b2};
                    EXPECT_EQ(h(a1 * 2 + a2, b1 * 2 + b2), y.at(sum));
                }
}

TEST(Hankel, BlockBuilderAgreesWithIndexLawInThreeDimensions)
{
    const auto y = counting_signal({3, 2, 4});
    EXPECT_EQ(build_hankel(y, {1, 1, 2}).matrix(), hankel_by_index_law(y, {1, 1, 2}));
    EXPECT_EQ(build_hankel(y, {2, 1, 1}).matrix(), hankel_by_index_law(y, {2, 1, 1}));
}

TEST(Hankel, ConstantSignal)
{
    MeasurementArray y{SamplingGrid({4, 3})};
    for (auto& v : y.data()) v = cplx(2.0, -1.0);
    const auto h = build_hankel(y, {2, 1}).matrix();
    EXPECT_TRUE((h.array() == cplx(2.0, -1.0)).all());
}

TEST(Hankel, SingleZeroFrequencyIsAllOnes)
{
    const SpectralModel m({TorusPoint{0.0}}, Amplitudes({1.0}));
    const auto h = build_hankel(synthesize(m, SamplingGrid({6})), {3}).matrix();
    for (long i = 0; i < h.rows(); ++i)
        for (long j = 0; j < h.cols(); ++j) EXPECT_NEAR(std::abs(h(i, j) - 1.0), 0.0, 1e-15);
}

TEST(Hankel, Linearity)
{
    const auto a = counting_signal({4, 4});
    const auto b = synthesize(random_model(2, SamplingGrid({4, 4}), 0.0, 1.0, 2), SamplingGrid({4, 4}));
    const cplx c(0.3, -2.0);
    const CMatrix lhs = build_hankel(c * a + b, {2, 2}).matrix();
    const CMatrix rhs = c * build_hankel(a, {2, 2}).matrix() + build_hankel(b, {2, 2}).matrix();
    EXPECT_LT((lhs - rhs).norm(), 1e-12 * rhs.norm());
}

TEST(Hankel, VandermondeFactorisation)
{
    EXPECT_LT(relative_residual(random_model(3, SamplingGrid({6, 6}), 0.0, 2.0, 4), {6, 6}, {3, 3}), 1e-12);
    EXPECT_LT(relative_residual(random_model(2, SamplingGrid({3, 4, 2}), 0.0, 2.0, 5), {3, 4, 2}, {1, 2, 1}), 1e-12);
}

TEST(Hankel, RankAtMostSparsity)
{
    const SamplingGrid grid({10, 10});
    const auto m = random_model(4, grid, 1.0, 3.0, 6);
    const auto sv = singular_values(build_hankel(synthesize(m, grid), {5, 5}).matrix());
    EXPECT_GT(sv(3), 1e-6 * sv(0));
    EXPECT_LT(sv(4), 1e-10 * sv(0));
}

TEST(Hankel, PencilValidation)
{
    const auto y = counting_signal({4, 4});
    EXPECT_THROW(build_hankel(y, {0, 2}), std::invalid_argument);
    EXPECT_THROW(build_hankel(y, {2, 4}), std::invalid_argument);
    EXPECT_THROW(build_hankel(y, {2}), std::invalid_argument);
}
