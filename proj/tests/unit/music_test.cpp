// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <Eigen/QR>
#include <cmath>
#include <random>
#include <stdexcept>

#include "musicnd/core.hpp"
#include "musicnd/experiments/record.hpp"
#include "musicnd/hankel.hpp"
#include "musicnd/music.hpp"

using namespace musicnd;

namespace {

struct Scene {
    SamplingGrid grid;
    SpectralModel model;
    MeasurementArray y;
};

Scene scene(std::size_t s, const Dims& n, double min_sep, double dr, std::uint64_t seed)
{
    const SamplingGrid grid(n);
    auto model = random_model(s, grid, min_sep, dr, seed);
    auto y = synthesize(model, grid);
    return {grid, std::move(model), std::move(y)};
}

double orthonormality_residual(const CMatrix& u)
{
    return (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).norm();
}

}  // namespace

TEST(Music, DecomposeNoiselessHasRankS)
{
    const auto sc = scene(5, {10, 10}, 1.0, 3.0, 1);
    const auto dec = decompose(build_hankel(sc.y, {5, 5}), 5);
    const auto& sv = dec.singular_values();
    EXPECT_LT(sv(5) / sv(0), 1e-10);
    EXPECT_EQ(dec.signal_space().cols(), 5);
    EXPECT_EQ(dec.noise_space().cols(), 36 - 5);
    for (long i = 1; i < sv.size(); ++i) EXPECT_LE(sv(i), sv(i - 1));
}

TEST(Music, DecomposeZeroMatrix)
{
    const MeasurementArray zero{SamplingGrid({6, 6})};
    const auto dec = decompose(build_hankel(zero, {3, 3}), 2);
    EXPECT_EQ(dec.singular_values().maxCoeff(), 0.0);
    EXPECT_EQ(dec.signal_space().cols(), 2);
    EXPECT_LT(orthonormality_residual(dec.signal_space()), 1e-10);
}

TEST(Music, NoisyFactorsOrthonormal)
{
    const auto sc = scene(4, {12, 10}, 1.0, 2.0, 2);
    const auto ye = add_noise(sc.y, 0.5, NoiseKind::complex_gaussian, 3);
    const auto dec = decompose(build_hankel(ye, {6, 5}), 4);
    EXPECT_LT(orthonormality_residual(dec.signal_space()), 1e-10);
    EXPECT_LT(orthonormality_residual(dec.noise_space()), 1e-10);
    EXPECT_LT((dec.signal_space().adjoint() * dec.noise_space()).norm(), 1e-10);
}

TEST(Music, DecomposeRejectsOrderOutOfRange)
{
    const auto sc = scene(2, {6, 6}, 1.0, 1.0, 4);
    const auto h = build_hankel(sc.y, {3, 3});
    EXPECT_THROW(decompose(h, 16), std::invalid_argument);
    EXPECT_THROW(decompose(h, -1), std::invalid_argument);
}

TEST(Music, CorrelationVanishesOnSupport)
{
    const auto sc = scene(5, {10, 10}, 1.0, 5.0, 5);
    const auto dec = decompose(build_hankel(sc.y, {5, 5}), 5);
    for (const auto& w : sc.model.support) {
        EXPECT_LT(noise_correlation(dec, w), 1e-8);
        EXPECT_GE(imaging_function(dec, w), 1e8);
    }
}

TEST(Music, EmptySignalSpaceGivesOne)
{
    const auto sc = scene(2, {6, 6}, 1.0, 1.0, 6);
    const auto dec = decompose(build_hankel(sc.y, {3, 3}), 0);
    EXPECT_EQ(noise_correlation(dec, TorusPoint{0.2, 0.9}), 1.0);
}

TEST(Music, CorrelationFormsAgree)
{
    const auto sc = scene(4, {10, 8}, 1.0, 2.0, 7);
    const auto ye = add_noise(sc.y, 0.2, NoiseKind::complex_gaussian, 8);
    const auto dec = decompose(build_hankel(ye, {5, 4}), 4);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        const TorusPoint w{u(rng), u(rng)};
        const double direct = noise_correlation_direct(dec, w);
        EXPECT_NEAR(noise_correlation(dec, w), direct, 1e-10);
        EXPECT_NEAR(noise_correlation_complement(dec, w), direct, 1e-10);
    }
}

TEST(Music, CorrelationGridMatchesPointwise)
{
    const auto sc = scene(3, {6, 5}, 1.0, 2.0, 10);
    const auto dec = decompose(build_hankel(sc.y, {3, 2}), 3);
    const auto grid = TorusGrid::per_rayleigh_length({6, 5}, 3);
    const auto r = correlation_grid(dec, grid);
    for (long g = 0; g < grid.size(); g += 7) EXPECT_NEAR(r.values[g], noise_correlation_complement(dec, grid.point(g)), 1e-12);
}

TEST(Music, ImagingFunctionIsReciprocal)
{
    EXPECT_EQ(imaging_from_correlation(0.5), 2.0);
    EXPECT_EQ(imaging_from_correlation(0.0), kImagingCap);
    EXPECT_GT(imaging_from_correlation(0.1), imaging_from_correlation(0.2));
}

TEST(Music, NoiseBasisRotationLeavesCorrelationUnchanged)
{
    const auto sc = scene(3, {8, 8}, 1.0, 2.0, 11);
    const auto ye = add_noise(sc.y, 0.3, NoiseKind::complex_gaussian, 12);
    const auto dec = decompose(build_hankel(ye, {4, 4}), 3);
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g;
    const long k = dec.noise_space().cols();
    CMatrix z(k, k);
    for (long i = 0; i < k; ++i)
        for (long j = 0; j < k; ++j) z(i, j) = cplx(g(rng), g(rng));
    const CMatrix q = Eigen::HouseholderQR<CMatrix>(z).householderQ();
    const SubspaceDecomposition rotated(dec.signal_space(), dec.noise_space() * q, dec.singular_values(), dec.pencil(),
                                        dec.max_index());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const TorusPoint w{u(rng), u(rng)};
        EXPECT_NEAR(noise_correlation_direct(rotated, w), noise_correlation_direct(dec, w), 1e-12);
    }
}

TEST(Music, NoiselessRecoveryIsExact)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto sc = scene(5, {10, 10}, 0.0, 1.0, 100 + seed);
        const auto est = recover_support(build_hankel(sc.y, {5, 5}), 5, 20, 3);
        EXPECT_FALSE(est.deficient);
        EXPECT_FALSE(est.shape_warning);
        EXPECT_LT(experiments::hausdorff_rl(sc.model.support, est.support, {10, 10}), 1e-4) << seed;
    }
}

TEST(Music, SingleFrequencyOnGridNode)
{
    const SpectralModel m({TorusPoint{0.25, 0.6}}, Amplitudes({cplx(0.0, 2.0)}));
    const auto y = synthesize(m, SamplingGrid({10, 10}));
    const auto dec = decompose(build_hankel(y, {5, 5}), 1);
    const auto est0 = recover_support(dec, 20, 0);
    ASSERT_EQ(est0.support.size(), 1u);
    EXPECT_LT(wrapped_distance(est0.support[0], m.support[0]), 1e-12);
}

TEST(Music, FifteenSeparatedFrequencies)
{
    const auto sc = scene(15, {10, 10}, 2.0, 5.0, 21);
    const auto est = recover_support(build_hankel(sc.y, {5, 5}), 15);
    EXPECT_LE(experiments::hausdorff_rl(sc.model.support, est.support, {10, 10}), 0.1);
}

TEST(Music, ScalingInvariance)
{
    const auto sc = scene(4, {10, 10}, 1.0, 3.0, 22);
    const auto ye = add_noise(sc.y, 0.3, NoiseKind::complex_gaussian, 23);
    const auto a = recover_support(build_hankel(ye, {5, 5}), 4);
    const auto b = recover_support(build_hankel(cplx(-2.5, 1.5) * ye, {5, 5}), 4);
    ASSERT_EQ(a.support.size(), b.support.size());
    EXPECT_LT(hausdorff_error(a.support, b.support), 1e-6);
}

TEST(Music, Deterministic)
{
    const auto sc = scene(6, {10, 10}, 1.5, 2.0, 24);
    const auto ye = add_noise(sc.y, 0.5, NoiseKind::complex_gaussian, 25);
    const auto a = recover_support(build_hankel(ye, {5, 5}), 6);
    const auto b = recover_support(build_hankel(ye, {5, 5}), 6);
    EXPECT_EQ(a.support.points(), b.support.points());
    EXPECT_EQ(a.correlation, b.correlation);
}

TEST(Music, ShapeWarning)
{
    const auto sc = scene(4, {6, 6}, 1.0, 1.0, 26);
    const auto est = recover_support(build_hankel(sc.y, {2, 2}), 4);
    EXPECT_TRUE(est.shape_warning);
}

TEST(Music, AmplitudesExactSupport)
{
    const auto sc = scene(5, {10, 10}, 1.0, 4.0, 27);
    const auto a = recover_amplitudes(sc.y, sc.model.support);
    EXPECT_FALSE(a.rank_deficient);
    for (std::size_t j = 0; j < 5; ++j)
        EXPECT_LT(std::abs(a.values[j] - sc.model.amplitudes[j]), 1e-10 * std::abs(sc.model.amplitudes[j]));
    EXPECT_LT(a.residual_norm, 1e-9);
}

TEST(Music, AmplitudesConstantSignal)
{
    MeasurementArray y{SamplingGrid({4, 4})};
    for (auto& v : y.data()) v = cplx(1.5, -0.5);
    const auto a = recover_amplitudes(y, FrequencySupport{TorusPoint{0.0, 0.0}});
    EXPECT_NEAR(std::abs(a.values[0] - cplx(1.5, -0.5)), 0.0, 1e-12);
}

TEST(Music, AmplitudesUnderSmallPerturbation)
{
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto sc = scene(4, {10, 10}, 2.0, 1.0, 300 + seed);
        const auto ye = add_noise(sc.y, nsr_to_sigma(0.01, sc.y), NoiseKind::complex_gaussian, 400 + seed);
        std::vector<TorusPoint> moved;
        for (const auto& w : sc.model.support) moved.push_back(TorusPoint{w[0] + 0.001, w[1] - 0.001});
        const auto a = recover_amplitudes(ye, FrequencySupport(moved));
        for (std::size_t j = 0; j < 4; ++j)
            worst = std::max(worst, std::abs(a.values[j] - sc.model.amplitudes[j]) / std::abs(sc.model.amplitudes[j]));
    }
    EXPECT_LT(worst, 0.05);
}

TEST(Music, AmplitudesRejectEmptySupport)
{
    EXPECT_THROW(recover_amplitudes(MeasurementArray{SamplingGrid({3})}, FrequencySupport{}), std::invalid_argument);
}
