// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "musicnd/experiments/record.hpp"
#include "musicnd/experiments/studies.hpp"

using namespace musicnd;
using namespace musicnd::experiments;

TEST(Experiments, PowerLawFitRecoversExponent)
{
    std::vector<double> q, y;
    for (double v : log_space(0.1, 2.0, 9)) {
        q.push_back(v);
        y.push_back(3.0 * std::pow(v, 4.2));
    }
    const auto f = fit_power_law(q, y);
    EXPECT_NEAR(f.exponent, 4.2, 1e-12);
    EXPECT_NEAR(f.intercept, std::log10(3.0), 1e-12);
    EXPECT_NEAR(f.rms_residual, 0.0, 1e-12);
    EXPECT_EQ(f.points, 9u);
    EXPECT_THROW(fit_power_law({1, 2, 3}, {1, 2, 3}), std::domain_error);
    EXPECT_THROW(fit_power_law({1, 1, 1, 1}, {1, 2, 3, 4}), std::domain_error);
}

TEST(Experiments, LogSpace)
{
    const auto v = log_space(1.0, 1000.0, 4);
    ASSERT_EQ(v.size(), 4u);
    EXPECT_NEAR(v[1], 10.0, 1e-12);
    EXPECT_NEAR(v[2], 100.0, 1e-10);
    EXPECT_EQ(v.back(), 1000.0);
    EXPECT_TRUE(log_space(1.0, 2.0, 0).empty());
}

TEST(Experiments, HausdorffInRayleighLengths)
{
    const FrequencySupport a{TorusPoint{0.1, 0.1}}, b{TorusPoint{0.12, 0.15}};
    EXPECT_NEAR(hausdorff_rl(a, b, {10, 20}), 1.0, 1e-12);
}

TEST(Experiments, ParallelForCoversEveryIndex)
{
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Experiments, ParallelForRethrows)
{
    EXPECT_THROW(parallel_for(50, 3,
                              [](std::size_t i) {
                                  if (i == 17) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
}

TEST(Experiments, RecordsIndependentOfThreadCount)
{
    NoiselessConfig cfg;
    cfg.trials = 6;
    CommonOptions one, many;
    one.jobs = 1;
    many.jobs = 3;
    const auto a = exp_noiseless(cfg, one);
    const auto b = exp_noiseless(cfg, many);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].seed, b[i].seed);
        EXPECT_EQ(a[i].err_rl, b[i].err_rl);
        EXPECT_EQ(a[i].metric, b[i].metric);
        EXPECT_EQ(a[i].wall_ms, 0.0);
    }
}

TEST(Experiments, NoiselessStudyIsExact)
{
    NoiselessConfig cfg;
    cfg.trials = 10;
    CommonOptions opt;
    opt.seed = 0;
    for (const auto& r : exp_noiseless(cfg, opt)) EXPECT_LT(r.err_rl, 1e-4) << r.seed;
}

TEST(Experiments, NoiselessStudyRejectsBadShape)
{
    NoiselessConfig cfg;
    cfg.s = 7;
    EXPECT_THROW(exp_noiseless(cfg, CommonOptions{}), std::invalid_argument);
}

TEST(Experiments, SweepSummaryShape)
{
    NsrSweepConfig cfg;
    cfg.trials = 2;
    cfg.dynamic_ranges = {1.0};
    cfg.nsr = {0.0, 0.1};
    CommonOptions opt;
    const auto rec = exp_nsr_sweep(cfg, opt);
    EXPECT_EQ(rec.size(), 2u * 2u * 2u);  // nsr x trials x {music, fourier}
    const auto cells = summarize_nsr_sweep(cfg, rec);
    EXPECT_EQ(cells.size(), 4u);
    for (const auto& c : cells)
        if (c.method == "music" && c.nsr == 0.0) {
            EXPECT_LT(c.mean_err_rl, 1e-3);
        }
}

TEST(Experiments, MeanOf)
{
    std::vector<ExperimentRecord> rec(4);
    for (std::size_t i = 0; i < 4; ++i) rec[i].err_rl = static_cast<double>(i);
    EXPECT_EQ(mean_of(
                  rec, [](const ExperimentRecord& r) { return r.err_rl > 0.5; },
                  [](const ExperimentRecord& r) { return r.err_rl; }),
              2.0);
    EXPECT_TRUE(std::isnan(mean_of(
        rec, [](const ExperimentRecord&) { return false; }, [](const ExperimentRecord& r) { return r.err_rl; })));
}
