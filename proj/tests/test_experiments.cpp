#include <gtest/gtest.h>

#include <vector>

#include "oracles.hpp"
#include "permboot/errors.hpp"
#include "permboot/experiments.hpp"

using namespace permboot;
using namespace permboot::experiments;

namespace {

SeriesSource monotone_source() {
    return [](double, std::size_t length, std::uint64_t) {
        std::vector<double> x(length);
        for (std::size_t i = 0; i < length; ++i) x[i] = static_cast<double>(i);
        return TimeSeries(std::move(x));
    };
}

}  // namespace

TEST(MonteCarlo, SummaryMatchesReplicates) {
    const auto d = mc_pe_distribution(1.0, 2000, EmbeddingParams(4), 50, 3);
    ASSERT_EQ(d.replicates.size(), 50u);
    const auto ref = oracle::welford(d.replicates);
    EXPECT_NEAR(d.mean, ref.mean, 1e-13);
    EXPECT_NEAR(d.sd, ref.sd, 1e-13);
    EXPECT_EQ(d.m, 4);
    EXPECT_EQ(d.length, 2000u);
}

TEST(MonteCarlo, GridSharesRealizationsAcrossM) {
    const std::vector<int> ms{3, 5};
    const auto grid = mc_pe_grid(2.0, 1000, ms, 1, 20, 9);
    ASSERT_EQ(grid.size(), 2u);
    const auto single = mc_pe_distribution(2.0, 1000, EmbeddingParams(5), 20, 9);
    EXPECT_EQ(grid[1].replicates, single.replicates);
}

TEST(MonteCarlo, ThreadIndependentAndValidated) {
    const auto a = mc_pe_distribution(0.0, 1500, EmbeddingParams(3), 30, 4, Parallelism{1});
    const auto b = mc_pe_distribution(0.0, 1500, EmbeddingParams(3), 30, 4, Parallelism{3});
    EXPECT_EQ(a.replicates, b.replicates);
    EXPECT_THROW((void)mc_pe_distribution(0.0, 1500, EmbeddingParams(3), 1, 4), invalid_input);
}

TEST(MonteCarlo, ReferenceMeansAtLongLength) {
    const auto white = mc_pe_distribution(0.0, 50000, EmbeddingParams(3), 200, 0, Parallelism{0});
    EXPECT_NEAR(white.mean, 0.99990, 0.0002);
    const auto brown = mc_pe_distribution(2.0, 50000, EmbeddingParams(6), 200, 0, Parallelism{0});
    EXPECT_NEAR(brown.mean, 0.8533, 0.01);
}

TEST(SdComparison, DegenerateSourceGivesZeros) {
    SdCompareConfig cfg;
    cfg.lengths = {60, 600};
    cfg.ms = {3};
    cfg.alphas = {0.0};
    cfg.n_mc = 10;
    cfg.replicates = 100;
    const auto rows = sd_comparison(cfg, {}, monotone_source());
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) {
        EXPECT_EQ(r.sd_mc, 0.0);
        EXPECT_EQ(r.sd_boot, 0.0);
        EXPECT_EQ(r.mean_mc, 0.0);
    }
}

TEST(SdComparison, ShortSeriesStillRecorded) {
    SdCompareConfig cfg;
    cfg.lengths = {60};
    cfg.ms = {3, 4};
    cfg.alphas = {-1.0, 2.0};
    cfg.n_mc = 20;
    cfg.replicates = 200;
    const auto rows = sd_comparison(cfg);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto& r : rows) {
        EXPECT_GE(r.sd_mc, 0.0);
        EXPECT_GE(r.sd_boot, 0.0);
    }
}

TEST(Coverage, DegenerateSourceNeverMisses) {
    const auto row = coverage_row(0.0, EmbeddingParams(3), 300, 0.0, 5, {100, 0.1, 1}, {},
                                  monotone_source());
    EXPECT_EQ(row.miss_left + row.miss_right, 0u);
    EXPECT_EQ(row.mean_amplitude, 0.0);
    EXPECT_EQ(row.n_intervals, 5u);
}

TEST(Coverage, MissesAreClassifiedBySide) {
    const auto above = coverage_row(0.0, EmbeddingParams(3), 300, 0.5, 3, {100, 0.1, 1}, {},
                                    monotone_source());
    EXPECT_EQ(above.miss_right, 3u);
    EXPECT_EQ(above.miss_left, 0u);
}

TEST(Coverage, SmallStudyShape) {
    CoverageConfig cfg;
    cfg.ms = {3, 4};
    cfg.alphas = {2.0};
    cfg.length = 1000;
    cfg.n_intervals = 4;
    cfg.replicates = 100;
    cfg.n_mc = 20;
    const auto rows = coverage_study(cfg);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) {
        EXPECT_LE(r.miss_left + r.miss_right, 4u);
        EXPECT_GT(r.mean_amplitude, 0.0);
        EXPECT_GT(r.reference_h, 0.5);
    }
}

TEST(BiasDecay, RowsPerCell) {
    const std::vector<std::size_t> lengths{600, 5000};
    const std::vector<int> ms{4};
    const std::vector<double> alphas{0.0};
    const auto rows = bias_decay(lengths, ms, alphas, 3, 200, 5);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_GT(rows[0].mean_abs_bias, rows[1].mean_abs_bias);
}
