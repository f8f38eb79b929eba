#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "permboot/bootstrap.hpp"
#include "permboot/ordinal.hpp"
#include "permboot/parallel.hpp"

namespace permboot::experiments {

/// Produces one realization for a grid point. The default synthesizes
/// standardized 1/f^alpha noise.
using SeriesSource = std::function<TimeSeries(double alpha, std::size_t length, std::uint64_t seed)>;

[[nodiscard]] SeriesSource power_law_source(double k = 1.0);

/// Which part of an experiment a realization belongs to. Keeps the Monte-Carlo
/// realizations disjoint from the ones that get bootstrapped.
enum class Stream : std::uint64_t { monte_carlo = 1, sd_bootstrap = 2, coverage = 3, bias = 4 };

/// Seed of realization `rep` at (alpha, length). Independent of m, so every
/// symbol length at a grid point sees the same series.
[[nodiscard]] std::uint64_t realization_seed(std::uint64_t master, Stream stream, double alpha,
                                             std::size_t length, std::uint64_t rep);

/// Monte-Carlo distribution of the plug-in estimator at one grid point.
struct McDistribution {
    std::vector<double> replicates;
    double mean = 0.0;
    double sd = 0.0;
    std::size_t length = 0;
    int m = 0;
    double alpha = 0.0;
};

/// n_reps independent realizations, one estimate each; mean and sd (n - 1).
/// Throws invalid_input when n_reps < 2.
[[nodiscard]] McDistribution mc_pe_distribution(double alpha, std::size_t length,
                                                const EmbeddingParams& p, std::size_t n_reps,
                                                std::uint64_t seed, Parallelism par = {},
                                                const SeriesSource& source = power_law_source());

/// Same as mc_pe_distribution for several m at once; each realization is
/// generated a single time. Output follows the order of `ms`.
[[nodiscard]] std::vector<McDistribution> mc_pe_grid(double alpha, std::size_t length,
                                                     std::span<const int> ms, int tau,
                                                     std::size_t n_reps, std::uint64_t seed,
                                                     Parallelism par = {},
                                                     const SeriesSource& source = power_law_source());

struct SdCompareRow {
    std::size_t length = 0;
    int m = 0;
    double alpha = 0.0;
    double sd_mc = 0.0;
    double sd_boot = 0.0;
    double mean_mc = 0.0;
    double h_hat_boot = 0.0;
    double bias_boot = 0.0;
};

struct SdCompareConfig {
    std::vector<std::size_t> lengths{60, 600, 5000, 50000};
    std::vector<int> ms{3, 4, 5, 6};
    std::vector<double> alphas{-1.0, 0.0, 1.0, 2.0};
    int tau = 1;
    std::size_t n_mc = 200;
    std::size_t replicates = 1000;
    std::uint64_t seed = 0;
};

/// Monte-Carlo sd against the bootstrap sd of one separate realization, for
/// every grid point.
[[nodiscard]] std::vector<SdCompareRow> sd_comparison(const SdCompareConfig& cfg,
                                                      Parallelism par = {},
                                                      const SeriesSource& source = power_law_source());

struct CoverageRow {
    int m = 0;
    double alpha = 0.0;
    double reference_h = 0.0;
    std::size_t miss_left = 0;
    std::size_t miss_right = 0;
    std::size_t n_intervals = 0;
    double mean_amplitude = 0.0;
};

struct CoverageConfig {
    std::vector<int> ms{3, 4, 5, 6};
    std::vector<double> alphas{-1.0, 0.0, 1.0, 2.0};
    int tau = 1;
    std::size_t length = 5000;
    std::size_t n_intervals = 50;
    double significance = 0.1;
    std::size_t replicates = 1000;
    std::size_t n_mc = 200;
    std::uint64_t seed = 0;
};

/// Builds n_intervals bootstrap CIs on fresh realizations and counts how often
/// reference_h falls below the lower bound (miss_left) or above the upper
/// bound (miss_right).
[[nodiscard]] CoverageRow coverage_row(double alpha, const EmbeddingParams& p,
                                       std::size_t length, double reference_h,
                                       std::size_t n_intervals, const BootstrapConfig& boot,
                                       Parallelism par = {},
                                       const SeriesSource& source = power_law_source());

/// coverage_row for every (m, alpha), with reference_h taken as the
/// Monte-Carlo mean (n_mc realizations) at the same length.
[[nodiscard]] std::vector<CoverageRow> coverage_study(const CoverageConfig& cfg,
                                                      Parallelism par = {},
                                                      const SeriesSource& source = power_law_source());

struct BiasDecayRow {
    std::size_t length = 0;
    int m = 0;
    double alpha = 0.0;
    double mean_abs_bias = 0.0;
    std::size_t n_seeds = 0;
};

/// Mean |bootstrap bias| over n_seeds realizations per grid point.
[[nodiscard]] std::vector<BiasDecayRow> bias_decay(std::span<const std::size_t> lengths,
                                                   std::span<const int> ms,
                                                   std::span<const double> alphas,
                                                   std::size_t n_seeds, std::size_t replicates,
                                                   std::uint64_t seed, Parallelism par = {},
                                                   const SeriesSource& source = power_law_source());

}  // namespace permboot::experiments
