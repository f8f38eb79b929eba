#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "permboot/markov.hpp"
#include "permboot/ordinal.hpp"
#include "permboot/parallel.hpp"

namespace permboot {

/// Parametric bootstrap settings. `significance` is the CI level parameter:
/// a 90% interval has significance 0.1.
struct BootstrapConfig {
    std::size_t replicates = 1000;
    double significance = 0.1;
    std::uint64_t seed = 0;

    /// Throws config_error unless B >= 2, significance in (0, 1) and
    /// ceil(B * significance / 2) >= 1.
    void validate() const;
};

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;

    [[nodiscard]] bool contains(double x) const noexcept { return low <= x && x <= high; }
    [[nodiscard]] double width() const noexcept { return high - low; }
};

struct BootstrapResult {
    double h_hat = 0.0;
    std::vector<double> replicates;
    double boot_mean = 0.0;
    double boot_sd = 0.0;
    double bias = 0.0;
    double mse = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double significance = 0.0;
};

struct DifferenceTestResult {
    double delta_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool reject = false;
    double significance = 0.0;
    double h_a = 0.0;
    double h_b = 0.0;
};

/// Arithmetic mean of the replicates. Throws insufficient_data when empty.
[[nodiscard]] double boot_mean(std::span<const double> replicates);

/// Sample standard deviation (B - 1 denominator). Needs B >= 2.
[[nodiscard]] double boot_sd(std::span<const double> replicates);

/// mean(replicates) - h_hat.
[[nodiscard]] double boot_bias(double h_hat, std::span<const double> replicates);

/// boot_sd^2 + bias^2.
[[nodiscard]] double boot_mse(double h_hat, std::span<const double> replicates);

/// 1-based order statistics picked for a two-sided interval over n sorted
/// values: ceil(n * significance / 2) and ceil(n * (1 - significance / 2)).
/// For n = 1000 and significance 0.1 that is the 50th and the 950th.
/// Throws config_error when the lower rank would be 0.
struct PercentileRanks {
    std::size_t lower = 0;
    std::size_t upper = 0;
};
[[nodiscard]] PercentileRanks percentile_ranks(std::size_t n, double significance);

/// Bias-corrected percentile interval
///   [2 h - mean + d_lo, 2 h - mean + d_hi]
/// where d = replicate - mean, sorted; both ends are clamped into [0, 1].
[[nodiscard]] ConfidenceInterval confidence_interval(double h_hat,
                                                     std::span<const double> replicates,
                                                     double significance);

/// Fills every derived statistic from the original estimate and replicates.
[[nodiscard]] BootstrapResult summarize(double h_hat, std::vector<double> replicates,
                                        double significance);

/// B replicate entropies from the fitted chain, each over `length` simulated
/// symbols. Replicate b draws from Rng(derive_seed(seed, b)), so the output is
/// independent of scheduling.
[[nodiscard]] std::vector<double> bootstrap_replicates(const TransitionMatrix& tm,
                                                       std::size_t length,
                                                       std::size_t count, std::uint64_t seed,
                                                       Parallelism par = {});

/// Full parametric bootstrap of the permutation entropy of `ts`.
[[nodiscard]] BootstrapResult bootstrap_pe(const TimeSeries& ts, const EmbeddingParams& p,
                                           const BootstrapConfig& cfg, Parallelism par = {});

struct DifferenceTestOptions {
    /// Largest B accepted; all B^2 pairwise differences are materialized.
    std::size_t max_replicates = 2000;
};

/// Two-sample test of H_a = H_b from two bootstrap results. All pairwise
/// differences a*(i) - b*(k) are centered, sorted, and their percentiles added
/// to delta_hat = h_a - h_b. No clamping. Rejects when 0 is outside the CI.
/// Throws config_error if the replicate counts differ or exceed the cap.
[[nodiscard]] DifferenceTestResult difference_test(const BootstrapResult& a,
                                                   const BootstrapResult& b,
                                                   double significance,
                                                   DifferenceTestOptions opts = {});

/// Bootstraps both series and runs the test. Series a uses cfg.seed and
/// series b derive_seed(cfg.seed, 1).
[[nodiscard]] DifferenceTestResult difference_test(const TimeSeries& a, const TimeSeries& b,
                                                   const EmbeddingParams& p,
                                                   const BootstrapConfig& cfg,
                                                   Parallelism par = {},
                                                   DifferenceTestOptions opts = {});

}  // namespace permboot
