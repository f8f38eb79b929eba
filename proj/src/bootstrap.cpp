#include "permboot/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "permboot/errors.hpp"
#include "permboot/random.hpp"

namespace permboot {

namespace {

// ceil(x), treating values within rounding noise of an integer as that integer
// so 1000 * 0.95 selects the 950th element.
std::size_t ceil_rank(double x) {
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) x = nearest;
    return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace

void BootstrapConfig::validate() const {
    if (replicates < 2) {
        throw config_error("bootstrap needs B >= 2 replicates, got " + std::to_string(replicates));
    }
    if (!(significance > 0.0 && significance < 1.0)) {
        throw config_error("significance must lie in (0, 1), got " + std::to_string(significance));
    }
    (void)percentile_ranks(replicates, significance);
}

double boot_mean(std::span<const double> replicates) {
    if (replicates.empty()) throw insufficient_data("mean of an empty replicate set");
    // Neumaier summation: identical replicates average back to themselves.
    double sum = 0.0, comp = 0.0;
    for (double r : replicates) {
        const double t = sum + r;
        comp += std::abs(sum) >= std::abs(r) ? (sum - t) + r : (r - t) + sum;
        sum = t;
    }
    return (sum + comp) / static_cast<double>(replicates.size());
}

double boot_sd(std::span<const double> replicates) {
    if (replicates.size() < 2) {
        throw insufficient_data("bootstrap sd needs at least 2 replicates");
    }
    const double mean = boot_mean(replicates);
    double ss = 0.0;
    for (double r : replicates) ss += (r - mean) * (r - mean);
    return std::sqrt(ss / static_cast<double>(replicates.size() - 1));
}

double boot_bias(double h_hat, std::span<const double> replicates) {
    return boot_mean(replicates) - h_hat;
}

double boot_mse(double h_hat, std::span<const double> replicates) {
    const double sd = boot_sd(replicates);
    const double bias = boot_bias(h_hat, replicates);
    return sd * sd + bias * bias;
}

PercentileRanks percentile_ranks(std::size_t n, double significance) {
    if (!(significance > 0.0 && significance < 1.0)) {
        throw config_error("significance must lie in (0, 1), got " + std::to_string(significance));
    }
    const auto count = static_cast<double>(n);
    if (count * significance / 2.0 < 1.0 - 1e-9) {
        throw config_error("n * significance / 2 must be >= 1 (n=" + std::to_string(n) +
                           ", significance=" + std::to_string(significance) + ")");
    }
    PercentileRanks ranks{ceil_rank(count * significance / 2.0),
                          ceil_rank(count * (1.0 - significance / 2.0))};
    if (ranks.lower < 1 || ranks.upper > n) {
        throw config_error("n * significance / 2 must be >= 1 (n=" + std::to_string(n) +
                           ", significance=" + std::to_string(significance) + ")");
    }
    return ranks;
}

ConfidenceInterval confidence_interval(double h_hat, std::span<const double> replicates,
                                       double significance) {
    const PercentileRanks ranks = percentile_ranks(replicates.size(), significance);
    const double mean = boot_mean(replicates);

    std::vector<double> deltas(replicates.begin(), replicates.end());
    for (double& d : deltas) d -= mean;
    std::sort(deltas.begin(), deltas.end());

    const double center = 2.0 * h_hat - mean;
    ConfidenceInterval ci{std::clamp(center + deltas[ranks.lower - 1], 0.0, 1.0),
                          std::clamp(center + deltas[ranks.upper - 1], 0.0, 1.0)};
    check_invariant(ci.low <= ci.high, "confidence interval bounds are out of order");
    return ci;
}

BootstrapResult summarize(double h_hat, std::vector<double> replicates, double significance) {
    BootstrapResult r;
    r.h_hat = h_hat;
    r.significance = significance;
    r.boot_mean = boot_mean(replicates);
    r.boot_sd = boot_sd(replicates);
    r.bias = r.boot_mean - h_hat;
    r.mse = r.boot_sd * r.boot_sd + r.bias * r.bias;
    const ConfidenceInterval ci = confidence_interval(h_hat, replicates, significance);
    r.ci_low = ci.low;
    r.ci_high = ci.high;
    r.replicates = std::move(replicates);
    return r;
}

std::vector<double> bootstrap_replicates(const TransitionMatrix& tm, std::size_t length,
                                         std::size_t count, std::uint64_t seed,
                                         Parallelism par) {
    if (length == 0) throw invalid_input("bootstrap replicate length must be >= 1");
    std::vector<double> out(count);
    const int m = tm.m();
    parallel_for(count, par, [&](std::size_t b) {
        Rng rng(derive_seed(seed, b));
        std::vector<std::uint64_t> counts(tm.support_size(), 0);
        tm.walk(length, rng, [&](std::uint32_t id) { ++counts[id]; });
        out[b] = permutation_entropy(counts, length, m);
    });
    return out;
}

BootstrapResult bootstrap_pe(const TimeSeries& ts, const EmbeddingParams& p,
                             const BootstrapConfig& cfg, Parallelism par) {
    cfg.validate();
    const SymbolSequence symbols = symbolize(ts, p);
    const TransitionMatrix tm = estimate_transitions(symbols, p.m());
    const double h_hat = permutation_entropy(tm.marginal());
    std::vector<double> reps =
        bootstrap_replicates(tm, symbols.size(), cfg.replicates, cfg.seed, par);
    return summarize(h_hat, std::move(reps), cfg.significance);
}

DifferenceTestResult difference_test(const BootstrapResult& a, const BootstrapResult& b,
                                     double significance, DifferenceTestOptions opts) {
    const std::size_t n = a.replicates.size();
    if (b.replicates.size() != n) {
        throw config_error("difference test needs equal replicate counts, got " +
                           std::to_string(n) + " and " + std::to_string(b.replicates.size()));
    }
    if (n > opts.max_replicates) {
        throw config_error("difference test materializes B^2 values; B=" + std::to_string(n) +
                           " exceeds the cap of " + std::to_string(opts.max_replicates));
    }
    const PercentileRanks ranks = percentile_ranks(n * n, significance);

    // The mean of all pairwise differences equals mean(a) - mean(b).
    const double center = boot_mean(a.replicates) - boot_mean(b.replicates);
    std::vector<double> deltas;
    deltas.reserve(n * n);
    for (double x : a.replicates) {
        for (double y : b.replicates) deltas.push_back((x - y) - center);
    }
    std::sort(deltas.begin(), deltas.end());

    DifferenceTestResult r;
    r.h_a = a.h_hat;
    r.h_b = b.h_hat;
    r.significance = significance;
    r.delta_hat = a.h_hat - b.h_hat;
    r.ci_low = r.delta_hat + deltas[ranks.lower - 1];
    r.ci_high = r.delta_hat + deltas[ranks.upper - 1];
    r.reject = !(r.ci_low <= 0.0 && 0.0 <= r.ci_high);
    return r;
}

DifferenceTestResult difference_test(const TimeSeries& a, const TimeSeries& b,
                                     const EmbeddingParams& p, const BootstrapConfig& cfg,
                                     Parallelism par, DifferenceTestOptions opts) {
    cfg.validate();
    if (cfg.replicates > opts.max_replicates) {
        throw config_error("difference test materializes B^2 values; B=" +
                           std::to_string(cfg.replicates) + " exceeds the cap of " +
                           std::to_string(opts.max_replicates));
    }
    BootstrapConfig cfg_b = cfg;
    cfg_b.seed = derive_seed(cfg.seed, 1);
    const BootstrapResult ra = bootstrap_pe(a, p, cfg, par);
    const BootstrapResult rb = bootstrap_pe(b, p, cfg_b, par);
    return difference_test(ra, rb, cfg.significance, opts);
}

}  // namespace permboot
