#include "permboot/experiments.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "permboot/errors.hpp"
#include "permboot/markov.hpp"
#include "permboot/noise.hpp"
#include "permboot/random.hpp"

namespace permboot::experiments {

namespace {

// Bootstrap of one realization, run serially: callers parallelize over
// realizations instead.
BootstrapResult bootstrap_one(const TimeSeries& ts, const EmbeddingParams& p,
                              std::size_t replicates, double significance, std::uint64_t seed) {
    BootstrapConfig cfg{replicates, significance, seed};
    return bootstrap_pe(ts, p, cfg, Parallelism{1});
}

}  // namespace

SeriesSource power_law_source(double k) {
    return [k](double alpha, std::size_t length, std::uint64_t seed) {
        return generate_power_law_noise(NoiseSpec{alpha, length, seed, k});
    };
}

std::uint64_t realization_seed(std::uint64_t master, Stream stream, double alpha,
                               std::size_t length, std::uint64_t rep) {
    std::uint64_t s = derive_seed(master, static_cast<std::uint64_t>(stream));
    s = derive_seed(s, std::bit_cast<std::uint64_t>(alpha + 0.0));
    s = derive_seed(s, length);
    return derive_seed(s, rep);
}

std::vector<McDistribution> mc_pe_grid(double alpha, std::size_t length, std::span<const int> ms,
                                       int tau, std::size_t n_reps, std::uint64_t seed,
                                       Parallelism par, const SeriesSource& source) {
    if (n_reps < 2) {
        throw invalid_input("Monte-Carlo distribution needs n_reps >= 2, got " +
                            std::to_string(n_reps));
    }
    std::vector<EmbeddingParams> params;
    for (int m : ms) params.emplace_back(m, tau);

    std::vector<std::vector<double>> values(params.size(), std::vector<double>(n_reps));
    parallel_for(n_reps, par, [&](std::size_t rep) {
        const TimeSeries ts =
            source(alpha, length, realization_seed(seed, Stream::monte_carlo, alpha, length, rep));
        for (std::size_t i = 0; i < params.size(); ++i) {
            values[i][rep] = permutation_entropy(ts, params[i]);
        }
    });

    std::vector<McDistribution> out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        McDistribution d;
        d.mean = boot_mean(values[i]);
        d.sd = boot_sd(values[i]);
        d.replicates = std::move(values[i]);
        d.length = length;
        d.m = params[i].m();
        d.alpha = alpha;
        out.push_back(std::move(d));
    }
    return out;
}

McDistribution mc_pe_distribution(double alpha, std::size_t length, const EmbeddingParams& p,
                                  std::size_t n_reps, std::uint64_t seed, Parallelism par,
                                  const SeriesSource& source) {
    const int m = p.m();
    return std::move(
        mc_pe_grid(alpha, length, std::span<const int>(&m, 1), p.tau(), n_reps, seed, par, source)
            .front());
}

std::vector<SdCompareRow> sd_comparison(const SdCompareConfig& cfg, Parallelism par,
                                        const SeriesSource& source) {
    std::vector<SdCompareRow> rows;
    for (double alpha : cfg.alphas) {
        for (std::size_t length : cfg.lengths) {
            const std::vector<McDistribution> mc =
                mc_pe_grid(alpha, length, cfg.ms, cfg.tau, cfg.n_mc, cfg.seed, par, source);
            const TimeSeries ts =
                source(alpha, length, realization_seed(cfg.seed, Stream::sd_bootstrap, alpha, length, 0));

            std::vector<BootstrapResult> boots(cfg.ms.size());
            parallel_for(cfg.ms.size(), par, [&](std::size_t i) {
                const std::uint64_t boot_seed =
                    derive_seed(realization_seed(cfg.seed, Stream::sd_bootstrap, alpha, length, 1),
                                static_cast<std::uint64_t>(cfg.ms[i]));
                boots[i] = bootstrap_one(ts, EmbeddingParams(cfg.ms[i], cfg.tau), cfg.replicates,
                                         0.1, boot_seed);
            });
            for (std::size_t i = 0; i < cfg.ms.size(); ++i) {
                rows.push_back(SdCompareRow{length, cfg.ms[i], alpha, mc[i].sd, boots[i].boot_sd,
                                            mc[i].mean, boots[i].h_hat, boots[i].bias});
            }
        }
    }
    return rows;
}

CoverageRow coverage_row(double alpha, const EmbeddingParams& p, std::size_t length,
                         double reference_h, std::size_t n_intervals,
                         const BootstrapConfig& boot, Parallelism par,
                         const SeriesSource& source) {
    boot.validate();
    if (n_intervals < 1) throw invalid_input("coverage study needs at least 1 interval");

    std::vector<ConfidenceInterval> cis(n_intervals);
    parallel_for(n_intervals, par, [&](std::size_t i) {
        const std::uint64_t s = realization_seed(boot.seed, Stream::coverage, alpha, length, i);
        const TimeSeries ts = source(alpha, length, s);
        const BootstrapResult r = bootstrap_one(ts, p, boot.replicates, boot.significance,
                                                derive_seed(s, static_cast<std::uint64_t>(p.m())));
        cis[i] = ConfidenceInterval{r.ci_low, r.ci_high};
    });

    CoverageRow row;
    row.m = p.m();
    row.alpha = alpha;
    row.reference_h = reference_h;
    row.n_intervals = n_intervals;
    double width = 0.0;
    for (const ConfidenceInterval& ci : cis) {
        if (reference_h < ci.low) ++row.miss_left;
        if (reference_h > ci.high) ++row.miss_right;
        width += ci.width();
    }
    row.mean_amplitude = width / static_cast<double>(n_intervals);
    return row;
}

std::vector<CoverageRow> coverage_study(const CoverageConfig& cfg, Parallelism par,
                                        const SeriesSource& source) {
    std::vector<CoverageRow> rows;
    for (double alpha : cfg.alphas) {
        const std::vector<McDistribution> mc =
            mc_pe_grid(alpha, cfg.length, cfg.ms, cfg.tau, cfg.n_mc, cfg.seed, par, source);
        for (std::size_t i = 0; i < cfg.ms.size(); ++i) {
            BootstrapConfig boot{cfg.replicates, cfg.significance, cfg.seed};
            rows.push_back(coverage_row(alpha, EmbeddingParams(cfg.ms[i], cfg.tau), cfg.length,
                                        mc[i].mean, cfg.n_intervals, boot, par, source));
        }
    }
    return rows;
}

std::vector<BiasDecayRow> bias_decay(std::span<const std::size_t> lengths,
                                     std::span<const int> ms, std::span<const double> alphas,
                                     std::size_t n_seeds, std::size_t replicates,
                                     std::uint64_t seed, Parallelism par,
                                     const SeriesSource& source) {
    if (n_seeds < 1) throw invalid_input("bias decay needs at least 1 seed");
    std::vector<BiasDecayRow> rows;
    for (double alpha : alphas) {
        for (std::size_t length : lengths) {
            // bias[i * n_seeds + s] for m = ms[i], realization s.
            std::vector<double> bias(ms.size() * n_seeds);
            parallel_for(n_seeds, par, [&](std::size_t s) {
                const std::uint64_t rs = realization_seed(seed, Stream::bias, alpha, length, s);
                const TimeSeries ts = source(alpha, length, rs);
                for (std::size_t i = 0; i < ms.size(); ++i) {
                    const BootstrapResult r =
                        bootstrap_one(ts, EmbeddingParams(ms[i]), replicates, 0.1,
                                      derive_seed(rs, static_cast<std::uint64_t>(ms[i])));
                    bias[i * n_seeds + s] = r.bias;
                }
            });
            for (std::size_t i = 0; i < ms.size(); ++i) {
                double total = 0.0;
                for (std::size_t s = 0; s < n_seeds; ++s) total += std::abs(bias[i * n_seeds + s]);
                rows.push_back(BiasDecayRow{length, ms[i], alpha,
                                            total / static_cast<double>(n_seeds), n_seeds});
            }
        }
    }
    return rows;
}

}  // namespace permboot::experiments
