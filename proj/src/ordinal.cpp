#include "permboot/ordinal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "permboot/errors.hpp"

namespace permboot {

namespace {

constexpr std::array<std::uint64_t, kMaxEmbedding + 1> kFactorials = [] {
    std::array<std::uint64_t, kMaxEmbedding + 1> f{};
    f[0] = 1;
    for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * i;
    return f;
}();

}  // namespace

std::uint64_t factorial(int n) {
    if (n < 0 || n > kMaxEmbedding) {
        throw invalid_input("factorial: argument out of range [0, " +
                            std::to_string(kMaxEmbedding) + "]");
    }
    return kFactorials[static_cast<std::size_t>(n)];
}

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw insufficient_data("time series needs at least 2 samples, got " +
                                std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw invalid_input("time series sample " + std::to_string(i) + " is not finite");
        }
    }
}

EmbeddingParams::EmbeddingParams(int m, int tau) : m_(m), tau_(tau) {
    if (m < kMinEmbedding || m > kMaxEmbedding) {
        throw invalid_input("symbol length m must lie in [" + std::to_string(kMinEmbedding) +
                            ", " + std::to_string(kMaxEmbedding) + "], got " +
                            std::to_string(m));
    }
    if (tau < 1) {
        throw invalid_input("time delay tau must be >= 1, got " + std::to_string(tau));
    }
}

std::size_t EmbeddingParams::span() const noexcept {
    return static_cast<std::size_t>(m_ - 1) * static_cast<std::size_t>(tau_) + 1;
}

std::size_t EmbeddingParams::window_count(std::size_t t) const noexcept {
    return t >= span() ? t - span() + 1 : 0;
}

OrdinalPattern OrdinalPattern::from_ranks(std::span<const int> ranks) {
    const auto m = static_cast<int>(ranks.size());
    if (m < 1 || m > kMaxEmbedding) {
        throw invalid_input("ordinal pattern length must lie in [1, 10]");
    }
    std::array<bool, kMaxEmbedding + 1> seen{};
    std::array<std::uint8_t, kMaxEmbedding> stored{};
    for (int i = 0; i < m; ++i) {
        const int r = ranks[static_cast<std::size_t>(i)];
        if (r < 1 || r > m || seen[static_cast<std::size_t>(r)]) {
            throw invalid_input("ranks are not a permutation of {1.." + std::to_string(m) + "}");
        }
        seen[static_cast<std::size_t>(r)] = true;
        stored[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(r);
    }
    // Lehmer code: digit i counts later positions holding a smaller rank.
    std::uint64_t index = 0;
    for (int i = 0; i < m; ++i) {
        std::uint64_t smaller_after = 0;
        for (int j = i + 1; j < m; ++j) {
            if (stored[static_cast<std::size_t>(j)] < stored[static_cast<std::size_t>(i)]) {
                ++smaller_after;
            }
        }
        index += smaller_after * kFactorials[static_cast<std::size_t>(m - 1 - i)];
    }
    return {stored, m, static_cast<PatternIndex>(index)};
}

OrdinalPattern OrdinalPattern::from_index(PatternIndex index, int m) {
    if (m < 1 || m > kMaxEmbedding) {
        throw invalid_input("ordinal pattern length must lie in [1, 10]");
    }
    if (index >= kFactorials[static_cast<std::size_t>(m)]) {
        throw invalid_input("pattern index " + std::to_string(index) + " out of range for m=" +
                            std::to_string(m));
    }
    std::array<std::uint8_t, kMaxEmbedding> available{};
    for (int i = 0; i < m; ++i) available[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i + 1);
    int remaining = m;

    std::array<std::uint8_t, kMaxEmbedding> ranks{};
    std::uint64_t rest = index;
    for (int i = 0; i < m; ++i) {
        const std::uint64_t weight = kFactorials[static_cast<std::size_t>(m - 1 - i)];
        const auto digit = static_cast<int>(rest / weight);
        rest %= weight;
        ranks[static_cast<std::size_t>(i)] = available[static_cast<std::size_t>(digit)];
        std::copy(available.begin() + digit + 1, available.begin() + remaining,
                  available.begin() + digit);
        --remaining;
    }
    return {ranks, m, index};
}

std::vector<int> OrdinalPattern::ranks() const {
    return {ranks_.begin(), ranks_.begin() + m_};
}

std::string OrdinalPattern::to_string() const {
    std::string out;
    for (int i = 0; i < m_; ++i) {
        if (m_ >= 10 && i > 0) out += ',';
        out += std::to_string(ranks_[static_cast<std::size_t>(i)]);
    }
    return out;
}

OrdinalPattern rank_map(std::span<const double> window) {
    const auto m = static_cast<int>(window.size());
    if (m < 1 || m > kMaxEmbedding) {
        throw invalid_input("window length must lie in [1, 10], got " + std::to_string(m));
    }
    for (double v : window) {
        if (!std::isfinite(v)) throw invalid_input("window contains a non-finite value");
    }
    std::array<int, kMaxEmbedding> ranks{};
    for (int n = 0; n < m; ++n) {
        int rank = 1;
        for (int k = 0; k < m; ++k) {
            const double a = window[static_cast<std::size_t>(k)];
            const double b = window[static_cast<std::size_t>(n)];
            if (a < b || (a == b && k < n)) ++rank;
        }
        ranks[static_cast<std::size_t>(n)] = rank;
    }
    return OrdinalPattern::from_ranks(std::span<const int>(ranks.data(), static_cast<std::size_t>(m)));
}

SymbolSequence symbolize(const TimeSeries& ts, const EmbeddingParams& p) {
    const std::size_t windows = p.window_count(ts.size());
    if (windows == 0) {
        throw insufficient_data("series of length " + std::to_string(ts.size()) +
                                " is too short: m=" + std::to_string(p.m()) +
                                ", tau=" + std::to_string(p.tau()) + " needs T >= " +
                                std::to_string(p.span()));
    }
    const int m = p.m();
    const auto tau = static_cast<std::size_t>(p.tau());
    const auto x = ts.values();

    SymbolSequence symbols(windows);
    for (std::size_t t = 0; t < windows; ++t) {
        // With stable ties, rank(later) < rank(earlier) iff later < earlier,
        // so the Lehmer digits come straight from the values.
        std::uint64_t index = 0;
        for (int i = 0; i + 1 < m; ++i) {
            const double xi = x[t + static_cast<std::size_t>(i) * tau];
            std::uint64_t smaller_after = 0;
            for (int j = i + 1; j < m; ++j) {
                if (x[t + static_cast<std::size_t>(j) * tau] < xi) ++smaller_after;
            }
            index += smaller_after * kFactorials[static_cast<std::size_t>(m - 1 - i)];
        }
        symbols[t] = static_cast<PatternIndex>(index);
    }
    return symbols;
}

PatternDistribution estimate_pattern_probs(std::span<const PatternIndex> symbols, int m) {
    if (symbols.empty()) throw insufficient_data("cannot estimate pattern probabilities: no symbols");
    const std::uint64_t alphabet = factorial(m);

    PatternDistribution dist;
    dist.m = m;
    dist.n_windows = symbols.size();
    dist.counts.assign(alphabet, 0);
    for (PatternIndex s : symbols) {
        if (s >= alphabet) {
            throw invalid_input("pattern index " + std::to_string(s) + " out of range for m=" +
                                std::to_string(m));
        }
        ++dist.counts[s];
    }
    dist.probs.resize(alphabet);
    const auto n = static_cast<double>(dist.n_windows);
    for (std::size_t i = 0; i < alphabet; ++i) {
        dist.probs[i] = static_cast<double>(dist.counts[i]) / n;
    }
    return dist;
}

double permutation_entropy(std::span<const std::uint64_t> counts, std::uint64_t total, int m) {
    if (total == 0) throw insufficient_data("permutation entropy of an empty distribution");
    const auto n = static_cast<double>(total);
    double s = 0.0;
    for (std::uint64_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        s -= p * std::log(p);
    }
    const double h = s / std::log(static_cast<double>(factorial(m)));
    // Only rounding can leave [0, 1] here.
    return std::clamp(h, 0.0, 1.0);
}

double permutation_entropy(const PatternDistribution& dist) {
    return permutation_entropy(dist.counts, dist.n_windows, dist.m);
}

double permutation_entropy(const TimeSeries& ts, const EmbeddingParams& p) {
    return permutation_entropy(estimate_pattern_probs(symbolize(ts, p), p.m()));
}

}  // namespace permboot
