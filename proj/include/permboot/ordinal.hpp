#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace permboot {

inline constexpr int kMinEmbedding = 3;
inline constexpr int kMaxEmbedding = 10;

/// Dense pattern id in [0, m!): the Lehmer code of the rank vector.
using PatternIndex = std::uint32_t;

/// A symbol sequence: one PatternIndex per embedding window, in time order.
using SymbolSequence = std::vector<PatternIndex>;

[[nodiscard]] std::uint64_t factorial(int n);

/// Real-valued series with at least two samples, all finite.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

private:
    std::vector<double> values_;
};

/// Symbol length m in [3, 10] and time delay tau >= 1.
class EmbeddingParams {
public:
    explicit EmbeddingParams(int m, int tau = 1);

    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] int tau() const noexcept { return tau_; }
    /// m!, the number of distinct ordinal patterns.
    [[nodiscard]] std::uint64_t alphabet_size() const noexcept { return factorial(m_); }
    /// Samples spanned by one window: (m - 1) * tau + 1.
    [[nodiscard]] std::size_t span() const noexcept;
    /// Number of windows in a series of length t, or 0 if it is too short.
    [[nodiscard]] std::size_t window_count(std::size_t t) const noexcept;

private:
    int m_;
    int tau_;
};

/// Rank vector of one window. Ranks are 1-based and in chronological order,
/// so (9, 10, 6) is the pattern "231".
class OrdinalPattern {
public:
    /// Throws invalid_input unless `ranks` is a permutation of {1..m}.
    static OrdinalPattern from_ranks(std::span<const int> ranks);
    /// Throws invalid_input if index >= m!.
    static OrdinalPattern from_index(PatternIndex index, int m);

    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] PatternIndex index() const noexcept { return index_; }
    [[nodiscard]] std::vector<int> ranks() const;
    /// "231" style label; ranks are comma separated when m = 10.
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const OrdinalPattern& a, const OrdinalPattern& b) noexcept {
        return a.m_ == b.m_ && a.index_ == b.index_;
    }

private:
    OrdinalPattern(std::array<std::uint8_t, kMaxEmbedding> ranks, int m, PatternIndex index)
        : ranks_(ranks), m_(m), index_(index) {}

    std::array<std::uint8_t, kMaxEmbedding> ranks_{};
    int m_ = 0;
    PatternIndex index_ = 0;
};

/// Ranks of a window. Ties go to the earlier sample (stable ranking), so the
/// result is always a permutation. Throws invalid_input on non-finite values
/// or a window longer than kMaxEmbedding.
[[nodiscard]] OrdinalPattern rank_map(std::span<const double> window);

/// One pattern per window (x_t, x_{t+tau}, ..., x_{t+(m-1)tau}), stride 1.
/// Throws insufficient_data when the series holds no complete window.
[[nodiscard]] SymbolSequence symbolize(const TimeSeries& ts, const EmbeddingParams& p);

/// Relative frequencies over all m! patterns.
struct PatternDistribution {
    int m = 0;
    std::vector<std::uint64_t> counts;
    std::vector<double> probs;
    std::uint64_t n_windows = 0;
};

/// Throws insufficient_data on an empty sequence, invalid_input on an index
/// outside [0, m!).
[[nodiscard]] PatternDistribution estimate_pattern_probs(std::span<const PatternIndex> symbols,
                                                         int m);

/// Normalized Shannon entropy -sum p ln p / ln(m!) with 0 ln 0 = 0.
[[nodiscard]] double permutation_entropy(const PatternDistribution& dist);

/// Same estimator evaluated directly on counts whose sum is `total`. The
/// counts may cover any subset of the alphabet; absent patterns contribute 0.
[[nodiscard]] double permutation_entropy(std::span<const std::uint64_t> counts,
                                         std::uint64_t total, int m);

/// Plug-in estimate straight from a series.
[[nodiscard]] double permutation_entropy(const TimeSeries& ts, const EmbeddingParams& p);

}  // namespace permboot
