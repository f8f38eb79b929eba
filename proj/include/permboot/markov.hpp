#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "permboot/ordinal.hpp"
#include "permboot/random.hpp"

namespace permboot {

/// First-order Markov model of a symbol sequence: transition counts n_ij,
/// row-normalized probabilities, and the observed marginal.
///
/// Rows are normalized by their outgoing-transition count, so every row with
/// at least one outgoing transition is a probability distribution. A state
/// observed only as the final symbol has no outgoing mass and is a dead end.
///
/// Storage is sparse over the observed states ("support"). Internally states
/// are addressed by a compact id in [0, support_size()), ordered like their
/// pattern indices.
class TransitionMatrix {
public:
    [[nodiscard]] int m() const noexcept { return marginal_.m; }
    [[nodiscard]] std::uint64_t num_states() const noexcept { return marginal_.counts.size(); }
    [[nodiscard]] const PatternDistribution& marginal() const noexcept { return marginal_; }
    [[nodiscard]] std::uint64_t total_transitions() const noexcept { return total_transitions_; }

    [[nodiscard]] std::uint64_t count(PatternIndex from, PatternIndex to) const;
    [[nodiscard]] double prob(PatternIndex from, PatternIndex to) const;
    /// sum_k n_ik.
    [[nodiscard]] std::uint64_t out_count(PatternIndex from) const;
    /// Observed state without any outgoing transition.
    [[nodiscard]] bool is_dead_end(PatternIndex state) const;
    /// Non-zero entries of row `from` as (to, probability), ascending in `to`.
    [[nodiscard]] std::vector<std::pair<PatternIndex, double>> row(PatternIndex from) const;

    [[nodiscard]] std::size_t support_size() const noexcept { return support_.size(); }
    [[nodiscard]] PatternIndex support_state(std::size_t compact) const { return support_[compact]; }

    /// Draws `length` states, reporting each compact id to visit(id) in order.
    /// The first state comes from the marginal; each next state from the row
    /// of the current one. A dead end is left by a fresh marginal draw.
    /// Sampling is inverse-CDF over integer cumulative counts.
    template <typename Visit>
    void walk(std::size_t length, Rng& rng, Visit&& visit) const {
        if (length == 0) return;
        std::uint32_t state = draw_marginal(rng);
        visit(state);
        for (std::size_t i = 1; i < length; ++i) {
            state = draw_next(state, rng);
            visit(state);
        }
    }

private:
    friend TransitionMatrix estimate_transitions(std::span<const PatternIndex> symbols, int m);

    [[nodiscard]] std::uint32_t draw_marginal(Rng& rng) const {
        const std::uint64_t r = rng.below(marginal_.n_windows);
        return static_cast<std::uint32_t>(
            std::upper_bound(marginal_cum_.begin(), marginal_cum_.end(), r) -
            marginal_cum_.begin());
    }

    [[nodiscard]] std::uint32_t draw_next(std::uint32_t state, Rng& rng) const {
        const std::uint64_t out = out_counts_[state];
        if (out == 0) return draw_marginal(rng);
        const std::uint64_t r = rng.below(out);
        const std::size_t first = row_begin_[state];
        const std::size_t last = row_begin_[state + 1];
        std::size_t k = first;
        if (last - first <= 16) {
            // short rows (tau = 1 allows at most m successors): branch-free scan
            for (std::size_t j = first; j < last; ++j) k += row_cum_[j] <= r ? 1 : 0;
        } else {
            k = static_cast<std::size_t>(
                std::upper_bound(row_cum_.begin() + static_cast<std::ptrdiff_t>(first),
                                 row_cum_.begin() + static_cast<std::ptrdiff_t>(last), r) -
                row_cum_.begin());
        }
        return row_target_[k];
    }

    /// Compact id of `state`, or support_size() if unobserved.
    [[nodiscard]] std::size_t compact_id(PatternIndex state) const;

    PatternDistribution marginal_;
    std::uint64_t total_transitions_ = 0;

    std::vector<PatternIndex> support_;
    std::vector<std::uint64_t> marginal_cum_;
    std::vector<std::uint64_t> out_counts_;
    // CSR rows over compact ids.
    std::vector<std::size_t> row_begin_;
    std::vector<std::uint32_t> row_target_;
    std::vector<std::uint64_t> row_count_;
    std::vector<std::uint64_t> row_cum_;
};

/// Counts consecutive pairs (s_t, s_{t+1}). Throws insufficient_data for fewer
/// than two symbols.
[[nodiscard]] TransitionMatrix estimate_transitions(std::span<const PatternIndex> symbols, int m);

/// max_j |P(j) - sum_i P(i) P(i -> j)|: how far the estimated marginal is
/// from stationarity under the estimated transitions.
[[nodiscard]] double stationarity_residual(const TransitionMatrix& tm);

/// Simulates `length` symbols from the fitted chain (see TransitionMatrix::walk).
/// Throws invalid_input when length is 0.
[[nodiscard]] SymbolSequence simulate_symbol_sequence(const TransitionMatrix& tm,
                                                      std::size_t length, Rng& rng);

}  // namespace permboot
