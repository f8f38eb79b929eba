#include "permboot/markov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "permboot/errors.hpp"

namespace permboot {

TransitionMatrix estimate_transitions(std::span<const PatternIndex> symbols, int m) {
    if (symbols.size() < 2) {
        throw insufficient_data("transition estimation needs at least 2 symbols, got " +
                                std::to_string(symbols.size()));
    }
    TransitionMatrix tm;
    tm.marginal_ = estimate_pattern_probs(symbols, m);
    tm.total_transitions_ = symbols.size() - 1;

    const auto& counts = tm.marginal_.counts;
    std::uint64_t running = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        tm.support_.push_back(static_cast<PatternIndex>(i));
        running += counts[i];
        tm.marginal_cum_.push_back(running);
    }
    const std::size_t k = tm.support_.size();

    std::vector<std::uint32_t> compact(symbols.size());
    for (std::size_t t = 0; t < symbols.size(); ++t) {
        compact[t] = static_cast<std::uint32_t>(tm.compact_id(symbols[t]));
    }
    std::vector<std::uint64_t> pairs(symbols.size() - 1);
    for (std::size_t t = 0; t + 1 < symbols.size(); ++t) {
        pairs[t] = static_cast<std::uint64_t>(compact[t]) * k + compact[t + 1];
    }
    std::sort(pairs.begin(), pairs.end());

    tm.out_counts_.assign(k, 0);
    tm.row_begin_.assign(k + 1, 0);
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        const auto from = static_cast<std::size_t>(pairs[i] / k);
        const auto to = static_cast<std::uint32_t>(pairs[i] % k);
        const auto n = static_cast<std::uint64_t>(j - i);
        tm.row_target_.push_back(to);
        tm.row_count_.push_back(n);
        tm.out_counts_[from] += n;
        tm.row_cum_.push_back(tm.out_counts_[from]);
        ++tm.row_begin_[from + 1];
        i = j;
    }
    for (std::size_t s = 0; s < k; ++s) tm.row_begin_[s + 1] += tm.row_begin_[s];
    return tm;
}

std::size_t TransitionMatrix::compact_id(PatternIndex state) const {
    const auto it = std::lower_bound(support_.begin(), support_.end(), state);
    if (it == support_.end() || *it != state) return support_.size();
    return static_cast<std::size_t>(it - support_.begin());
}

std::uint64_t TransitionMatrix::count(PatternIndex from, PatternIndex to) const {
    const std::size_t a = compact_id(from);
    const std::size_t b = compact_id(to);
    if (a == support_.size() || b == support_.size()) return 0;
    for (std::size_t e = row_begin_[a]; e < row_begin_[a + 1]; ++e) {
        if (row_target_[e] == b) return row_count_[e];
    }
    return 0;
}

std::uint64_t TransitionMatrix::out_count(PatternIndex from) const {
    const std::size_t a = compact_id(from);
    return a == support_.size() ? 0 : out_counts_[a];
}

double TransitionMatrix::prob(PatternIndex from, PatternIndex to) const {
    const std::uint64_t out = out_count(from);
    if (out == 0) return 0.0;
    return static_cast<double>(count(from, to)) / static_cast<double>(out);
}

bool TransitionMatrix::is_dead_end(PatternIndex state) const {
    const std::size_t a = compact_id(state);
    return a != support_.size() && out_counts_[a] == 0;
}

std::vector<std::pair<PatternIndex, double>> TransitionMatrix::row(PatternIndex from) const {
    std::vector<std::pair<PatternIndex, double>> out;
    const std::size_t a = compact_id(from);
    if (a == support_.size() || out_counts_[a] == 0) return out;
    const auto total = static_cast<double>(out_counts_[a]);
    for (std::size_t e = row_begin_[a]; e < row_begin_[a + 1]; ++e) {
        out.emplace_back(support_[row_target_[e]], static_cast<double>(row_count_[e]) / total);
    }
    return out;
}

double stationarity_residual(const TransitionMatrix& tm) {
    const auto& marginal = tm.marginal();
    std::vector<double> pushed(tm.num_states(), 0.0);
    for (std::size_t a = 0; a < tm.support_size(); ++a) {
        const PatternIndex from = tm.support_state(a);
        for (const auto& [to, p] : tm.row(from)) pushed[to] += marginal.probs[from] * p;
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < pushed.size(); ++j) {
        worst = std::max(worst, std::abs(marginal.probs[j] - pushed[j]));
    }
    return worst;
}

SymbolSequence simulate_symbol_sequence(const TransitionMatrix& tm, std::size_t length, Rng& rng) {
    if (length == 0) throw invalid_input("simulated sequence length must be >= 1");
    SymbolSequence out;
    out.reserve(length);
    tm.walk(length, rng, [&](std::uint32_t id) { out.push_back(tm.support_state(id)); });
    return out;
}

}  // namespace permboot
