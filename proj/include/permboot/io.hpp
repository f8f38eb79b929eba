#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "permboot/bootstrap.hpp"
#include "permboot/experiments.hpp"
#include "permboot/markov.hpp"
#include "permboot/ordinal.hpp"

namespace permboot {

// JSON field names match the struct members.
void to_json(nlohmann::json& j, const BootstrapResult& r);
void from_json(const nlohmann::json& j, BootstrapResult& r);
void to_json(nlohmann::json& j, const DifferenceTestResult& r);
void from_json(const nlohmann::json& j, DifferenceTestResult& r);

}  // namespace permboot

namespace permboot::io {

/// 17 significant digits, '.' decimal point regardless of locale.
[[nodiscard]] std::string format_double(double x);

/// Locale-independent parse of a finite number ("1.5e3", "-2", "+0.25").
/// Returns nullopt when the whole field is not a finite number.
[[nodiscard]] std::optional<double> parse_double(std::string_view text);

// ---------------------------------------------------------------------------
// EEG segments
// ---------------------------------------------------------------------------

inline constexpr std::size_t kBonnSegmentLength = 4097;
inline constexpr double kBonnSamplingRate = 173.61;

enum class EegSet { A, B, C, D, E, unknown };

[[nodiscard]] char to_char(EegSet s) noexcept;
[[nodiscard]] std::optional<EegSet> parse_eeg_set(std::string_view label);

/// Set of a Bonn file from its name: Z -> A, O -> B, N -> C, F -> D, S -> E.
[[nodiscard]] EegSet infer_bonn_set(std::string_view filename) noexcept;

struct EegSegment {
    std::vector<double> samples;
    EegSet set = EegSet::unknown;
    std::string segment_id;
    double sampling_rate = kBonnSamplingRate;
    /// Sample count differs from 4097 (only possible outside strict mode).
    bool count_mismatch = false;

    [[nodiscard]] TimeSeries series() const { return TimeSeries(samples); }
};

struct EegLoadOptions {
    /// Reject files whose sample count is not 4097.
    bool strict = false;
    /// Overrides the set inferred from the file name.
    std::optional<EegSet> set;
};

/// One numeric sample per line; blank lines are skipped. Throws io_error when
/// unreadable, parse_error with the offending line otherwise.
[[nodiscard]] EegSegment load_eeg_ascii(const std::filesystem::path& path,
                                        const EegLoadOptions& opts = {});

/// Segment files of one set under `root`. Looks in root/<A..E>, in the Bonn
/// folder names root/<Z,O,N,F,S>, and at files in root whose name starts with
/// the Bonn letter. Sorted by path.
[[nodiscard]] std::vector<std::filesystem::path> list_bonn_segments(
    const std::filesystem::path& root, EegSet set);

/// k distinct indices from [0, n), chosen reproducibly from `seed`, ascending.
[[nodiscard]] std::vector<std::size_t> select_subset(std::size_t n, std::size_t k,
                                                     std::uint64_t seed);

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Column by zero-based position or by header name.
using ColumnSelector = std::variant<std::size_t, std::string>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Comma separated, no quoting. The first line is the header. CRLF accepted.
[[nodiscard]] CsvTable read_csv_table(const std::filesystem::path& path);

/// Numeric column of a CSV file with an optional header line. A header is
/// assumed when the selected cell of the first line is not numeric, and is
/// required when the column is selected by name.
[[nodiscard]] TimeSeries load_csv_series(const std::filesystem::path& path,
                                         const ColumnSelector& column = std::size_t{0});

[[nodiscard]] TimeSeries load_series(const std::filesystem::path& path, std::string_view format,
                                     const ColumnSelector& column = std::size_t{0});

void write_series_csv(const std::filesystem::path& path, std::span<const double> values,
                      std::string_view header = "value");
void write_replicates_csv(const std::filesystem::path& path, std::span<const double> replicates);
void write_bootstrap_csv(const std::filesystem::path& path, const BootstrapResult& r);
void write_difference_csv(const std::filesystem::path& path, const DifferenceTestResult& r);

/// Dense m! x m! probabilities, row = from index, column = to index. m <= 7.
void write_transition_csv(const std::filesystem::path& path, const TransitionMatrix& tm);

void write_mc_csv(const std::filesystem::path& path,
                  std::span<const experiments::McDistribution> dists);
void write_sd_compare_csv(const std::filesystem::path& path,
                          std::span<const experiments::SdCompareRow> rows);
void write_coverage_csv(const std::filesystem::path& path,
                        std::span<const experiments::CoverageRow> rows);
void write_bias_decay_csv(const std::filesystem::path& path,
                          std::span<const experiments::BiasDecayRow> rows);

}  // namespace permboot::io
