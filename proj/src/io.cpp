#include "permboot/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "permboot/errors.hpp"
#include "permboot/random.hpp"

namespace permboot {

void to_json(nlohmann::json& j, const BootstrapResult& r) {
    j = nlohmann::json{{"h_hat", r.h_hat},       {"boot_mean", r.boot_mean},
                       {"boot_sd", r.boot_sd},   {"bias", r.bias},
                       {"mse", r.mse},           {"ci_low", r.ci_low},
                       {"ci_high", r.ci_high},   {"significance", r.significance},
                       {"replicates", r.replicates}};
}

void from_json(const nlohmann::json& j, BootstrapResult& r) {
    j.at("h_hat").get_to(r.h_hat);
    j.at("boot_mean").get_to(r.boot_mean);
    j.at("boot_sd").get_to(r.boot_sd);
    j.at("bias").get_to(r.bias);
    j.at("mse").get_to(r.mse);
    j.at("ci_low").get_to(r.ci_low);
    j.at("ci_high").get_to(r.ci_high);
    j.at("significance").get_to(r.significance);
    j.at("replicates").get_to(r.replicates);
}

void to_json(nlohmann::json& j, const DifferenceTestResult& r) {
    j = nlohmann::json{{"delta_hat", r.delta_hat}, {"ci_low", r.ci_low},
                       {"ci_high", r.ci_high},     {"reject", r.reject},
                       {"significance", r.significance}, {"h_a", r.h_a},
                       {"h_b", r.h_b}};
}

void from_json(const nlohmann::json& j, DifferenceTestResult& r) {
    j.at("delta_hat").get_to(r.delta_hat);
    j.at("ci_low").get_to(r.ci_low);
    j.at("ci_high").get_to(r.ci_high);
    j.at("reject").get_to(r.reject);
    j.at("significance").get_to(r.significance);
    j.at("h_a").get_to(r.h_a);
    j.at("h_b").get_to(r.h_b);
}

}  // namespace permboot

namespace permboot::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string_view unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path.string() + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw io_error("error while reading " + path.string());
    return std::move(buf).str();
}

// Lines with their 1-based numbers; '\r' before '\n' is dropped.
std::vector<std::pair<std::size_t, std::string_view>> split_lines(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> lines;
    std::size_t number = 1;
    while (!text.empty()) {
        const std::size_t end = text.find('\n');
        std::string_view line = text.substr(0, end);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(number++, line);
        if (end == std::string_view::npos) break;
        text.remove_prefix(end + 1);
    }
    return lines;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    for (;;) {
        const std::size_t comma = line.find(',');
        cells.push_back(line.substr(0, comma));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return cells;
}

class Writer {
public:
    explicit Writer(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw io_error("cannot open " + path.string() + " for writing");
    }
    std::ofstream& stream() { return out_; }
    void close() {
        out_.close();
        if (!out_) throw io_error("error while writing " + path_.string());
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

}  // namespace

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                   std::chars_format::general, 17);
    return {buf.data(), res.ptr};
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

char to_char(EegSet s) noexcept {
    switch (s) {
        case EegSet::A: return 'A';
        case EegSet::B: return 'B';
        case EegSet::C: return 'C';
        case EegSet::D: return 'D';
        case EegSet::E: return 'E';
        case EegSet::unknown: break;
    }
    return '?';
}

std::optional<EegSet> parse_eeg_set(std::string_view label) {
    label = trim(label);
    if (label.size() != 1) return std::nullopt;
    switch (std::toupper(static_cast<unsigned char>(label.front()))) {
        case 'A': return EegSet::A;
        case 'B': return EegSet::B;
        case 'C': return EegSet::C;
        case 'D': return EegSet::D;
        case 'E': return EegSet::E;
        default: return std::nullopt;
    }
}

namespace {

constexpr std::array<std::pair<char, EegSet>, 5> kBonnLetters{{
    {'Z', EegSet::A}, {'O', EegSet::B}, {'N', EegSet::C}, {'F', EegSet::D}, {'S', EegSet::E}}};

char bonn_letter(EegSet set) {
    for (const auto& [letter, s] : kBonnLetters) {
        if (s == set) return letter;
    }
    return '\0';
}

}  // namespace

EegSet infer_bonn_set(std::string_view filename) noexcept {
    if (filename.empty()) return EegSet::unknown;
    const auto c = static_cast<char>(std::toupper(static_cast<unsigned char>(filename.front())));
    for (const auto& [letter, s] : kBonnLetters) {
        if (letter == c) return s;
    }
    return EegSet::unknown;
}

EegSegment load_eeg_ascii(const std::filesystem::path& path, const EegLoadOptions& opts) {
    const std::string text = read_file(path);
    EegSegment seg;
    seg.segment_id = path.stem().string();
    seg.set = opts.set.value_or(infer_bonn_set(path.filename().string()));

    for (const auto& [number, raw] : split_lines(text)) {
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        const std::optional<double> v = parse_double(line);
        if (!v) {
            throw parse_error(path.string() + ":" + std::to_string(number) +
                                  ": not a finite number: '" + std::string(line) + "'",
                              number);
        }
        seg.samples.push_back(*v);
    }
    if (seg.samples.empty()) throw parse_error(path.string() + ":1: no samples", 1);

    seg.count_mismatch = seg.samples.size() != kBonnSegmentLength;
    if (opts.strict && seg.count_mismatch) {
        throw parse_error(path.string() + ": expected " + std::to_string(kBonnSegmentLength) +
                              " samples, found " + std::to_string(seg.samples.size()),
                          0);
    }
    return seg;
}

std::vector<std::filesystem::path> list_bonn_segments(const std::filesystem::path& root,
                                                      EegSet set) {
    namespace fs = std::filesystem;
    std::vector<fs::path> out;
    if (!fs::is_directory(root)) throw io_error(root.string() + " is not a directory");

    const char letter = bonn_letter(set);
    const std::array<std::string, 4> folders{std::string(1, to_char(set)),
                                             std::string(1, static_cast<char>(std::tolower(to_char(set)))),
                                             std::string(1, letter),
                                             std::string(1, static_cast<char>(std::tolower(letter)))};
    for (const std::string& name : folders) {
        const fs::path dir = root / name;
        if (!fs::is_directory(dir)) continue;
        for (const auto& entry : fs::directory_iterator(dir)) {
            std::string ext = entry.path().extension().string();
            std::transform(ext.begin(), ext.end(), ext.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (entry.is_regular_file() && ext == ".txt") out.push_back(entry.path());
        }
        if (!out.empty()) break;
    }
    if (out.empty()) {
        for (const auto& entry : fs::directory_iterator(root)) {
            if (entry.is_regular_file() && infer_bonn_set(entry.path().filename().string()) == set) {
                out.push_back(entry.path());
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> select_subset(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k > n) {
        throw invalid_input("cannot select " + std::to_string(k) + " of " + std::to_string(n) +
                            " items");
    }
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

CsvTable read_csv_table(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    CsvTable table;
    bool have_header = false;
    for (const auto& [number, line] : split_lines(text)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        for (std::string_view c : split_cells(line)) cells.emplace_back(unquote(c));
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    if (!have_header) throw parse_error(path.string() + ":1: empty CSV file", 1);
    return table;
}

TimeSeries load_csv_series(const std::filesystem::path& path, const ColumnSelector& column) {
    const std::string text = read_file(path);
    std::vector<double> values;
    std::optional<std::size_t> index;
    if (const auto* i = std::get_if<std::size_t>(&column)) index = *i;
    const auto* name = std::get_if<std::string>(&column);

    bool first = true;
    for (const auto& [number, line] : split_lines(text)) {
        if (trim(line).empty()) continue;
        const std::vector<std::string_view> cells = split_cells(line);
        if (first) {
            first = false;
            if (name != nullptr) {
                const auto it = std::find_if(cells.begin(), cells.end(), [&](std::string_view c) {
                    return unquote(c) == *name;
                });
                if (it == cells.end()) {
                    throw parse_error(path.string() + ":" + std::to_string(number) +
                                          ": no column named '" + *name + "'",
                                      number);
                }
                index = static_cast<std::size_t>(it - cells.begin());
                continue;
            }
            if (*index < cells.size() && !parse_double(cells[*index])) continue;  // header line
        }
        if (*index >= cells.size()) {
            throw parse_error(path.string() + ":" + std::to_string(number) + ": missing column " +
                                  std::to_string(*index + 1),
                              number);
        }
        const std::optional<double> v = parse_double(cells[*index]);
        if (!v) {
            throw parse_error(path.string() + ":" + std::to_string(number) + ": column " +
                                  std::to_string(*index + 1) + " is not a finite number: '" +
                                  std::string(trim(cells[*index])) + "'",
                              number);
        }
        values.push_back(*v);
    }
    if (first) throw parse_error(path.string() + ":1: no data", 1);
    if (values.size() < 2) {
        throw insufficient_data(path.string() + ": need at least 2 samples, found " +
                                std::to_string(values.size()));
    }
    return TimeSeries(std::move(values));
}

TimeSeries load_series(const std::filesystem::path& path, std::string_view format,
                       const ColumnSelector& column) {
    if (format == "csv") return load_csv_series(path, column);
    if (format == "eeg") return load_eeg_ascii(path).series();
    throw invalid_input("unknown input format '" + std::string(format) + "' (expected csv or eeg)");
}

void write_series_csv(const std::filesystem::path& path, std::span<const double> values,
                      std::string_view header) {
    Writer w(path);
    w.stream() << header << '\n';
    for (double v : values) w.stream() << format_double(v) << '\n';
    w.close();
}

void write_replicates_csv(const std::filesystem::path& path, std::span<const double> replicates) {
    write_series_csv(path, replicates, "h_star");
}

void write_bootstrap_csv(const std::filesystem::path& path, const BootstrapResult& r) {
    Writer w(path);
    w.stream() << "h_hat,boot_mean,boot_sd,bias,mse,ci_low,ci_high,significance,B\n"
               << format_double(r.h_hat) << ',' << format_double(r.boot_mean) << ','
               << format_double(r.boot_sd) << ',' << format_double(r.bias) << ','
               << format_double(r.mse) << ',' << format_double(r.ci_low) << ','
               << format_double(r.ci_high) << ',' << format_double(r.significance) << ','
               << r.replicates.size() << '\n';
    w.close();
}

void write_difference_csv(const std::filesystem::path& path, const DifferenceTestResult& r) {
    Writer w(path);
    w.stream() << "delta_hat,ci_low,ci_high,reject,significance,h_a,h_b\n"
               << format_double(r.delta_hat) << ',' << format_double(r.ci_low) << ','
               << format_double(r.ci_high) << ',' << (r.reject ? "true" : "false") << ','
               << format_double(r.significance) << ',' << format_double(r.h_a) << ','
               << format_double(r.h_b) << '\n';
    w.close();
}

void write_transition_csv(const std::filesystem::path& path, const TransitionMatrix& tm) {
    if (tm.m() > 7) throw invalid_input("dense transition export is limited to m <= 7");
    const std::uint64_t n = tm.num_states();
    std::vector<double> row(n);
    Writer w(path);
    w.stream() << "from";
    for (std::uint64_t j = 0; j < n; ++j) w.stream() << ',' << j;
    w.stream() << '\n';
    for (std::uint64_t i = 0; i < n; ++i) {
        std::fill(row.begin(), row.end(), 0.0);
        for (const auto& [to, p] : tm.row(static_cast<PatternIndex>(i))) row[to] = p;
        w.stream() << i;
        for (double p : row) w.stream() << ',' << format_double(p);
        w.stream() << '\n';
    }
    w.close();
}

void write_mc_csv(const std::filesystem::path& path,
                  std::span<const experiments::McDistribution> dists) {
    Writer w(path);
    w.stream() << "T,m,alpha,rep_index,h\n";
    for (const auto& d : dists) {
        for (std::size_t i = 0; i < d.replicates.size(); ++i) {
            w.stream() << d.length << ',' << d.m << ',' << format_double(d.alpha) << ',' << i
                       << ',' << format_double(d.replicates[i]) << '\n';
        }
    }
    w.close();
}

void write_sd_compare_csv(const std::filesystem::path& path,
                          std::span<const experiments::SdCompareRow> rows) {
    Writer w(path);
    w.stream() << "T,m,alpha,sd_mc,sd_boot,mean_mc,h_hat_boot,bias_boot\n";
    for (const auto& r : rows) {
        w.stream() << r.length << ',' << r.m << ',' << format_double(r.alpha) << ','
                   << format_double(r.sd_mc) << ',' << format_double(r.sd_boot) << ','
                   << format_double(r.mean_mc) << ',' << format_double(r.h_hat_boot) << ','
                   << format_double(r.bias_boot) << '\n';
    }
    w.close();
}

void write_coverage_csv(const std::filesystem::path& path,
                        std::span<const experiments::CoverageRow> rows) {
    Writer w(path);
    w.stream() << "m,alpha,h_ref,miss_left,miss_right,mean_amplitude\n";
    for (const auto& r : rows) {
        w.stream() << r.m << ',' << format_double(r.alpha) << ',' << format_double(r.reference_h)
                   << ',' << r.miss_left << ',' << r.miss_right << ','
                   << format_double(r.mean_amplitude) << '\n';
    }
    w.close();
}

void write_bias_decay_csv(const std::filesystem::path& path,
                          std::span<const experiments::BiasDecayRow> rows) {
    Writer w(path);
    w.stream() << "T,m,alpha,mean_abs_bias,n_seeds\n";
    for (const auto& r : rows) {
        w.stream() << r.length << ',' << r.m << ',' << format_double(r.alpha) << ','
                   << format_double(r.mean_abs_bias) << ',' << r.n_seeds << '\n';
    }
    w.close();
}

}  // namespace permboot::io
