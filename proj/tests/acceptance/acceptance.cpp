// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
// non-zero when any criterion fails.
//
// Criterion 7 needs the Bonn EEG archive: set PERMBOOT_BONN_DIR to a
// directory holding the Z/O/F (or A/B/D) segment files.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "permboot/bootstrap.hpp"
#include "permboot/errors.hpp"
#include "permboot/experiments.hpp"
#include "permboot/io.hpp"
#include "permboot/noise.hpp"

using namespace permboot;
namespace fs = std::filesystem;
namespace ex = permboot::experiments;

namespace {

constexpr std::uint64_t kSeed = 1;
const Parallelism kPar{0};

enum class Verdict { pass, fail, skip };

struct Line {
    int id;
    Verdict verdict;
    std::string detail;
};

std::vector<Line> g_lines;

void report(int id, Verdict v, const std::string& detail, double seconds) {
    const char* tag = v == Verdict::pass ? "PASS" : v == Verdict::fail ? "FAIL" : "SKIP";
    char buf[64];
    std::snprintf(buf, sizeof buf, " (%.1fs)", seconds);
    std::cout << tag << " criterion " << id << ": " << detail << buf << std::endl;
    g_lines.push_back({id, v, detail});
}

std::string fmt(double x, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

template <typename F>
void run_criterion(int id, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v = Verdict::fail;
    std::string detail;
    try {
        v = body(detail);
    } catch (const std::exception& e) {
        v = Verdict::fail;
        detail += std::string(" exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, v, detail, s);
}

// Published reference table: mean PE and mean 90% interval amplitude per (m, alpha).
struct TableCell {
    int m;
    double alpha;
    double h;
    double amplitude;
};

constexpr std::array<TableCell, 16> kTable{{
    {3, -1, 0.995831848, 0.00222}, {4, -1, 0.989083439, 0.00420},
    {5, -1, 0.983495069, 0.00500}, {6, -1, 0.97547007, 0.00555},
    {3, 0, 0.99990292, 0.00057},   {4, 0, 0.999679839, 0.00080},
    {5, 0, 0.998800463, 0.00134},  {6, 0, 0.994503528, 0.00235},
    {3, 1, 0.991622896, 0.00340},  {4, 1, 0.983385433, 0.00493},
    {5, 1, 0.97600538, 0.00591},   {6, 1, 0.966355927, 0.00657},
    {3, 2, 0.943233315, 0.00959},  {4, 2, 0.90634703, 0.01273},
    {5, 2, 0.878452628, 0.01413},  {6, 2, 0.853327039, 0.01482},
}};

const std::vector<int> kMs{3, 4, 5, 6};
const std::vector<double> kAlphas{-1.0, 0.0, 1.0, 2.0};

// 1 ---------------------------------------------------------------------------
Verdict worked_example(std::string& d) {
    const TimeSeries ts(std::vector<double>{4, 7, 9, 10, 6, 11, 3});
    const auto dist = estimate_pattern_probs(symbolize(ts, EmbeddingParams(3)), 3);
    std::vector<double> nonzero;
    for (double p : dist.probs)
        if (p > 0) nonzero.push_back(p);
    std::sort(nonzero.rbegin(), nonzero.rend());
    const double h = permutation_entropy(dist);
    const bool probs_ok = nonzero.size() == 3 && std::abs(nonzero[0] - 0.4) < 1e-15 &&
                          std::abs(nonzero[1] - 0.4) < 1e-15 && std::abs(nonzero[2] - 0.2) < 1e-15;
    const bool h_ok = std::abs(h - 0.58876) <= 1e-4;
    d = "probs {0.4,0.4,0.2} " + std::string(probs_ok ? "ok" : "mismatch") + ", h=" + fmt(h, 10) +
        " (target 0.58876 +- 1e-4)";
    return probs_ok && h_ok ? Verdict::pass : Verdict::fail;
}

// 2 ---------------------------------------------------------------------------
Verdict table_means(std::string& d) {
    std::map<std::pair<int, double>, double> mean;
    for (double a : kAlphas) {
        for (const auto& dist : ex::mc_pe_grid(a, 50000, kMs, 1, 200, kSeed, kPar))
            mean[{dist.m, a}] = dist.mean;
    }
    int bad = 0;
    double worst = 0.0;
    std::string worst_cell;
    for (const auto& c : kTable) {
        const double diff = std::abs(mean[{c.m, c.alpha}] - c.h);
        if (diff > 0.005) ++bad;
        if (diff > worst) {
            worst = diff;
            worst_cell = "(m=" + std::to_string(c.m) + ",a=" + fmt(c.alpha) + ": " +
                         fmt(mean[{c.m, c.alpha}]) + " vs " + fmt(c.h) + ")";
        }
    }
    d = std::to_string(16 - bad) + "/16 cells within 0.005 at T=50000; largest gap " + fmt(worst, 3) +
        " " + worst_cell;
    return bad == 0 ? Verdict::pass : Verdict::fail;
}

// 3 ---------------------------------------------------------------------------
Verdict coverage(std::string& d) {
    ex::CoverageConfig white;
    white.ms = kMs;
    white.alphas = {0.0};
    white.seed = kSeed;
    ex::CoverageConfig brown = white;
    brown.ms = {3};
    brown.alphas = {2.0};

    bool ok = true;
    std::string cells;
    for (const auto& r : ex::coverage_study(white, kPar)) {
        const auto misses = r.miss_left + r.miss_right;
        ok = ok && misses <= 1;
        cells += " m=" + std::to_string(r.m) + ":" + std::to_string(r.miss_left) + "/" +
                 std::to_string(r.miss_right);
    }
    const auto b = ex::coverage_study(brown, kPar).front();
    const auto b_misses = b.miss_left + b.miss_right;
    ok = ok && b_misses <= 12;
    d = "white noise misses left/right (need <=1 total):" + cells + "; alpha=2 m=3 misses " +
        std::to_string(b_misses) + " (need <=12)";
    return ok ? Verdict::pass : Verdict::fail;
}

// 4 ---------------------------------------------------------------------------
Verdict amplitude(std::string& d) {
    const EmbeddingParams p(3);
    const auto mc = ex::mc_pe_distribution(0.0, 50000, p, 200, kSeed, kPar);
    const auto row = ex::coverage_row(0.0, p, 50000, mc.mean, 50, {1000, 0.1, kSeed}, kPar);
    const double ratio = row.mean_amplitude / 0.00057;
    d = "mean width " + fmt(row.mean_amplitude, 4) + " vs 0.00057 (ratio " + fmt(ratio, 3) +
        ", need within factor 2)";
    return ratio >= 0.5 && ratio <= 2.0 ? Verdict::pass : Verdict::fail;
}

// 5 ---------------------------------------------------------------------------
Verdict sd_agreement(std::string& d) {
    ex::SdCompareConfig cfg;
    cfg.lengths = {50000};
    cfg.ms = {3};
    cfg.alphas = kAlphas;
    cfg.seed = kSeed;
    bool ok = true;
    d = "sd_boot/sd_mc at T=50000, m=3:";
    for (const auto& r : ex::sd_comparison(cfg, kPar)) {
        const double rel = std::abs(r.sd_boot - r.sd_mc) / r.sd_mc;
        ok = ok && rel <= 0.25;
        d += " a=" + fmt(r.alpha) + ":" + fmt(r.sd_boot / r.sd_mc, 3);
    }
    d += " (need within 25%)";
    return ok ? Verdict::pass : Verdict::fail;
}

// 6 ---------------------------------------------------------------------------
Verdict bias_decay(std::string& d) {
    const std::vector<std::size_t> lengths{600, 20000};
    const auto rows = ex::bias_decay(lengths, kMs, kAlphas, 10, 1000, kSeed, kPar);
    std::map<std::tuple<int, double, std::size_t>, double> bias;
    for (const auto& r : rows) bias[{r.m, r.alpha, r.length}] = r.mean_abs_bias;
    int good = 0;
    std::string bad_cells;
    for (int m : kMs) {
        for (double a : kAlphas) {
            const double small = bias[{m, a, 600}], large = bias[{m, a, 20000}];
            if (large < small) {
                ++good;
            } else {
                bad_cells += " (m=" + std::to_string(m) + ",a=" + fmt(a) + ")";
            }
        }
    }
    d = std::to_string(good) + "/16 cells with |bias|(20000) < |bias|(600)" + bad_cells;
    return good == 16 ? Verdict::pass : Verdict::fail;
}

// 7 ---------------------------------------------------------------------------
Verdict eeg_tests(std::string& d) {
    const char* root = std::getenv("PERMBOOT_BONN_DIR");
    if (root == nullptr || !fs::is_directory(root)) {
        d = "Bonn EEG files not available (set PERMBOOT_BONN_DIR)";
        return Verdict::skip;
    }
    const EmbeddingParams p(4);
    auto load_set = [&](io::EegSet set, std::uint64_t stream) {
        const auto files = io::list_bonn_segments(root, set);
        if (files.size() < 10) {
            throw insufficient_data(std::string("set ") + io::to_char(set) + " has " +
                                    std::to_string(files.size()) + " segments, need 10");
        }
        std::vector<BootstrapResult> out;
        std::uint64_t k = 0;
        for (std::size_t i : io::select_subset(files.size(), 10, derive_seed(kSeed, stream))) {
            const auto seg = io::load_eeg_ascii(files[i]);
            out.push_back(bootstrap_pe(seg.series(), p, {1000, 0.1, derive_seed(kSeed, stream * 100 + k++)},
                                       kPar));
        }
        return out;
    };
    const auto a = load_set(io::EegSet::A, 1);
    const auto b = load_set(io::EegSet::B, 2);
    const auto dset = load_set(io::EegSet::D, 3);
    auto rate = [](const std::vector<BootstrapResult>& x, const std::vector<BootstrapResult>& y) {
        int rejects = 0, total = 0;
        for (const auto& u : x)
            for (const auto& v : y) {
                rejects += difference_test(u, v, 0.1).reject ? 1 : 0;
                ++total;
            }
        return static_cast<double>(rejects) / total;
    };
    const double ad = rate(a, dset), bd = rate(b, dset), ab = rate(a, b);
    d = "reject rates A-D " + fmt(ad, 3) + ", B-D " + fmt(bd, 3) + " (need >=0.9), A-B " + fmt(ab, 3) +
        " (need strictly inside (0,1))";
    return ad >= 0.9 && bd >= 0.9 && ab > 0.0 && ab < 1.0 ? Verdict::pass : Verdict::fail;
}

// 8 ---------------------------------------------------------------------------
Verdict oracles(std::string& d) {
    std::size_t series_checked = 0;
    for (int m : {3, 4}) {
        const auto lex = oracle::lexicographic_index(m);
        for (std::size_t t = static_cast<std::size_t>(m); t <= 12; ++t) {
            std::vector<double> x(t, 1.0);
            for (;;) {
                const auto dist = estimate_pattern_probs(symbolize(TimeSeries(x), EmbeddingParams(m)), m);
                if (dist.counts != oracle::pattern_counts(x, m, 1, lex)) {
                    d = "pattern counts differ from stable-sort oracle (m=" + std::to_string(m) +
                        ", T=" + std::to_string(t) + ")";
                    return Verdict::fail;
                }
                ++series_checked;
                std::size_t i = 0;
                while (i < t && x[i] == 3.0) x[i++] = 1.0;
                if (i == t) break;
                x[i] += 1.0;
            }
        }
    }
    std::mt19937_64 gen(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> x(2 + gen() % 2000);
        for (double& v : x) v = u(gen);
        const double h = u(gen);
        const auto ref = oracle::welford(x);
        worst = std::max({worst, std::abs(boot_mean(x) - ref.mean), std::abs(boot_sd(x) - ref.sd),
                          std::abs(boot_bias(h, x) - (ref.mean - h))});
    }
    d = std::to_string(series_checked) + " series match the counting oracle; statistics max error " +
        fmt(worst, 3) + " (need <=1e-12)";
    return worst <= 1e-12 ? Verdict::pass : Verdict::fail;
}

// 9 ---------------------------------------------------------------------------
Verdict spectra(std::string& d) {
    bool ok = true;
    d = "mean slope over 20 seeds at T=4096:";
    for (double a : kAlphas) {
        double sum = 0.0;
        for (std::uint64_t s = 0; s < 20; ++s) {
            const auto x = generate_power_law_noise({a, 4096, derive_seed(kSeed, s)});
            sum += fit_spectral_slope(periodogram(x.values()));
        }
        const double slope = sum / 20.0;
        ok = ok && std::abs(slope + a) <= 0.15;
        d += " a=" + fmt(a) + ":" + fmt(slope, 4);
    }
    d += " (need within 0.15 of -alpha)";
    return ok ? Verdict::pass : Verdict::fail;
}

// 10 --------------------------------------------------------------------------
std::string run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "permboot");
    std::ostringstream out, err;
    if (cli::run(args, out, err) != cli::kExitOk) throw std::runtime_error("cli failed: " + err.str());
    return out.str();
}

std::string slurp_dir(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::string all;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        all += f.filename().string() + "\n" + std::string(std::istreambuf_iterator<char>(in), {});
    }
    return all;
}

Verdict determinism(std::string& d) {
    const fs::path dir = fs::temp_directory_path() / "permboot_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
    io::write_series_csv(a, generate_power_law_noise({1.0, 4000, 5}).values());
    io::write_series_csv(b, generate_power_law_noise({2.0, 4000, 6}).values());

    const std::vector<std::vector<std::string>> workflows{
        {"pe", "--input", a, "--m", "5"},
        {"bootstrap", "--input", a, "--m", "4", "--B", "500", "--seed", "9"},
        {"test-diff", "--a", a, "--b", b, "--m", "4", "--B", "300", "--seed", "9"},
        {"noise", "--alpha-exp", "1.5", "--length", "2048", "--seed", "9"},
        {"mc", "--alpha-exp", "0", "2", "--m", "3", "4", "--length", "600", "5000", "--reps", "20",
         "--seed", "9"},
        {"coverage", "--alpha-exp", "1", "--m", "3", "--length", "1000", "--intervals", "5", "--B",
         "200", "--mc-reps", "10", "--seed", "9"},
        {"sd-compare", "--alpha-exp", "-1", "--m", "3", "--length", "600", "--mc-reps", "10", "--B",
         "200", "--seed", "9"},
    };
    int identical = 0;
    std::string bad;
    for (const auto& w : workflows) {
        std::string outputs[3];
        std::string files[3];
        const char* threads[3] = {"1", "1", "4"};
        for (int i = 0; i < 3; ++i) {
            const fs::path out_dir = dir / ("run" + std::to_string(i));
            fs::remove_all(out_dir);
            fs::create_directories(out_dir);
            auto args = w;
            args.insert(args.end(), {"--threads", threads[i], "--out", out_dir.string()});
            outputs[i] = nlohmann::json::parse(run_cli(args)).dump();
            files[i] = slurp_dir(out_dir);
        }
        if (outputs[0] == outputs[1] && outputs[0] == outputs[2] && files[0] == files[1] &&
            files[0] == files[2]) {
            ++identical;
        } else {
            bad += " " + w.front();
        }
    }
    fs::remove_all(dir);
    d = std::to_string(identical) + "/" + std::to_string(workflows.size()) +
        " workflows identical across reruns and thread counts" + bad;
    return identical == static_cast<int>(workflows.size()) ? Verdict::pass : Verdict::fail;
}

}  // namespace

int main() {
    run_criterion(1, worked_example);
    run_criterion(2, table_means);
    run_criterion(3, coverage);
    run_criterion(4, amplitude);
    run_criterion(5, sd_agreement);
    run_criterion(6, bias_decay);
    run_criterion(7, eeg_tests);
    run_criterion(8, oracles);
    run_criterion(9, spectra);
    run_criterion(10, determinism);

    int failed = 0;
    for (const auto& l : g_lines) failed += l.verdict == Verdict::fail ? 1 : 0;
    std::cout << (failed == 0 ? "all criteria met" : std::to_string(failed) + " criteria failed")
              << std::endl;
    return failed == 0 ? 0 : 1;
}
