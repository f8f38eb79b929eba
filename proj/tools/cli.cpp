#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "permboot/bootstrap.hpp"
#include "permboot/errors.hpp"
#include "permboot/experiments.hpp"
#include "permboot/io.hpp"
#include "permboot/markov.hpp"
#include "permboot/noise.hpp"
#include "permboot/ordinal.hpp"

namespace permboot::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::size_t> kFullLengthGrid{60,   100,  120,   400,   600,  2000,
                                               3600, 5000, 10000, 20000, 50000};

struct Common {
    std::uint64_t seed = 0;
    std::string out_dir;
    unsigned threads = 0;

    [[nodiscard]] Parallelism par() const { return Parallelism{threads}; }

    // Created on demand; empty when --out was not given.
    [[nodiscard]] std::optional<fs::path> out() const {
        if (out_dir.empty()) return std::nullopt;
        fs::create_directories(out_dir);
        return fs::path(out_dir);
    }
};

struct SeriesInput {
    std::string path;
    std::string format = "csv";
    std::string column = "0";

    [[nodiscard]] io::ColumnSelector selector() const {
        if (!column.empty() && column.find_first_not_of("0123456789") == std::string::npos) {
            return static_cast<std::size_t>(std::stoull(column));
        }
        return column;
    }

    [[nodiscard]] TimeSeries load(const std::string& p) const {
        return io::load_series(p, format, selector());
    }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "Master seed; every random draw derives from it")
        ->capture_default_str();
    sub->add_option("--out", c.out_dir, "Directory for CSV artifacts");
    sub->add_option("--threads", c.threads, "Worker threads, 0 = all cores (results do not depend on it)")
        ->capture_default_str();
}

void add_format(CLI::App* sub, SeriesInput& in) {
    sub->add_option("--format", in.format, "Input format")
        ->check(CLI::IsMember({"csv", "eeg"}))
        ->capture_default_str();
    sub->add_option("--column", in.column, "CSV column: zero-based index or header name")
        ->capture_default_str();
}

void add_embedding(CLI::App* sub, int& m, int& tau) {
    sub->add_option("--m", m, "Symbol length (3..10)")->required();
    sub->add_option("--tau", tau, "Time delay")->capture_default_str();
}

// Plain key=value lines belong to the subcommand being run.
class SubcommandConfig : public CLI::ConfigINI {
public:
    explicit SubcommandConfig(std::string sub) : sub_(std::move(sub)) {}

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto items = CLI::ConfigINI::from_config(input);
        if (sub_.empty()) return items;
        for (auto& item : items) {
            if (item.parents.empty() || item.parents.front() == "default") item.parents = {sub_};
        }
        return items;
    }

private:
    std::string sub_;
};

json summary_json(const BootstrapResult& r) {
    json j = r;
    j.erase("replicates");
    j["B"] = r.replicates.size();
    return j;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Parametric bootstrap inference for permutation entropy", "permboot"};
    app.require_subcommand(1);
    app.allow_extras(false);
    app.fallthrough();
    app.set_config("--config", "", "key=value file with default flag values");
    {
        std::string sub;
        for (std::size_t i = 1; i < args.size(); ++i) {
            if (args[i] == "--config") {
                ++i;
            } else if (!args[i].starts_with('-')) {
                sub = args[i];
                break;
            }
        }
        app.config_formatter(std::make_shared<SubcommandConfig>(sub));
    }

    Common common;
    SeriesInput input;
    int m = 0;
    int tau = 1;
    std::size_t replicates = 1000;
    double significance = 0.1;
    std::function<void()> action;

    // pe ---------------------------------------------------------------------
    auto* pe = app.add_subcommand("pe", "Permutation entropy of one series");
    pe->add_option("--input", input.path, "Input series")->required();
    add_format(pe, input);
    add_embedding(pe, m, tau);
    add_common(pe, common);
    pe->callback([&] {
        action = [&] {
            const EmbeddingParams p(m, tau);
            const TimeSeries ts = input.load(input.path);
            const SymbolSequence symbols = symbolize(ts, p);
            const PatternDistribution dist = estimate_pattern_probs(symbols, p.m());
            json probs = json::object();
            for (std::size_t i = 0; i < dist.counts.size(); ++i) {
                if (dist.counts[i] == 0) continue;
                probs[OrdinalPattern::from_index(static_cast<PatternIndex>(i), p.m()).to_string()] =
                    dist.probs[i];
            }
            json j{{"h", permutation_entropy(dist)},
                   {"m", p.m()},
                   {"tau", p.tau()},
                   {"T", ts.size()},
                   {"n_windows", dist.n_windows},
                   {"probs", probs}};
            if (auto dir = common.out()) {
                std::vector<double> full(dist.probs);
                io::write_series_csv(*dir / "pattern_probs.csv", full, "prob");
                if (symbols.size() >= 2 && p.m() <= 7) {
                    io::write_transition_csv(*dir / "transitions.csv",
                                             estimate_transitions(symbols, p.m()));
                }
            }
            out << j.dump(2) << '\n';
        };
    });

    // bootstrap ----------------------------------------------------------------
    auto* boot = app.add_subcommand("bootstrap", "Bootstrap sd, bias, MSE and confidence interval");
    boot->add_option("--input", input.path, "Input series")->required();
    add_format(boot, input);
    add_embedding(boot, m, tau);
    boot->add_option("--B", replicates, "Bootstrap replicates")->capture_default_str();
    boot->add_option("--alpha", significance, "Significance level of the interval")
        ->capture_default_str();
    add_common(boot, common);
    boot->callback([&] {
        action = [&] {
            const EmbeddingParams p(m, tau);
            const TimeSeries ts = input.load(input.path);
            const BootstrapConfig cfg{replicates, significance, common.seed};
            const BootstrapResult r = bootstrap_pe(ts, p, cfg, common.par());
            json j = summary_json(r);
            j["m"] = p.m();
            j["tau"] = p.tau();
            j["seed"] = common.seed;
            if (auto dir = common.out()) {
                io::write_replicates_csv(*dir / "replicates.csv", r.replicates);
                io::write_bootstrap_csv(*dir / "bootstrap.csv", r);
            }
            out << j.dump(2) << '\n';
        };
    });

    // test-diff ------------------------------------------------------------------
    std::string path_b;
    std::size_t max_b = DifferenceTestOptions{}.max_replicates;
    auto* diff = app.add_subcommand("test-diff", "Bootstrap test for a difference in entropy");
    diff->add_option("--a", input.path, "First series")->required();
    diff->add_option("--b", path_b, "Second series")->required();
    add_format(diff, input);
    add_embedding(diff, m, tau);
    diff->add_option("--B", replicates, "Bootstrap replicates per series")->capture_default_str();
    diff->add_option("--alpha", significance, "Significance level")->capture_default_str();
    diff->add_option("--max-B", max_b, "Largest B accepted (B^2 differences are stored)")
        ->capture_default_str();
    add_common(diff, common);
    diff->callback([&] {
        action = [&] {
            const EmbeddingParams p(m, tau);
            const TimeSeries a = input.load(input.path);
            const TimeSeries b = input.load(path_b);
            const BootstrapConfig cfg{replicates, significance, common.seed};
            const DifferenceTestResult r =
                difference_test(a, b, p, cfg, common.par(), DifferenceTestOptions{max_b});
            json j = r;
            j["B"] = replicates;
            j["m"] = p.m();
            j["tau"] = p.tau();
            j["seed"] = common.seed;
            if (auto dir = common.out()) io::write_difference_csv(*dir / "difference.csv", r);
            out << j.dump(2) << '\n';
        };
    });

    // noise ----------------------------------------------------------------------
    double alpha_exp = 0.0;
    std::size_t length = 0;
    double k = 1.0;
    auto* noise = app.add_subcommand("noise", "Synthesize 1/f^alpha noise");
    noise->add_option("--alpha-exp", alpha_exp, "Spectral exponent alpha")->required();
    noise->add_option("--length", length, "Number of samples")->required();
    noise->add_option("--k", k, "Spectral scale constant")->capture_default_str();
    add_common(noise, common);
    noise->callback([&] {
        action = [&] {
            const TimeSeries ts = generate_power_law_noise(NoiseSpec{alpha_exp, length, common.seed, k});
            json j{{"alpha_exp", alpha_exp}, {"length", ts.size()}, {"seed", common.seed}, {"k", k}};
            if (ts.size() >= 16) j["spectral_slope"] = fit_spectral_slope(periodogram(ts.values()));
            if (auto dir = common.out()) io::write_series_csv(*dir / "noise.csv", ts.values());
            out << j.dump(2) << '\n';
        };
    });

    // Experiment grids ---------------------------------------------------------------
    std::vector<double> alpha_grid{-1.0, 0.0, 1.0, 2.0};
    std::vector<int> m_grid{3, 4, 5, 6};
    std::vector<std::size_t> length_grid{60, 600, 5000, 50000};
    std::size_t mc_reps = 200;
    bool full_grid = false;

    auto add_grid = [&](CLI::App* sub, bool lengths) {
        sub->add_option("--alpha-exp", alpha_grid, "Spectral exponents")->capture_default_str();
        sub->add_option("--m", m_grid, "Symbol lengths")->capture_default_str();
        if (lengths) sub->add_option("--length", length_grid, "Series lengths")->capture_default_str();
        sub->add_option("--tau", tau, "Time delay")->capture_default_str();
        sub->add_flag("--full-grid", full_grid,
                      "Full study: 11 lengths (or T=50000 for coverage) and 1000 Monte-Carlo reps");
        add_common(sub, common);
    };

    auto* mc = app.add_subcommand("mc", "Monte-Carlo distribution of the estimator");
    add_grid(mc, true);
    mc->add_option("--reps", mc_reps, "Realizations per grid point")->capture_default_str();
    mc->callback([&] {
        action = [&] {
            if (full_grid) {
                length_grid = kFullLengthGrid;
                mc_reps = 1000;
            }
            std::vector<experiments::McDistribution> all;
            for (double alpha : alpha_grid) {
                for (std::size_t len : length_grid) {
                    auto cell = experiments::mc_pe_grid(alpha, len, m_grid, tau, mc_reps,
                                                        common.seed, common.par());
                    for (auto& d : cell) all.push_back(std::move(d));
                }
            }
            json rows = json::array();
            for (const auto& d : all) {
                rows.push_back({{"T", d.length}, {"m", d.m}, {"alpha", d.alpha}, {"mean", d.mean},
                                {"sd", d.sd}, {"n", d.replicates.size()}});
            }
            if (auto dir = common.out()) io::write_mc_csv(*dir / "mc_dist.csv", all);
            out << json{{"mc", rows}}.dump(2) << '\n';
        };
    });

    std::size_t cov_length = 5000;
    std::size_t intervals = 50;
    auto* cov = app.add_subcommand("coverage", "Coverage of bootstrap confidence intervals");
    add_grid(cov, false);
    cov->add_option("--length", cov_length, "Series length")->capture_default_str();
    cov->add_option("--intervals", intervals, "Intervals per cell")->capture_default_str();
    cov->add_option("--alpha", significance, "Significance level")->capture_default_str();
    cov->add_option("--B", replicates, "Bootstrap replicates")->capture_default_str();
    cov->add_option("--mc-reps", mc_reps, "Realizations for the reference mean")->capture_default_str();
    cov->callback([&] {
        action = [&] {
            experiments::CoverageConfig cfg;
            cfg.ms = m_grid;
            cfg.alphas = alpha_grid;
            cfg.tau = tau;
            cfg.length = full_grid ? 50000 : cov_length;
            cfg.n_intervals = intervals;
            cfg.significance = significance;
            cfg.replicates = replicates;
            cfg.n_mc = full_grid ? 1000 : mc_reps;
            cfg.seed = common.seed;
            const auto table = experiments::coverage_study(cfg, common.par());
            json rows = json::array();
            for (const auto& r : table) {
                rows.push_back({{"m", r.m}, {"alpha", r.alpha}, {"h_ref", r.reference_h},
                                {"miss_left", r.miss_left}, {"miss_right", r.miss_right},
                                {"n_intervals", r.n_intervals}, {"mean_amplitude", r.mean_amplitude}});
            }
            if (auto dir = common.out()) io::write_coverage_csv(*dir / "coverage.csv", table);
            out << json{{"coverage", rows}}.dump(2) << '\n';
        };
    });

    auto* sdc = app.add_subcommand("sd-compare", "Bootstrap sd against Monte-Carlo sd");
    add_grid(sdc, true);
    sdc->add_option("--mc-reps", mc_reps, "Realizations per grid point")->capture_default_str();
    sdc->add_option("--B", replicates, "Bootstrap replicates")->capture_default_str();
    sdc->callback([&] {
        action = [&] {
            experiments::SdCompareConfig cfg;
            cfg.lengths = full_grid ? kFullLengthGrid : length_grid;
            cfg.ms = m_grid;
            cfg.alphas = alpha_grid;
            cfg.tau = tau;
            cfg.n_mc = full_grid ? 1000 : mc_reps;
            cfg.replicates = replicates;
            cfg.seed = common.seed;
            const auto table = experiments::sd_comparison(cfg, common.par());
            json rows = json::array();
            for (const auto& r : table) {
                rows.push_back({{"T", r.length}, {"m", r.m}, {"alpha", r.alpha},
                                {"sd_mc", r.sd_mc}, {"sd_boot", r.sd_boot}, {"mean_mc", r.mean_mc},
                                {"h_hat_boot", r.h_hat_boot}, {"bias_boot", r.bias_boot}});
            }
            if (auto dir = common.out()) io::write_sd_compare_csv(*dir / "sd_compare.csv", table);
            out << json{{"sd_compare", rows}}.dump(2) << '\n';
        };
    });

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUserError;
    }

    try {
        if (action) action();
        return kExitOk;
    } catch (const invalid_input& e) {
        err << "error: " << e.what() << '\n';
        return kExitUserError;
    } catch (const invariant_violation& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternalError;
    } catch (const io_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUserError;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUserError;
    } catch (const fit_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUserError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUserError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternalError;
    }
}

}  // namespace permboot::cli
