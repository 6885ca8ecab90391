// Command-line front end: ingest, granger, rqa, simulate, build-field and
// replicate subcommands over one flat RunConfig. Precedence: built-in
// defaults < --config file < explicit flags.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csig/errors.hpp"
#include "csig/pipeline.hpp"

namespace {

struct Overrides {
    std::optional<int> window_length, window_step, tau, tau_prime, l_min, v_min;
    std::optional<int> smoothing_window, adf_max_lag;
    std::optional<double> alpha, target_rr, max_missing_frac;
    std::optional<std::uint64_t> seed, n_series, n_steps;
    std::optional<double> mu, sigma, x0, beta, baseline_std;
    std::optional<std::string> beta_mode, epochs, start_date, input_dir, out_dir;
    std::optional<bool> adf_check, write_matrices;
    std::vector<std::string> inputs;
};

template <typename T>
void take(const std::optional<T>& from, T& into) {
    if (from.has_value()) into = *from;
}

void apply_overrides(const Overrides& o, csig::RunConfig& cfg) {
    take(o.window_length, cfg.window_length);
    take(o.window_step, cfg.window_step);
    take(o.tau, cfg.tau);
    take(o.tau_prime, cfg.tau_prime);
    take(o.alpha, cfg.alpha);
    take(o.target_rr, cfg.target_rr);
    take(o.l_min, cfg.l_min);
    take(o.v_min, cfg.v_min);
    take(o.smoothing_window, cfg.smoothing_window);
    take(o.adf_max_lag, cfg.adf_max_lag);
    take(o.adf_check, cfg.adf_check);
    take(o.max_missing_frac, cfg.max_missing_frac);
    take(o.seed, cfg.seed);
    take(o.n_series, cfg.n_series);
    take(o.n_steps, cfg.n_steps);
    take(o.mu, cfg.mu);
    take(o.sigma, cfg.sigma);
    take(o.x0, cfg.x0);
    take(o.beta_mode, cfg.beta_mode);
    take(o.beta, cfg.beta);
    take(o.baseline_std, cfg.baseline_std);
    take(o.epochs, cfg.epochs);
    take(o.start_date, cfg.start_date);
    take(o.input_dir, cfg.input_dir);
    take(o.out_dir, cfg.out_dir);
    take(o.write_matrices, cfg.write_matrices);
    if (!o.inputs.empty()) cfg.inputs = o.inputs;
}

void add_common_options(CLI::App* cmd, Overrides& o, std::string& config_path) {
    cmd->add_option("--config", config_path, "key=value config file");
    cmd->add_option("--window", o.window_length, "window length in trading days");
    cmd->add_option("--step", o.window_step, "window step in trading days");
    cmd->add_option("--tau", o.tau, "cause lag order");
    cmd->add_option("--tau-prime", o.tau_prime, "effect own-lag order");
    cmd->add_option("--alpha", o.alpha, "F-test significance level");
    cmd->add_option("--target-rr", o.target_rr, "target recurrence rate, percent");
    cmd->add_option("--l-min", o.l_min, "minimal diagonal line length");
    cmd->add_option("--v-min", o.v_min, "minimal vertical line length");
    cmd->add_option("--smoothing", o.smoothing_window, "field smoothing width (odd)");
    cmd->add_option("--adf-max-lag", o.adf_max_lag, "lagged differences in the unit-root test");
    cmd->add_option("--adf-check", o.adf_check, "per-window stationarity warnings");
    cmd->add_option("--max-missing", o.max_missing_frac, "max missing fraction before rejection");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--n-series", o.n_series, "number of simulated paths");
    cmd->add_option("--n-steps", o.n_steps, "number of simulated daily steps");
    cmd->add_option("--mu", o.mu, "drift per day");
    cmd->add_option("--sigma", o.sigma, "volatility per sqrt(day)");
    cmd->add_option("--x0", o.x0, "initial price");
    cmd->add_option("--beta-mode", o.beta_mode, "none | fixed | uniform");
    cmd->add_option("--beta", o.beta, "coupling when beta-mode=fixed");
    cmd->add_option("--baseline-std", o.baseline_std, "synthetic field quiet-period std");
    cmd->add_option("--epochs", o.epochs, "synthetic epochs start:end:factor,...");
    cmd->add_option("--start-date", o.start_date, "simulation start date (ISO)");
    cmd->add_option("--input-dir", o.input_dir, "directory of per-ticker CSV files");
    cmd->add_option("--input", o.inputs, "input CSV file (repeatable)");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--write-matrices", o.write_matrices, "write per-window matrices");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"csig: windowed causality and recurrence signals for stock ensembles"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd = nullptr;
        Overrides overrides;
        std::string config_path;
    };
    std::vector<std::pair<std::string, Sub>> subs;
    for (const char* name : {"ingest", "granger", "rqa", "simulate", "build-field", "replicate"}) {
        Sub sub;
        sub.cmd = app.add_subcommand(name, "");
        subs.emplace_back(name, std::move(sub));
    }
    subs[0].second.cmd->description("parse and align the input data, report the ensemble");
    subs[1].second.cmd->description("windowed pairwise causality over the input ensemble");
    subs[2].second.cmd->description("windowed recurrence quantification over the input ensemble");
    subs[3].second.cmd->description("simulate GBM paths, optionally driven by a synthetic field");
    subs[4].second.cmd->description("build the shared driver from the input ensemble");
    subs[5].second.cmd->description("real vs. simulated side-by-side replication run");
    for (auto& [name, sub] : subs) add_common_options(sub.cmd, sub.overrides, sub.config_path);

    CLI11_PARSE(app, argc, argv);

    for (auto& [name, sub] : subs) {
        if (!sub.cmd->parsed()) continue;
        try {
            csig::RunConfig cfg;
            if (!sub.config_path.empty()) cfg = csig::parse_config_file(sub.config_path);
            apply_overrides(sub.overrides, cfg);

            if (name == "ingest") {
                const csig::IngestReport report =
                    !cfg.input_dir.empty() ? csig::ingest_csv_dir(cfg.input_dir,
                                                                  cfg.max_missing_frac)
                                           : csig::ingest_csv(cfg.inputs, cfg.max_missing_frac);
                std::cout << "members: " << report.prices.size() << '\n'
                          << "calendar: " << report.prices.calendar.front().to_iso() << " .. "
                          << report.prices.calendar.back().to_iso() << " ("
                          << report.prices.calendar.size() << " days)\n"
                          << "dropped dates: " << report.dropped_dates << '\n';
                for (const auto& [id, frac] : report.rejected) {
                    std::cout << "rejected: " << id << " (missing fraction "
                              << csig::format_real(frac) << ")\n";
                }
            } else if (name == "granger") {
                csig::run_granger(cfg);
            } else if (name == "rqa") {
                csig::run_rqa(cfg);
            } else if (name == "simulate") {
                csig::run_simulate(cfg);
            } else if (name == "build-field") {
                csig::run_build_field(cfg);
            } else if (name == "replicate") {
                csig::run_replicate(cfg);
            }
            return 0;
        } catch (const csig::Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return e.kind() == csig::ErrorKind::Input ? 1 : 2;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
    }
    return 1;
}
