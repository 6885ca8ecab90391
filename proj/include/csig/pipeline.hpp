#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "csig/io.hpp"
#include "csig/market_model.hpp"

namespace csig {

inline constexpr const char* kVersion = "0.1.0";

/// One flat bag of knobs for every subcommand; unspecified fields keep their
/// defaults. A config file is `key=value` lines; CLI flags override it.
struct RunConfig {
    int window_length = 252;
    int window_step = 63;
    int tau = 5;
    int tau_prime = 5;
    double alpha = 0.05;
    double target_rr = 5.0;
    int l_min = 2;
    int v_min = 2;
    int smoothing_window = 11;
    int adf_max_lag = 1;
    bool adf_check = true;
    double max_missing_frac = 0.05;

    std::uint64_t seed = 20200301;
    std::uint64_t n_series = 27;
    std::uint64_t n_steps = 5292;
    double mu = 0.0003;
    double sigma = 0.02;
    double x0 = 100.0;
    std::string beta_mode = "uniform";  ///< none | fixed | uniform
    double beta = 0.0;
    double baseline_std = 0.008;
    std::string epochs = "1890:2394:5,4788:5040:8";  ///< start:end:factor, comma separated
    std::string start_date = "2000-01-03";

    std::string input_dir;
    std::vector<std::string> inputs;
    std::string out_dir = "out";
    bool write_matrices = true;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config_file(const std::string& path);
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// Serializes the config so that parsing the text reproduces it exactly
/// (doubles carry 17 significant digits).
std::string config_to_text(const RunConfig& cfg);

std::vector<FieldEpoch> parse_epochs(const std::string& text);

/// Everything one run produced, already assembled for serialization.
struct ResultBundle {
    std::string command;
    RunConfig config;
    std::vector<std::pair<std::string, Series>> series;  ///< file stem -> series

    struct WindowMatrices {
        std::string label;
        std::vector<CausalityMatrix> causality;
        std::vector<std::string> corr_ids;
        std::vector<std::pair<WindowIndex, Matrix>> correlation;
    };
    std::vector<WindowMatrices> window_matrices;

    std::vector<std::pair<std::string, std::vector<RqaSummary>>> arqa_tables;
    std::vector<DiagnosticRow> diagnostics;
    std::vector<std::pair<std::string, std::string>> stats;  ///< echoed into run_meta.json
};

/// Writes the bundle under out_dir: one CSV per series, per-window matrices in
/// a subdirectory per label, diagnostics.csv, config_echo.cfg and
/// run_meta.json. Identical bundles serialize byte-identically.
void write_bundle(const ResultBundle& bundle, const std::string& out_dir);

ResultBundle run_granger(const RunConfig& cfg);
ResultBundle run_rqa(const RunConfig& cfg);
ResultBundle run_simulate(const RunConfig& cfg);
ResultBundle run_build_field(const RunConfig& cfg);
ResultBundle run_replicate(const RunConfig& cfg);

}  // namespace csig
