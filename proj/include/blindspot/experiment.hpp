#pragma once

// Experiment runner: configuration, sweeps over the normalized axes
// (lambda0 pi R^2, L/R, lambda pi R^2) and CSV output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace blindspot {

enum class Mode { SweepL, SweepLambda, Gamma, Design, Estimate };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct ExperimentConfig {
    Mode mode = Mode::Estimate;
    double mean_obstacles = 8.0;  // lambda0 pi R^2
    double R = 1.0;
    std::optional<std::vector<double>> L_over_R;      // mode default if unset
    std::optional<std::vector<double>> mean_anchors;  // lambda pi R^2
    std::vector<double> obstacle_counts{2.0, 4.0, 8.0};
    int kv = 3;
    double mu = 0.1;
    double tol = 1e-6;
    std::size_t replications = 50000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string out;  // empty: standard output

    std::vector<double> L_grid() const;
    std::vector<double> anchor_grid() const;
    /// Throws std::invalid_argument on empty or unsorted grids and bad values.
    void validate() const;
};

/// Sets one key from its textual value. Lists are comma separated, or
/// start:stop:step ranges.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Reads a flat key=value file; '#' starts a comment.
void load_config_file(ExperimentConfig& cfg, const std::string& path);

std::vector<double> parse_grid(const std::string& text);

struct SweepRow {
    double L_over_R = 0.0;
    double mean_anchors = 0.0;
    double b_mc = 0.0;
    double b_mc_stderr = 0.0;
    double b_ind = 0.0;
    double b_2plus = 0.0;
    double wall_seconds = 0.0;
};

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

/// Writes the CSV for cfg.mode. The body depends only on the configuration;
/// the generation time goes into a comment line when `timestamp` is set.
void run_experiment(const ExperimentConfig& cfg, std::ostream& os, bool timestamp = true);

/// Runs the experiment into cfg.out (or standard output).
void run_experiment(const ExperimentConfig& cfg);

}  // namespace blindspot
