#pragma once

#include <map>
#include <string>
#include <vector>

#include "cw/common.hpp"

namespace cw {

// Flat key = value configuration; '#' comments; unknown keys are rejected
// against the target experiment's parameter table.
struct ExperimentConfig {
    std::string experiment;                     // id, may carry ?query params
    std::map<std::string, std::string> params;  // merged: id query < config keys
    uint64_t seed = 0;
    int workers = 1;

    double real_param(const std::string& key, double fallback) const;
    long int_param(const std::string& key, long fallback) const;
    std::string str_param(const std::string& key, const std::string& fallback) const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

struct ExperimentReport {
    std::string experiment;                       // canonical id
    std::map<std::string, std::string> resolved;  // resolved parameters
    std::map<std::string, double> values;         // named numeric results
    std::vector<std::pair<long, double>> convergence;
    double truncation_loss = 0.0;
    uint64_t seed = 0;
    std::string engine_version;
    double wall_seconds = 0.0;  // human report only, never serialized to machine form

    // Machine form: line-delimited "key = value" records, deterministic bytes
    // for a fixed (config, seed) at any worker count.
    std::string machine_text() const;
    std::string human_text() const;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

// Two-column (axis, value) table with convergence columns, for plotting.
// All reports must come from the same experiment and differ only in the axis
// parameter.
std::string emit_plot_data(const std::vector<ExperimentReport>& reports, const std::string& axis);

// One expectation of a golden file: |actual - expected| <= tol (abs) or
// relative to |expected| (rel).
struct GoldenExpectation {
    std::string field;
    double expected = 0.0;
    bool relative = false;
    double tol = 0.0;
};

struct GoldenBlock {
    ExperimentConfig config;
    std::vector<GoldenExpectation> expectations;
};

std::vector<GoldenBlock> parse_golden_file(const std::string& path);

struct RegressOutcome {
    int checks = 0;
    int failures = 0;
    std::string log;
};

// Runs every golden block and compares field-by-field with per-field
// tolerances; one pass/fail line per expectation.
RegressOutcome run_regression(std::vector<GoldenBlock> blocks, int workers_override,
                              const std::string& out_dir);

std::vector<std::string> experiment_catalog();

inline constexpr const char* kEngineVersion = "cwengine 0.1.0";

}  // namespace cw
