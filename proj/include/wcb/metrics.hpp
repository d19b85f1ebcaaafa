#pragma once
// Experiment front end: threshold calibration, paired policy comparison with
// qualitative band checks, and the CSV/JSON output writers.

#include "wcb/sim.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wcb {

struct CalibrationResult {
    double threshold = 0.0; // pooled median - offset
    double median = 0.0;
    double iqr = 0.0;
    double offset = 0.0;
    long pool_size = 0;
};

// Pure pooling rule (unit-testable without running a simulation).
CalibrationResult calibrate_from_pool(std::vector<double> scores, double offset);

// Runs the configured experiment with retention decisions disabled, pools all
// satisfaction scores, and returns pooled median - offset (plus the IQR).
CalibrationResult calibrate_threshold(const SimulationConfig& cfg, double offset);

struct PolicyRatios {
    std::string baseline;
    std::optional<double> satisfaction_ratio;    // vrave / baseline, pooled means
    std::optional<double> remuneration_overhead; // vrave/baseline - 1
    double retained_delta = 0.0;                 // vrave - baseline, mean totals
    double completed_delta = 0.0;
};

struct BandResult {
    std::string name;
    bool pass = false;
    std::string observed; // human-readable observation, filled either way
};

struct CompareResult {
    SimulationConfig config;
    std::vector<ExperimentBundle> bundles; // vrave, fixed, training, increasing
    std::vector<PolicyRatios> ratios;
    std::vector<BandResult> bands;
};

// Runs all four policies with identical seeds and arrival streams (pairing
// follows from generation being policy-independent), computes pairwise ratios
// and evaluates the qualitative bands; failing bands are flagged with the
// observed values in the result and in summary.json.
CompareResult compare_policies(const SimulationConfig& cfg);

// Evaluate bands on existing bundles (order: vrave, fixed, training, increasing).
std::vector<BandResult> evaluate_bands(std::span<const ExperimentBundle> bundles);

// Output writers. Every file embeds the full effective configuration ('#'
// comment lines in CSVs, a config object in JSON). Rerunning with identical
// inputs produces byte-identical files.
void emit_experiment(const ExperimentBundle& bundle, const std::string& out_dir);
void emit_compare(const CompareResult& result, const std::string& out_dir);
void emit_calibration(const CalibrationResult& cal, const SimulationConfig& cfg,
                      const std::string& out_dir);

std::string summary_json(const CompareResult& result);
std::string summary_json(const ExperimentBundle& bundle);

} // namespace wcb
