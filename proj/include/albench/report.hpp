#pragma once

#include <string>
#include <vector>

#include "albench/harness.hpp"

namespace albench {

// One accuracy curve: mean and standard deviation per budget point.
struct CurveSeries {
  std::string label;
  std::vector<long> total_labels;
  std::vector<double> mean;
  std::vector<double> stddev;
};

// Header run_seed,round,total_labels,test_accuracy,scorer,mode,classifier;
// one row per (seed, round).
std::string results_csv(const ExperimentResult& result, const ExperimentConfig& config);

// Sidecar with the config echo, per-round trust snapshots, and batch
// composition.
std::string results_json(const ExperimentResult& result, const std::string& canonical_config);

std::string manifest_json(const std::string& config_hash, const std::string& timestamp,
                          const std::vector<std::string>& outputs);

// Groups results rows by (scorer, mode, classifier) and aggregates accuracy
// across seeds per round.
std::vector<CurveSeries> curves_from_results_csv(const std::vector<std::string>& csv_texts);

// Static SVG line chart: mean accuracy vs. total labels, one curve per
// series, +/- one standard deviation shaded.
std::string render_chart_svg(const std::vector<CurveSeries>& series);

// Final-round means, one "label mean std" row per series.
std::string summary_table(const std::vector<CurveSeries>& series);

}  // namespace albench
