#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "urllc/instance_model.hpp"

namespace urllc {

struct ExperimentRow {
  int trial = 0;
  std::string algorithm;
  int users = 0;
  int blocks = 0;
  int admitted_count = 0;
  double total_utility = 0.0;
  std::int64_t runtime_us = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

struct AlgorithmSummary {
  std::string algorithm;
  int row_count = 0;
  double mean_admitted = 0.0;
  double stddev_admitted = 0.0;
  double mean_utility = 0.0;
  double stddev_utility = 0.0;
};

struct SummaryStats {
  std::vector<AlgorithmSummary> per_algorithm;
  std::optional<double> ita_over_baseline_admitted;
  int trial_count = 0;
};

struct ExperimentOptions {
  /// Wall-clock timing is opt-in: with it off every runtime_us is 0, so a
  /// rerun of the same config and seed is byte-identical.
  bool timing = false;
  int threads = 0;
};

/// Binary-model comparison: per trial, draw a scenario, band the demands,
/// binarize at the per-demand minimum SNR thresholds, then run greedy and
/// (while K fits under exact_cap) the exact optimizer on the same instance.
/// With a K sweep, cells run back to back and rows carry their own K.
std::vector<ExperimentRow> run_binary_experiment(const ScenarioConfig& cfg,
                                                 const ExperimentOptions& opts = {});

/// Continuous-model comparison: per trial, iterative thresholding and the
/// random-placement baseline consume the same grid (paired design).
std::vector<ExperimentRow> run_continuous_experiment(const ScenarioConfig& cfg,
                                                     const ExperimentOptions& opts = {});

SummaryStats summarize(const std::vector<ExperimentRow>& rows);

/// CSV with exactly the row fields in declaration order, header included,
/// LF line endings, floats printed in shortest round-trip form.
std::string rows_to_csv(const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> rows_from_csv(const std::string& text);
void write_csv(const std::vector<ExperimentRow>& rows, const std::string& path);
std::vector<ExperimentRow> read_csv(const std::string& path);

/// Plot-ready series: one line per (K, algorithm) with mean admitted users
/// and mean utility.
void emit_plot_data(const std::vector<ExperimentRow>& rows, const std::string& path);

}  // namespace urllc
