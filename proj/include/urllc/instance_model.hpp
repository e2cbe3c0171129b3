#pragma once

#include <cstdint>
#include <vector>

#include "urllc/random.hpp"
#include "urllc/types.hpp"

namespace urllc {

enum class MeanSnrModel { uniform_db, fixed_db };
enum class UtilityModel { unit, uniform, log_mean_snr };
enum class FadingModel { rayleigh };

/// Parameters of one Monte-Carlo scenario family. Per-user mean SNRs are
/// drawn uniformly in dB over [mean_lo_db, mean_hi_db] (or held at
/// mean_fixed_db); per-block fading multiplies the linear mean by an
/// Exponential(1) draw. `user_sweep`, when non-empty, replaces `users` with
/// one experiment cell per entry.
struct ScenarioConfig {
  int users = 10;
  int blocks = 50;
  SlaParams sla;
  MeanSnrModel mean_model = MeanSnrModel::uniform_db;
  double mean_lo_db = 0.0;
  double mean_hi_db = 20.0;
  double mean_fixed_db = 10.0;
  FadingModel fading = FadingModel::rayleigh;
  UtilityModel utility_model = UtilityModel::unit;
  double utility_max = 5.0;
  std::uint64_t seed = 0;
  int trials = 1000;
  int exact_cap = 16;
  int d_max = 10;
  std::vector<int> user_sweep;

  void validate() const;
};

/// One generated trial: the channel grid plus the per-user draws behind it.
struct Scenario {
  SnrGrid grid;
  Eigen::VectorXd mean_snr_db;
  Eigen::VectorXd utility;
};

/// Draws a full scenario for (cfg.seed, trial_index). Identical inputs give
/// bit-identical output; distinct trials use independent streams.
Scenario generate_scenario(const ScenarioConfig& cfg, std::uint64_t trial_index);

/// Grid-only view of generate_scenario.
SnrGrid generate_snr_grid(const ScenarioConfig& cfg, std::uint64_t trial_index);

/// Demand bands: 1 above 12.5 dB mean, 3 below 4 dB, 2 in between.
Eigen::VectorXi assign_demand_bands(const Eigen::VectorXd& mean_snrs_db);

/// Thresholds the grid: activity = 1 iff snr >= threshold for that user.
BinaryInstance binarize(const SnrGrid& grid, const std::vector<Snr>& per_user_threshold,
                        const Eigen::VectorXi& per_user_demand,
                        const Eigen::VectorXd& utilities);

/// Exact integer check in the binary model: each block used at most once,
/// assignments stay on active pairs, every user of `users` holds at least
/// its demand.
bool verify_schedule(const BinaryInstance& instance, const std::vector<int>& users,
                     const Schedule& schedule);

/// Continuous-model check: each block used at most once and every user of
/// `users` meets the SLA under its assigned SNRs.
bool verify_schedule(const SnrGrid& grid, const std::vector<int>& users,
                     const Schedule& schedule, const SlaParams& sla);

}  // namespace urllc
