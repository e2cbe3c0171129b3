#pragma once

#include <string>

#include "urllc/instance_model.hpp"
#include "urllc/types.hpp"

namespace urllc {

/// On-disk instance: both channel views plus the SLA, so binary-model tools
/// (activity, demands, utilities) and continuous-model tools (gamma) read
/// the same file. All keys are required and unknown keys are rejected.
///
/// {
///   "K": 2, "R": 3,
///   "gamma":     [g00, g01, g02, g10, g11, g12],   row-major K*R
///   "delta":     [0 or 1, ...],                    row-major K*R
///   "demands":   [d0, d1],
///   "utilities": [w0, w1],
///   "sla": {"L_bits": 256, "theta": 0.99999, "n": 84}
/// }
struct InstanceFile {
  SnrGrid grid;
  BinaryInstance binary;
  SlaParams sla;

  void validate() const;
};

std::string instance_to_json(const InstanceFile& instance);
InstanceFile instance_from_json(const std::string& text);
void save_instance(const InstanceFile& instance, const std::string& path);
InstanceFile load_instance(const std::string& path);

/// Scenario config schema (unknown keys rejected; seed, trials, exact_cap,
/// d_max optional with defaults; exactly one of "K" / "K_sweep"):
///
/// {
///   "K": 20,                      or "K_sweep": [10, 20, 30],
///   "R": 10,
///   "sla": {"L_bits": 256, "theta": 0.99999, "n": 84},
///   "mean_snr_db": {"lo": 0, "hi": 20},   or {"fixed": 5},
///   "fading": "rayleigh",
///   "utility": "unit",            or {"uniform_max": 5}, or "log_mean_snr",
///   "seed": 1, "trials": 1000, "exact_cap": 16, "d_max": 10
/// }
std::string scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const std::string& text);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);
ScenarioConfig load_scenario(const std::string& path);

}  // namespace urllc
