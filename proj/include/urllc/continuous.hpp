#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "urllc/types.hpp"

namespace urllc {

/// SLA feasibility of one allocation in margin form:
///
///   sum_r (n*log2(1+g_r) + 0.5*log2 n) - Qinv(1-theta)*sqrt(n*sum_r V(g_r)) - L >= 0
///
/// Deliberately a separate formula from frame_error_probability (margin vs
/// tail evaluation); the two agree and tests cross-check them. Empty
/// allocations fail.
template <typename Derived>
bool continuous_sla_satisfied(const Eigen::DenseBase<Derived>& assigned_snrs,
                              const SlaParams& sla) {
  const auto& snrs = assigned_snrs.derived().array();
  if (snrs.size() == 0) return false;
  if ((snrs < 0.0).any())
    throw std::invalid_argument("continuous_sla_satisfied: SNR values must be >= 0");
  const double n = static_cast<double>(sla.channel_uses);
  const double rate_bits =
      n * (snrs + 1.0).log().sum() / std::numbers::ln2 +
      0.5 * std::log2(n) * static_cast<double>(snrs.size());
  const double total_dispersion = (snrs * (snrs + 2.0) / (snrs + 1.0).square()).sum();
  const double penalty =
      gaussian_q_inv(sla.max_error_probability()) * std::sqrt(n * total_dispersion);
  return rate_bits - penalty - static_cast<double>(sla.payload_bits) >= 0.0;
}

/// Decreasing-utility baseline: each user draws free blocks uniformly at
/// random one at a time until its SLA holds; a user that exhausts the free
/// blocks releases everything it drew and is rejected.
AdmissionResult baseline_greedy_continuous(const SnrGrid& grid, const Eigen::VectorXd& utilities,
                                           const SlaParams& sla, std::mt19937_64& rng);

/// Iterative thresholding: for d = 1..d_max, binarize the remaining users
/// and blocks at the minimum SNR where d blocks suffice, demand d each, and
/// schedule that binary subproblem (LP feasibility route when all remaining
/// users fit, otherwise matching at d = 1 or greedy). Users reaching d new
/// blocks are fixed, their blocks retired, and the threshold lowered.
AdmissionResult ita(const SnrGrid& grid, const Eigen::VectorXd& utilities, const SlaParams& sla,
                    int d_max, std::mt19937_64& rng);

}  // namespace urllc
