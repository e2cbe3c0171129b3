#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

namespace urllc {

/// Per-user service requirement: deliver `payload_bits` within one frame
/// with probability at least `reliability`, using resource blocks of
/// `channel_uses` symbols each (12 subcarriers x 7 symbols = 84 by default).
struct SlaParams {
  int payload_bits = 256;
  double reliability = 0.99999;
  int channel_uses = 84;

  void validate() const {
    if (payload_bits < 1) throw std::invalid_argument("SlaParams: payload_bits must be >= 1");
    if (!(reliability > 0.0 && reliability < 1.0))
      throw std::invalid_argument("SlaParams: reliability must lie in (0,1)");
    if (channel_uses < 1) throw std::invalid_argument("SlaParams: channel_uses must be >= 1");
  }

  double max_error_probability() const { return 1.0 - reliability; }
};

/// Linear-scale signal-to-noise ratio. Always >= 0.
struct Snr {
  double value = 0.0;

  constexpr Snr() = default;
  explicit Snr(double linear) : value(linear) {
    if (!(linear >= 0.0)) throw std::invalid_argument("Snr: linear value must be >= 0");
  }

  static Snr from_db(double db) { return Snr(std::pow(10.0, db / 10.0)); }
  double db() const { return 10.0 * std::log10(value); }
};

/// Gaussian tail probability Pr(N(0,1) > x).
template <typename Scalar>
Scalar gaussian_q(Scalar x) {
  return Scalar(0.5) * std::erfc(x / std::sqrt(Scalar(2)));
}

/// Standard normal density.
template <typename Scalar>
Scalar gaussian_pdf(Scalar x) {
  const Scalar inv_sqrt_2pi = Scalar(0.3989422804014326779399461L);
  return inv_sqrt_2pi * std::exp(-Scalar(0.5) * x * x);
}

namespace detail {

// Acklam's rational approximation of the standard normal quantile,
// accurate to ~1.15e-9 before refinement.
inline double norm_quantile_initial(double p) {
  static const double a[] = {-39.69683028665376, 220.9460984245205,  -275.9285104469687,
                             138.3577518672690,  -30.66479806614716, 2.506628277459239};
  static const double b[] = {-54.47609879822406, 161.5858368580409, -155.6989798598866,
                             66.80131188771972,  -13.28068155288572};
  static const double c[] = {-0.007784894002430293, -0.3223964580411365, -2.400758277161838,
                             -2.549732539343734,    4.374664141464968,   2.938163982698783};
  static const double d[] = {0.007784695709041462, 0.3224671290700398, 2.445134137142996,
                             3.754408661907416};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

/// Inverse of gaussian_q on (0,1): gaussian_q(gaussian_q_inv(p)) == p.
inline double gaussian_q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("gaussian_q_inv: p must lie in (0,1)");
  // Q(x) = p  <=>  Phi(x) = 1 - p, so x = -Phi^{-1}(p).
  double x = -detail::norm_quantile_initial(p);
  // Newton refinement on Q(x) - p; Q' = -pdf.
  for (int it = 0; it < 3; ++it) {
    const double pdf = gaussian_pdf(x);
    if (pdf <= 0.0 || !std::isfinite(pdf)) break;
    const double step = (gaussian_q(x) - p) / pdf;
    if (!std::isfinite(step)) break;
    x += step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

/// AWGN channel dispersion V(g) = 1 - 1/(1+g)^2, computed as g(g+2)/(1+g)^2
/// to stay exact near zero. Lies in [0,1) for g >= 0.
template <typename Scalar>
Scalar dispersion(Scalar gamma) {
  const Scalar onep = Scalar(1) + gamma;
  return gamma * (gamma + Scalar(2)) / (onep * onep);
}

/// Frame error probability of one user under the normal approximation,
/// given the linear SNRs of the blocks assigned to it:
///
///   Q( (n*sum log2(1+g_r) - L + 0.5*log2(n)*m) / sqrt(n*sum V(g_r)) )
///
/// with m the number of assigned blocks. An empty allocation, or one whose
/// blocks all have zero SNR, is defined to fail with probability 1 (the
/// quotient is indeterminate there and no channel uses carry information).
template <typename Derived>
double frame_error_probability(const Eigen::DenseBase<Derived>& assigned_snrs,
                               const SlaParams& sla) {
  const auto& snrs = assigned_snrs.derived().array();
  if (snrs.size() == 0) return 1.0;
  if ((snrs < 0.0).any())
    throw std::invalid_argument("frame_error_probability: SNR values must be >= 0");

  const double n = static_cast<double>(sla.channel_uses);
  const double blocks = static_cast<double>(snrs.size());
  const double rate_bits = n * (snrs + 1.0).log().sum() / std::numbers::ln2;
  const double numerator =
      rate_bits - static_cast<double>(sla.payload_bits) + 0.5 * std::log2(n) * blocks;
  const double total_dispersion = (snrs * (snrs + 2.0) / (snrs + 1.0).square()).sum();
  const double variance = n * total_dispersion;
  if (variance <= 0.0) return 1.0;
  return gaussian_q(numerator / std::sqrt(variance));
}

/// frame_error_probability for `blocks` copies of the same SNR.
inline double frame_error_probability(Snr snr, int blocks, const SlaParams& sla) {
  if (blocks <= 0) return 1.0;
  const double g = snr.value;
  if (g <= 0.0) return 1.0;
  const double n = static_cast<double>(sla.channel_uses);
  const double d = static_cast<double>(blocks);
  const double numerator = n * d * std::log2(1.0 + g) -
                           static_cast<double>(sla.payload_bits) + 0.5 * std::log2(n) * d;
  const double variance = n * d * dispersion(g);
  return gaussian_q(numerator / std::sqrt(variance));
}

/// Smallest block count d <= d_cap for which d equal-SNR blocks meet the SLA,
/// or nullopt when no count up to d_cap does.
inline std::optional<int> required_blocks(Snr snr, const SlaParams& sla, int d_cap = 50) {
  if (d_cap < 1) throw std::invalid_argument("required_blocks: d_cap must be >= 1");
  const double eps = sla.max_error_probability();
  for (int d = 1; d <= d_cap; ++d) {
    if (frame_error_probability(snr, d, sla) <= eps) return d;
  }
  return std::nullopt;
}

/// Bisection window for min_snr_for_d, in dB.
struct SnrSearchWindow {
  double floor_db = -20.0;
  double ceil_db = 40.0;
  double tol_db = 1e-6;
};

/// Minimum SNR s(d) such that d blocks at SNR s(d) satisfy the SLA, located
/// by bisection in dB. Clamped at the window floor when even the floor
/// satisfies; nullopt when the ceiling does not.
inline std::optional<Snr> min_snr_for_d(int d, const SlaParams& sla,
                                        const SnrSearchWindow& window = {}) {
  if (d < 1) throw std::invalid_argument("min_snr_for_d: d must be >= 1");
  const double eps = sla.max_error_probability();
  const auto satisfied = [&](double db) {
    return frame_error_probability(Snr::from_db(db), d, sla) <= eps;
  };
  if (!satisfied(window.ceil_db)) return std::nullopt;
  if (satisfied(window.floor_db)) return Snr::from_db(window.floor_db);
  double lo = window.floor_db;  // not satisfied
  double hi = window.ceil_db;   // satisfied
  while (hi - lo > window.tol_db) {
    const double mid = 0.5 * (lo + hi);
    (satisfied(mid) ? hi : lo) = mid;
  }
  return Snr::from_db(hi);
}

}  // namespace urllc
