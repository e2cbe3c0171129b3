#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "urllc/finite_blocklength.hpp"

namespace urllc {

/// Per-frame channel state: snr(k, r) is the linear SNR user k would see on
/// resource block r. K = rows, R = cols.
struct SnrGrid {
  Eigen::MatrixXd snr;

  int users() const { return static_cast<int>(snr.rows()); }
  int blocks() const { return static_cast<int>(snr.cols()); }

  void validate() const {
    if (snr.rows() < 1 || snr.cols() < 1)
      throw std::invalid_argument("SnrGrid: need at least one user and one block");
    if ((snr.array() < 0.0).any())
      throw std::invalid_argument("SnrGrid: SNR values must be >= 0");
  }
};

/// Thresholded instance: activity(k, r) = 1 iff block r is usable by user k,
/// demand(k) = blocks user k needs, utility(k) = weight earned by admitting k.
struct BinaryInstance {
  Eigen::MatrixXi activity;
  Eigen::VectorXi demand;
  Eigen::VectorXd utility;

  int users() const { return static_cast<int>(activity.rows()); }
  int blocks() const { return static_cast<int>(activity.cols()); }

  void validate() const {
    if (activity.rows() < 1 || activity.cols() < 1)
      throw std::invalid_argument("BinaryInstance: need at least one user and one block");
    if (demand.size() != activity.rows() || utility.size() != activity.rows())
      throw std::invalid_argument("BinaryInstance: demand/utility length must equal user count");
    if (((activity.array() != 0) && (activity.array() != 1)).any())
      throw std::invalid_argument("BinaryInstance: activity entries must be 0 or 1");
    if ((demand.array() < 0).any())
      throw std::invalid_argument("BinaryInstance: demands must be >= 0");
    if ((utility.array() < 0.0).any())
      throw std::invalid_argument("BinaryInstance: utilities must be >= 0");
  }
};

/// Block assignment: assignment(k, r) = 1 iff block r is given to user k.
/// Feasible schedules assign each block to at most one user.
struct Schedule {
  Eigen::MatrixXi assignment;

  int users() const { return static_cast<int>(assignment.rows()); }
  int blocks() const { return static_cast<int>(assignment.cols()); }

  static Schedule empty(int users, int blocks) {
    return Schedule{Eigen::MatrixXi::Zero(users, blocks)};
  }

  Eigen::VectorXi blocks_per_user() const { return assignment.rowwise().sum(); }
};

/// Outcome of an admission algorithm: admitted(k) = 1 iff user k is served.
struct AdmissionResult {
  Eigen::VectorXi admitted;
  Schedule schedule;
  double total_utility = 0.0;

  int admitted_count() const { return admitted.sum(); }
};

}  // namespace urllc
