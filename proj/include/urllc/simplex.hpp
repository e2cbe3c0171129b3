#pragma once

#include <vector>

#include <Eigen/Dense>

namespace urllc {

enum class RowSense : char { le = '<', ge = '>', eq = '=' };

/// minimize cost.x  subject to  a*x (sense) rhs,  lower <= x <= upper.
/// upper entries may be +infinity; lower == upper pins a variable.
struct LinearProgram {
  Eigen::MatrixXd a;
  Eigen::VectorXd rhs;
  std::vector<RowSense> sense;
  Eigen::VectorXd cost;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int rows() const { return static_cast<int>(a.rows()); }
  int cols() const { return static_cast<int>(a.cols()); }
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double cost_tol = 1e-9;
  double feas_tol = 1e-7;
  int max_iterations = 200000;
  int degenerate_before_bland = 50;
};

/// Two-phase dense simplex with box-bounded variables. Fixed columns
/// (lower == upper) are removed before the tableau is built.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

}  // namespace urllc
