#include "urllc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "urllc/errors.hpp"

namespace urllc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bounded-variable simplex on equality rows: A y = b, 0 <= y <= ub.
// Columns are structural variables first, then slacks/surpluses, then
// artificials; the initial basis (slack or artificial per row) is identity.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, Eigen::VectorXd xb, Eigen::VectorXd ub,
          std::vector<int> basis, int first_artificial, const SimplexOptions& opts)
      : t_(std::move(t)),
        xb_(std::move(xb)),
        ub_(std::move(ub)),
        basis_(std::move(basis)),
        first_artificial_(first_artificial),
        opts_(opts),
        at_upper_(static_cast<std::size_t>(t_.cols()), false),
        in_basis_(static_cast<std::size_t>(t_.cols()), false) {
    for (int b : basis_) in_basis_[static_cast<std::size_t>(b)] = true;
  }

  int rows() const { return static_cast<int>(t_.rows()); }
  int cols() const { return static_cast<int>(t_.cols()); }
  int iterations() const { return iterations_; }

  // Reduced costs of `cost` under the current basis.
  Eigen::RowVectorXd reduced_costs(const Eigen::RowVectorXd& cost) const {
    Eigen::RowVectorXd cb(rows());
    for (int i = 0; i < rows(); ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
    return cost - cb * t_;
  }

  // Runs pivots until `z` reports optimality. `allow` masks enterable
  // columns (artificials are banned in phase 2). `z` is updated in place.
  void optimize(Eigen::RowVectorXd& z, const std::vector<bool>& allow) {
    int degenerate_streak = 0;
    bool bland = false;
    for (;;) {
      if (++iterations_ > opts_.max_iterations)
        throw internal_error("simplex: iteration cap exceeded");

      const int enter = select_entering(z, allow, bland);
      if (enter < 0) return;

      const double dir = at_upper_[static_cast<std::size_t>(enter)] ? -1.0 : 1.0;
      const Eigen::VectorXd w = t_.col(enter);

      // Ratio test: the entering variable moves by t >= 0 along dir; each
      // basic value changes by -dir*w_i*t; the entering variable itself may
      // flip across its own box.
      double t_limit = ub_(enter);
      int leave_row = -1;
      bool leave_at_upper = false;
      for (int i = 0; i < rows(); ++i) {
        const double delta = dir * w(i);
        const int bi = basis_[static_cast<std::size_t>(i)];
        double limit = kInf;
        bool to_upper = false;
        if (delta > opts_.pivot_tol) {
          limit = std::max(0.0, xb_(i)) / delta;
        } else if (delta < -opts_.pivot_tol && std::isfinite(ub_(bi))) {
          limit = std::max(0.0, ub_(bi) - xb_(i)) / (-delta);
          to_upper = true;
        } else {
          continue;
        }
        const bool better =
            limit < t_limit - 1e-12 ||
            (leave_row >= 0 && limit < t_limit + 1e-12 &&
             (bland ? bi < basis_[static_cast<std::size_t>(leave_row)]
                    : std::abs(w(i)) > std::abs(w(leave_row))));
        if (better) {
          t_limit = limit;
          leave_row = i;
          leave_at_upper = to_upper;
        }
      }

      if (!std::isfinite(t_limit)) throw unbounded_signal{};

      degenerate_streak = (t_limit <= 1e-11) ? degenerate_streak + 1 : 0;
      bland = degenerate_streak > opts_.degenerate_before_bland;

      if (leave_row < 0) {
        // Bound flip: the entering column crosses its own box, basis fixed.
        xb_ -= (dir * t_limit) * w;
        at_upper_[static_cast<std::size_t>(enter)] =
            !at_upper_[static_cast<std::size_t>(enter)];
        continue;
      }

      const double enter_start =
          at_upper_[static_cast<std::size_t>(enter)] ? ub_(enter) : 0.0;
      xb_ -= (dir * t_limit) * w;
      const int leaving = basis_[static_cast<std::size_t>(leave_row)];
      in_basis_[static_cast<std::size_t>(leaving)] = false;
      at_upper_[static_cast<std::size_t>(leaving)] = leave_at_upper;
      basis_[static_cast<std::size_t>(leave_row)] = enter;
      in_basis_[static_cast<std::size_t>(enter)] = true;
      xb_(leave_row) = enter_start + dir * t_limit;
      pivot(leave_row, enter, z);
    }
  }

  // Pivots zero-valued basic artificials out where a structural column is
  // available; rows with none are redundant and their artificial is pinned.
  void retire_artificials(Eigen::RowVectorXd& z) {
    for (int i = 0; i < rows(); ++i) {
      if (basis_[static_cast<std::size_t>(i)] < first_artificial_) continue;
      int enter = -1;
      for (int j = 0; j < first_artificial_; ++j) {
        if (!in_basis_[static_cast<std::size_t>(j)] && std::abs(t_(i, j)) > opts_.pivot_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) continue;
      const int leaving = basis_[static_cast<std::size_t>(i)];
      in_basis_[static_cast<std::size_t>(leaving)] = false;
      at_upper_[static_cast<std::size_t>(leaving)] = false;
      basis_[static_cast<std::size_t>(i)] = enter;
      in_basis_[static_cast<std::size_t>(enter)] = true;
      xb_(i) = at_upper_[static_cast<std::size_t>(enter)] ? ub_(enter) : 0.0;
      pivot(i, enter, z);
    }
    for (int j = first_artificial_; j < cols(); ++j) ub_(j) = 0.0;
  }

  // Current value of every column.
  Eigen::VectorXd values() const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(cols());
    for (int j = 0; j < cols(); ++j)
      if (!in_basis_[static_cast<std::size_t>(j)] && at_upper_[static_cast<std::size_t>(j)])
        y(j) = ub_(j);
    for (int i = 0; i < rows(); ++i) y(basis_[static_cast<std::size_t>(i)]) = xb_(i);
    return y;
  }

  struct unbounded_signal {};

 private:
  int select_entering(const Eigen::RowVectorXd& z, const std::vector<bool>& allow,
                      bool bland) const {
    int best = -1;
    double best_violation = opts_.cost_tol;
    for (int j = 0; j < cols(); ++j) {
      if (in_basis_[static_cast<std::size_t>(j)] || !allow[static_cast<std::size_t>(j)])
        continue;
      if (ub_(j) <= 0.0) continue;
      const double violation =
          at_upper_[static_cast<std::size_t>(j)] ? z(j) : -z(j);
      if (violation > best_violation) {
        best = j;
        best_violation = violation;
        if (bland) break;
      }
    }
    return best;
  }

  void pivot(int row, int col, Eigen::RowVectorXd& z) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i < rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    const double zf = z(col);
    if (zf != 0.0) z -= zf * t_.row(row);
  }

  Eigen::MatrixXd t_;
  Eigen::VectorXd xb_;
  Eigen::VectorXd ub_;
  std::vector<int> basis_;
  int first_artificial_;
  SimplexOptions opts_;
  std::vector<bool> at_upper_;
  std::vector<bool> in_basis_;
  int iterations_ = 0;
};

}  // namespace

void LinearProgram::validate() const {
  const int m = rows();
  const int n = cols();
  if (rhs.size() != m || static_cast<int>(sense.size()) != m)
    throw std::invalid_argument("LinearProgram: row dimensions inconsistent");
  if (cost.size() != n || lower.size() != n || upper.size() != n)
    throw std::invalid_argument("LinearProgram: column dimensions inconsistent");
  for (int j = 0; j < n; ++j) {
    if (!(lower(j) <= upper(j)))
      throw std::invalid_argument("LinearProgram: lower bound exceeds upper bound");
    if (!std::isfinite(lower(j)))
      throw std::invalid_argument("LinearProgram: lower bounds must be finite");
  }
}

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
  lp.validate();
  const int m = lp.rows();
  const int n = lp.cols();

  // Shift out lower bounds and drop fixed columns; the tableau never sees
  // either, which keeps the hot loops on the free variables only.
  std::vector<int> free_cols;
  free_cols.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    if (lp.upper(j) - lp.lower(j) > 0.0) free_cols.push_back(j);
  const int nf = static_cast<int>(free_cols.size());

  Eigen::VectorXd b = lp.rhs - lp.a * lp.lower;
  Eigen::MatrixXd a(m, nf);
  Eigen::VectorXd ub_free(nf);
  for (int jj = 0; jj < nf; ++jj) {
    const int j = free_cols[static_cast<std::size_t>(jj)];
    a.col(jj) = lp.a.col(j);
    ub_free(jj) = lp.upper(j) - lp.lower(j);
  }

  // Normalize row signs so every right-hand side is non-negative, then
  // append one slack or surplus per inequality and artificials where the
  // identity start is missing.
  std::vector<RowSense> sense = lp.sense;
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0.0) {
      b(i) = -b(i);
      a.row(i) = -a.row(i);
      if (sense[static_cast<std::size_t>(i)] == RowSense::le)
        sense[static_cast<std::size_t>(i)] = RowSense::ge;
      else if (sense[static_cast<std::size_t>(i)] == RowSense::ge)
        sense[static_cast<std::size_t>(i)] = RowSense::le;
    }
  }
  int n_slack = 0, n_art = 0;
  for (RowSense s : sense) {
    if (s != RowSense::eq) ++n_slack;
    if (s != RowSense::le) ++n_art;
  }
  const int total = nf + n_slack + n_art;
  const int first_artificial = nf + n_slack;

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, total);
  t.leftCols(nf) = a;
  Eigen::VectorXd ub = Eigen::VectorXd::Constant(total, kInf);
  ub.head(nf) = ub_free;
  std::vector<int> basis(static_cast<std::size_t>(m), -1);
  int slack_at = nf, art_at = first_artificial;
  for (int i = 0; i < m; ++i) {
    switch (sense[static_cast<std::size_t>(i)]) {
      case RowSense::le:
        t(i, slack_at) = 1.0;
        basis[static_cast<std::size_t>(i)] = slack_at++;
        break;
      case RowSense::ge:
        t(i, slack_at) = -1.0;
        ++slack_at;
        t(i, art_at) = 1.0;
        basis[static_cast<std::size_t>(i)] = art_at++;
        break;
      case RowSense::eq:
        t(i, art_at) = 1.0;
        basis[static_cast<std::size_t>(i)] = art_at++;
        break;
    }
  }

  Tableau tab(std::move(t), b, std::move(ub), std::move(basis), first_artificial, opts);

  LpSolution sol;
  try {
    if (n_art > 0) {
      Eigen::RowVectorXd phase1_cost = Eigen::RowVectorXd::Zero(total);
      phase1_cost.tail(n_art).setOnes();
      Eigen::RowVectorXd z1 = tab.reduced_costs(phase1_cost);
      std::vector<bool> allow_all(static_cast<std::size_t>(total), true);
      tab.optimize(z1, allow_all);
      const Eigen::VectorXd y1 = tab.values();
      if (y1.tail(n_art).sum() > opts.feas_tol) {
        sol.status = LpStatus::infeasible;
        sol.iterations = tab.iterations();
        return sol;
      }
      Eigen::RowVectorXd dummy = Eigen::RowVectorXd::Zero(total);
      tab.retire_artificials(dummy);
    }

    Eigen::RowVectorXd phase2_cost = Eigen::RowVectorXd::Zero(total);
    for (int jj = 0; jj < nf; ++jj)
      phase2_cost(jj) = lp.cost(free_cols[static_cast<std::size_t>(jj)]);
    Eigen::RowVectorXd z2 = tab.reduced_costs(phase2_cost);
    std::vector<bool> allow(static_cast<std::size_t>(total), true);
    for (int j = first_artificial; j < total; ++j) allow[static_cast<std::size_t>(j)] = false;
    tab.optimize(z2, allow);
  } catch (const Tableau::unbounded_signal&) {
    sol.status = LpStatus::unbounded;
    sol.iterations = tab.iterations();
    return sol;
  }

  const Eigen::VectorXd y = tab.values();
  sol.x = lp.lower;
  for (int jj = 0; jj < nf; ++jj) sol.x(free_cols[static_cast<std::size_t>(jj)]) += y(jj);
  sol.objective = lp.cost.dot(sol.x);
  sol.status = LpStatus::optimal;
  sol.iterations = tab.iterations();
  return sol;
}

}  // namespace urllc
