#include "urllc/continuous.hpp"

#include <algorithm>
#include <optional>
#include <vector>

#include "urllc/admission.hpp"
#include "urllc/errors.hpp"
#include "urllc/feasibility.hpp"
#include "urllc/instance_model.hpp"
#include "urllc/random.hpp"

namespace urllc {

namespace {

std::vector<int> utility_order(const Eigen::VectorXd& utilities, std::mt19937_64& rng) {
  std::vector<int> order = permutation(static_cast<int>(utilities.size()), rng);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return utilities(a) > utilities(b); });
  return order;
}

void validate_continuous_inputs(const SnrGrid& grid, const Eigen::VectorXd& utilities,
                                const SlaParams& sla) {
  grid.validate();
  sla.validate();
  if (utilities.size() != grid.users())
    throw std::invalid_argument("utilities length must equal user count");
  if ((utilities.array() < 0.0).any())
    throw std::invalid_argument("utilities must be >= 0");
}

}  // namespace

AdmissionResult baseline_greedy_continuous(const SnrGrid& grid, const Eigen::VectorXd& utilities,
                                           const SlaParams& sla, std::mt19937_64& rng) {
  validate_continuous_inputs(grid, utilities, sla);
  const int r_count = grid.blocks();

  AdmissionResult res;
  res.admitted = Eigen::VectorXi::Zero(grid.users());
  res.schedule = Schedule::empty(grid.users(), r_count);
  std::vector<bool> block_free(static_cast<std::size_t>(r_count), true);

  for (int k : utility_order(utilities, rng)) {
    std::vector<int> free_blocks;
    for (int r = 0; r < r_count; ++r)
      if (block_free[static_cast<std::size_t>(r)]) free_blocks.push_back(r);
    shuffle(free_blocks, rng);

    std::vector<double> snrs;
    std::size_t taken = 0;
    bool satisfied = false;
    for (int r : free_blocks) {
      snrs.push_back(grid.snr(k, r));
      ++taken;
      const Eigen::Map<const Eigen::VectorXd> assigned(
          snrs.data(), static_cast<Eigen::Index>(snrs.size()));
      if (continuous_sla_satisfied(assigned, sla)) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) continue;

    res.admitted(k) = 1;
    res.total_utility += utilities(k);
    for (std::size_t i = 0; i < taken; ++i) {
      const int r = free_blocks[i];
      res.schedule.assignment(k, r) = 1;
      block_free[static_cast<std::size_t>(r)] = false;
    }
  }
  return res;
}

AdmissionResult ita(const SnrGrid& grid, const Eigen::VectorXd& utilities, const SlaParams& sla,
                    int d_max, std::mt19937_64& rng) {
  validate_continuous_inputs(grid, utilities, sla);
  if (d_max < 1) throw std::invalid_argument("ita: d_max must be >= 1");

  const int k_count = grid.users();
  AdmissionResult res;
  res.admitted = Eigen::VectorXi::Zero(k_count);
  res.schedule = Schedule::empty(k_count, grid.blocks());

  std::vector<int> remaining(static_cast<std::size_t>(k_count));
  for (int k = 0; k < k_count; ++k) remaining[static_cast<std::size_t>(k)] = k;
  std::vector<int> avail(static_cast<std::size_t>(grid.blocks()));
  for (int r = 0; r < grid.blocks(); ++r) avail[static_cast<std::size_t>(r)] = r;

  for (int d = 1; d <= d_max && !remaining.empty() && !avail.empty(); ++d) {
    const std::optional<Snr> threshold = min_snr_for_d(d, sla);
    if (!threshold) continue;

    // Binary subproblem on the remaining users and blocks: activity at the
    // level-d threshold, uniform demand d, original utilities.
    const int m = static_cast<int>(remaining.size());
    const int b = static_cast<int>(avail.size());
    SnrGrid sub_grid;
    sub_grid.snr.resize(m, b);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < b; ++j)
        sub_grid.snr(i, j) = grid.snr(remaining[static_cast<std::size_t>(i)],
                                      avail[static_cast<std::size_t>(j)]);
    Eigen::VectorXd sub_utility(m);
    for (int i = 0; i < m; ++i)
      sub_utility(i) = utilities(remaining[static_cast<std::size_t>(i)]);
    const BinaryInstance sub =
        binarize(sub_grid, std::vector<Snr>(static_cast<std::size_t>(m), *threshold),
                 Eigen::VectorXi::Constant(m, d), sub_utility);

    std::vector<int> all_sub_users(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) all_sub_users[static_cast<std::size_t>(i)] = i;

    Eigen::MatrixXi level_x;
    const FeasibilityOutcome feas = check_feasibility(sub, all_sub_users, rng);
    if (feas.feasible) {
      level_x = feas.schedule.assignment;
    } else if (d == 1) {
      level_x = matching_admission_d1(sub).schedule.assignment;
    } else {
      level_x = greedy_admission(sub, rng).schedule.assignment;
    }

    // Fold the level schedule back into full indices; users reaching d new
    // blocks are fixed, and every touched block retires.
    std::vector<int> next_remaining;
    for (int i = 0; i < m; ++i) {
      const int k = remaining[static_cast<std::size_t>(i)];
      if (level_x.row(i).sum() >= d) {
        res.admitted(k) = 1;
        res.total_utility += utilities(k);
        for (int j = 0; j < b; ++j) {
          if (level_x(i, j) != 1) continue;
          const int r = avail[static_cast<std::size_t>(j)];
          if (res.schedule.assignment.col(r).sum() != 0)
            throw internal_error("ita: block assigned twice across levels");
          res.schedule.assignment(k, r) = 1;
        }
      } else {
        // Sub-solvers are all-or-nothing, so a partial allocation here is a bug.
        if (level_x.row(i).sum() != 0)
          throw internal_error("ita: partial allocation below level demand");
        next_remaining.push_back(k);
      }
    }
    remaining = std::move(next_remaining);

    std::vector<int> next_avail;
    for (int j = 0; j < b; ++j) {
      const int r = avail[static_cast<std::size_t>(j)];
      if (level_x.col(j).sum() == 0) next_avail.push_back(r);
    }
    avail = std::move(next_avail);
  }
  return res;
}

}  // namespace urllc
