#pragma once

#include <random>
#include <string>
#include <vector>

#include "urllc/simplex.hpp"
#include "urllc/types.hpp"

namespace urllc {

/// Relaxed feasibility LP for a user set M. Columns are stacked block-major:
/// column r*|M| + i carries x for block r and the i-th user of M, mirroring
/// the stacking that makes the constraint matrix totally unimodular. Demand
/// rows (one per user of M, written with -1 coefficients) come first, then
/// one capacity row per block; the activity pattern enters through the
/// variable upper bounds, so inactive pairs are pinned to zero.
struct RelaxedLp {
  LinearProgram lp;
  std::vector<int> users;
  int blocks = 0;

  int column(int block, int user_pos) const {
    return block * static_cast<int>(users.size()) + user_pos;
  }
};

struct FeasibilityOutcome {
  bool feasible = false;
  Schedule schedule;
  int retry_count = 0;
  bool used_flow_fallback = false;
};

/// Builds the relaxed LP with costs drawn i.i.d. uniform [0,1).
RelaxedLp build_relaxed_lp(const BinaryInstance& instance, const std::vector<int>& users,
                           std::mt19937_64& rng);

/// LP-based feasibility check: solve with random costs, round the solution
/// at 1e-6, verify it exactly, and redraw costs on verification failure (up
/// to 5 redraws) before falling back to the flow oracle. Both routes answer
/// exactly; any disagreement between them raises internal_error.
FeasibilityOutcome check_feasibility(const BinaryInstance& instance,
                                     const std::vector<int>& users, std::mt19937_64& rng);

/// Independent max-flow route to the same question: source->user (capacity
/// d_k), user->active block (capacity 1), block->sink (capacity 1); the user
/// set is feasible iff the max flow saturates every demand.
FeasibilityOutcome flow_feasibility_oracle(const BinaryInstance& instance,
                                           const std::vector<int>& users);

/// Sufficient condition for total unimodularity of the built constraint
/// matrix: entries in {-1,0,1}, and after negating the demand rows every
/// column has at most one +1 in the demand group and at most one +1 in the
/// capacity group, with no other nonzeros.
bool tu_bipartition_check(const RelaxedLp& relaxed);

/// Text dump in LP interchange format; rows named u<k> and b<r>.
std::string write_lp_format(const RelaxedLp& relaxed);

}  // namespace urllc
