#pragma once

#include <random>
#include <vector>

#include "urllc/types.hpp"

namespace urllc {

/// Processing record of one greedy run: `order[p]` is the user handled at
/// position p (non-increasing utility), `admitted_in_order[p]` its outcome.
struct GreedyTrace {
  std::vector<int> order;
  std::vector<bool> admitted_in_order;
};

/// Decreasing-utility greedy admission: ties in utility are broken randomly,
/// each admitted user receives exactly d_k of its free active blocks chosen
/// uniformly at random, and a user short of free active blocks is rejected
/// without holding anything.
AdmissionResult greedy_admission(const BinaryInstance& instance, std::mt19937_64& rng,
                                 GreedyTrace* trace = nullptr);

/// Optimal admission for unit demands via maximum-weight bipartite matching:
/// users are scanned in decreasing utility and matched along augmenting
/// paths, so the admitted set maximizes total utility. Requires d_k == 1
/// for every user.
AdmissionResult matching_admission_d1(const BinaryInstance& instance);

/// Exact utility maximization by depth-first branch and bound over admission
/// vectors in decreasing-weight order, pruning with suffix weight bounds and
/// deciding schedulability per subset with the flow oracle. Deterministic
/// optimum; refuses instances with more than `user_cap` users.
AdmissionResult exact_uum(const BinaryInstance& instance, int user_cap = 16);

}  // namespace urllc
