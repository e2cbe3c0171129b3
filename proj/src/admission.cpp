#include "urllc/admission.hpp"

#include <algorithm>
#include <stdexcept>

#include "urllc/feasibility.hpp"
#include "urllc/random.hpp"

namespace urllc {

namespace {

// Decreasing-utility order with random tie-breaks: a pre-shuffle fixes the
// relative order of equal weights, the stable sort preserves it.
std::vector<int> utility_order(const BinaryInstance& instance, std::mt19937_64& rng) {
  std::vector<int> order = permutation(instance.users(), rng);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return instance.utility(a) > instance.utility(b);
  });
  return order;
}

AdmissionResult result_from(const BinaryInstance& instance, const Eigen::VectorXi& admitted,
                            Schedule schedule) {
  AdmissionResult res;
  res.admitted = admitted;
  res.schedule = std::move(schedule);
  res.total_utility = instance.utility.dot(admitted.cast<double>());
  return res;
}

}  // namespace

AdmissionResult greedy_admission(const BinaryInstance& instance, std::mt19937_64& rng,
                                 GreedyTrace* trace) {
  instance.validate();
  const std::vector<int> order = utility_order(instance, rng);
  if (trace) {
    trace->order = order;
    trace->admitted_in_order.assign(order.size(), false);
  }

  Eigen::VectorXi admitted = Eigen::VectorXi::Zero(instance.users());
  Schedule schedule = Schedule::empty(instance.users(), instance.blocks());
  std::vector<bool> block_free(static_cast<std::size_t>(instance.blocks()), true);

  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const int k = order[pos];
    std::vector<int> candidates;
    for (int r = 0; r < instance.blocks(); ++r)
      if (block_free[static_cast<std::size_t>(r)] && instance.activity(k, r) == 1)
        candidates.push_back(r);
    const int d = instance.demand(k);
    if (static_cast<int>(candidates.size()) < d) continue;

    for (int r : sample(candidates, static_cast<std::size_t>(d), rng)) {
      schedule.assignment(k, r) = 1;
      block_free[static_cast<std::size_t>(r)] = false;
    }
    admitted(k) = 1;
    if (trace) trace->admitted_in_order[pos] = true;
  }
  return result_from(instance, admitted, std::move(schedule));
}

namespace {

// Augmenting-path search for the matching case.
bool augment(const BinaryInstance& instance, int k, std::vector<bool>& visited,
             std::vector<int>& owner) {
  for (int r = 0; r < instance.blocks(); ++r) {
    if (instance.activity(k, r) != 1 || visited[static_cast<std::size_t>(r)]) continue;
    visited[static_cast<std::size_t>(r)] = true;
    if (owner[static_cast<std::size_t>(r)] < 0 ||
        augment(instance, owner[static_cast<std::size_t>(r)], visited, owner)) {
      owner[static_cast<std::size_t>(r)] = k;
      return true;
    }
  }
  return false;
}

}  // namespace

AdmissionResult matching_admission_d1(const BinaryInstance& instance) {
  instance.validate();
  if ((instance.demand.array() != 1).any())
    throw std::invalid_argument("matching_admission_d1: every demand must equal 1");

  std::vector<int> order(static_cast<std::size_t>(instance.users()));
  for (int k = 0; k < instance.users(); ++k) order[static_cast<std::size_t>(k)] = k;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return instance.utility(a) > instance.utility(b);
  });

  std::vector<int> owner(static_cast<std::size_t>(instance.blocks()), -1);
  Eigen::VectorXi admitted = Eigen::VectorXi::Zero(instance.users());
  for (int k : order) {
    std::vector<bool> visited(static_cast<std::size_t>(instance.blocks()), false);
    if (augment(instance, k, visited, owner)) admitted(k) = 1;
  }

  Schedule schedule = Schedule::empty(instance.users(), instance.blocks());
  for (int r = 0; r < instance.blocks(); ++r)
    if (owner[static_cast<std::size_t>(r)] >= 0)
      schedule.assignment(owner[static_cast<std::size_t>(r)], r) = 1;
  return result_from(instance, admitted, std::move(schedule));
}

namespace {

struct BranchState {
  const BinaryInstance* instance;
  std::vector<int> order;
  std::vector<double> suffix_weight;
  std::vector<int> chosen;
  std::vector<int> best_set;
  double best_value = -1.0;
};

void branch(BranchState& st, std::size_t depth, double value) {
  if (value + st.suffix_weight[depth] <= st.best_value) return;
  if (depth == st.order.size()) {
    st.best_value = value;
    st.best_set = st.chosen;
    return;
  }
  const int k = st.order[depth];
  std::vector<int> candidate = st.chosen;
  candidate.push_back(k);
  if (flow_feasibility_oracle(*st.instance, candidate).feasible) {
    st.chosen.push_back(k);
    branch(st, depth + 1, value + st.instance->utility(k));
    st.chosen.pop_back();
  }
  branch(st, depth + 1, value);
}

}  // namespace

AdmissionResult exact_uum(const BinaryInstance& instance, int user_cap) {
  instance.validate();
  if (instance.users() > user_cap)
    throw std::invalid_argument("exact_uum: instance exceeds the user cap");

  BranchState st;
  st.instance = &instance;
  st.order.resize(static_cast<std::size_t>(instance.users()));
  for (int k = 0; k < instance.users(); ++k) st.order[static_cast<std::size_t>(k)] = k;
  std::stable_sort(st.order.begin(), st.order.end(), [&](int a, int b) {
    return instance.utility(a) > instance.utility(b);
  });
  st.suffix_weight.assign(st.order.size() + 1, 0.0);
  for (std::size_t i = st.order.size(); i > 0; --i)
    st.suffix_weight[i - 1] = st.suffix_weight[i] + instance.utility(st.order[i - 1]);

  branch(st, 0, 0.0);

  Eigen::VectorXi admitted = Eigen::VectorXi::Zero(instance.users());
  for (int k : st.best_set) admitted(k) = 1;
  FeasibilityOutcome support = flow_feasibility_oracle(instance, st.best_set);
  Schedule schedule =
      support.feasible ? std::move(support.schedule)
                       : Schedule::empty(instance.users(), instance.blocks());
  return result_from(instance, admitted, std::move(schedule));
}

}  // namespace urllc
