#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "urllc/feasibility.hpp"
#include "urllc/instance_model.hpp"
#include "urllc/random.hpp"

using urllc::BinaryInstance;
using urllc::RelaxedLp;
using urllc::Schedule;

namespace {

BinaryInstance make_instance(const Eigen::MatrixXi& activity, const Eigen::VectorXi& demand) {
  BinaryInstance inst;
  inst.activity = activity;
  inst.demand = demand;
  inst.utility = Eigen::VectorXd::Ones(activity.rows());
  return inst;
}

std::vector<int> all_users(const BinaryInstance& inst) {
  std::vector<int> users(static_cast<std::size_t>(inst.users()));
  for (int k = 0; k < inst.users(); ++k) users[static_cast<std::size_t>(k)] = k;
  return users;
}

BinaryInstance random_instance(std::mt19937_64& rng, int max_users, int max_blocks,
                               int max_demand) {
  const int k_count = 1 + static_cast<int>(urllc::uniform_int(rng, static_cast<std::uint64_t>(max_users)));
  const int r_count = 1 + static_cast<int>(urllc::uniform_int(rng, static_cast<std::uint64_t>(max_blocks)));
  Eigen::MatrixXi activity(k_count, r_count);
  for (int k = 0; k < k_count; ++k)
    for (int r = 0; r < r_count; ++r) activity(k, r) = urllc::uniform01(rng) < 0.55 ? 1 : 0;
  Eigen::VectorXi demand(k_count);
  for (int k = 0; k < k_count; ++k)
    demand(k) = 1 + static_cast<int>(urllc::uniform_int(rng, static_cast<std::uint64_t>(max_demand)));
  return make_instance(activity, demand);
}

// Exhaustive reference: every block goes to one of the chosen users or to
// nobody; feasible iff each chosen user collects its demand. Returns the
// minimum total cost over feasible integral schedules, or NaN if none exist.
double brute_force_min_cost(const BinaryInstance& inst, const std::vector<int>& users,
                            const RelaxedLp& relaxed) {
  const int m = static_cast<int>(users.size());
  const int r_count = inst.blocks();
  double best = std::numeric_limits<double>::quiet_NaN();
  std::vector<int> choice(static_cast<std::size_t>(r_count), -1);
  const std::int64_t total = static_cast<std::int64_t>(std::pow(m + 1, r_count));
  for (std::int64_t code = 0; code < total; ++code) {
    std::int64_t c = code;
    bool valid = true;
    for (int r = 0; r < r_count && valid; ++r) {
      choice[static_cast<std::size_t>(r)] = static_cast<int>(c % (m + 1)) - 1;
      c /= (m + 1);
      const int pick = choice[static_cast<std::size_t>(r)];
      if (pick >= 0 && inst.activity(users[static_cast<std::size_t>(pick)], r) == 0) valid = false;
    }
    if (!valid) continue;
    std::vector<int> got(static_cast<std::size_t>(m), 0);
    double cost = 0.0;
    for (int r = 0; r < r_count; ++r) {
      const int pick = choice[static_cast<std::size_t>(r)];
      if (pick < 0) continue;
      got[static_cast<std::size_t>(pick)]++;
      cost += relaxed.lp.cost(relaxed.column(r, pick));
    }
    bool feasible = true;
    for (int i = 0; i < m; ++i)
      if (got[static_cast<std::size_t>(i)] < inst.demand(users[static_cast<std::size_t>(i)]))
        feasible = false;
    if (feasible && (std::isnan(best) || cost < best)) best = cost;
  }
  return best;
}

}  // namespace

TEST_CASE("build_relaxed_lp has the documented shape") {
  Eigen::MatrixXi activity(1, 2);
  activity << 1, 0;
  Eigen::VectorXi demand(1);
  demand << 1;
  const BinaryInstance inst = make_instance(activity, demand);
  auto rng = urllc::trial_engine(1, 0, urllc::Stream::feasibility_costs);
  const RelaxedLp relaxed = urllc::build_relaxed_lp(inst, {0}, rng);

  CHECK(relaxed.lp.cols() == 2);
  CHECK(relaxed.lp.rows() == 3);
  CHECK(relaxed.lp.rhs(0) == -1.0);
  CHECK(relaxed.lp.rhs(1) == 1.0);
  CHECK(relaxed.lp.rhs(2) == 1.0);
  for (auto s : relaxed.lp.sense) CHECK(s == urllc::RowSense::le);
  CHECK(relaxed.lp.a(0, 0) == -1.0);
  CHECK(relaxed.lp.a(0, 1) == -1.0);
  CHECK(relaxed.lp.a(1, 0) == 1.0);
  CHECK(relaxed.lp.a(1, 1) == 0.0);
  CHECK(relaxed.lp.a(2, 1) == 1.0);
  CHECK(relaxed.lp.upper(0) == 1.0);
  CHECK(relaxed.lp.upper(1) == 0.0);
  CHECK((relaxed.lp.cost.array() >= 0.0).all());
  CHECK((relaxed.lp.cost.array() < 1.0).all());
}

TEST_CASE("column stacking is block-major") {
  Eigen::MatrixXi activity = Eigen::MatrixXi::Ones(3, 4);
  Eigen::VectorXi demand = Eigen::VectorXi::Ones(3);
  const BinaryInstance inst = make_instance(activity, demand);
  auto rng = urllc::trial_engine(2, 0, urllc::Stream::feasibility_costs);
  const RelaxedLp relaxed = urllc::build_relaxed_lp(inst, {0, 1, 2}, rng);
  CHECK(relaxed.lp.cols() == 12);
  for (int r = 0; r < 4; ++r)
    for (int i = 0; i < 3; ++i) {
      const int j = relaxed.column(r, i);
      CHECK(j == r * 3 + i);
      CHECK(relaxed.lp.a(i, j) == -1.0);
      CHECK(relaxed.lp.a(3 + r, j) == 1.0);
    }
}

TEST_CASE("subset builds restrict rows to the chosen users") {
  Eigen::MatrixXi activity = Eigen::MatrixXi::Ones(4, 3);
  Eigen::VectorXi demand(4);
  demand << 1, 2, 3, 1;
  const BinaryInstance inst = make_instance(activity, demand);
  auto rng = urllc::trial_engine(3, 0, urllc::Stream::feasibility_costs);
  const RelaxedLp relaxed = urllc::build_relaxed_lp(inst, {3, 1}, rng);
  CHECK(relaxed.lp.rows() == 2 + 3);
  CHECK(relaxed.lp.cols() == 6);
  CHECK(relaxed.lp.rhs(0) == -1.0);
  CHECK(relaxed.lp.rhs(1) == -2.0);

  CHECK_THROWS_AS(urllc::build_relaxed_lp(inst, {0, 0}, rng), std::invalid_argument);
  CHECK_THROWS_AS(urllc::build_relaxed_lp(inst, {4}, rng), std::invalid_argument);
}

TEST_CASE("constraint matrices pass the unimodularity partition test") {
  auto rng = urllc::trial_engine(4, 0, urllc::Stream::feasibility_costs);
  for (int t = 0; t < 20; ++t) {
    const BinaryInstance inst = random_instance(rng, 5, 8, 3);
    const RelaxedLp relaxed = urllc::build_relaxed_lp(inst, all_users(inst), rng);
    CHECK(urllc::tu_bipartition_check(relaxed));
  }
}

TEST_CASE("single user on a single active block") {
  Eigen::MatrixXi activity(1, 3);
  activity << 0, 1, 0;
  Eigen::VectorXi demand(1);
  demand << 1;
  const BinaryInstance inst = make_instance(activity, demand);
  auto rng = urllc::trial_engine(5, 0, urllc::Stream::feasibility_costs);
  const auto out = urllc::check_feasibility(inst, {0}, rng);
  REQUIRE(out.feasible);
  CHECK(out.schedule.assignment(0, 1) == 1);
  CHECK(out.schedule.assignment.sum() == 1);
  CHECK_FALSE(out.used_flow_fallback);
  CHECK(urllc::verify_schedule(inst, {0}, out.schedule));
}

TEST_CASE("two users cannot share one block") {
  Eigen::MatrixXi activity(2, 1);
  activity << 1, 1;
  Eigen::VectorXi demand(2);
  demand << 1, 1;
  const BinaryInstance inst = make_instance(activity, demand);
  auto rng = urllc::trial_engine(6, 0, urllc::Stream::feasibility_costs);
  CHECK_FALSE(urllc::check_feasibility(inst, {0, 1}, rng).feasible);
  CHECK_FALSE(urllc::flow_feasibility_oracle(inst, {0, 1}).feasible);
  CHECK(urllc::check_feasibility(inst, {0}, rng).feasible);
  CHECK(urllc::check_feasibility(inst, {1}, rng).feasible);
}

TEST_CASE("demand above the active block count is infeasible") {
  Eigen::MatrixXi activity(1, 4);
  activity << 1, 1, 0, 1;
  Eigen::VectorXi demand(1);
  demand << 4;
  const BinaryInstance inst = make_instance(activity, demand);
  auto rng = urllc::trial_engine(7, 0, urllc::Stream::feasibility_costs);
  CHECK_FALSE(urllc::check_feasibility(inst, {0}, rng).feasible);
  demand << 3;
  const BinaryInstance ok = make_instance(activity, demand);
  const auto out = urllc::check_feasibility(ok, {0}, rng);
  REQUIRE(out.feasible);
  CHECK(out.schedule.assignment.row(0).sum() == 3);
  CHECK(out.schedule.assignment(0, 2) == 0);
}

TEST_CASE("empty user set is trivially feasible") {
  Eigen::MatrixXi activity(2, 2);
  activity << 0, 0, 0, 0;
  Eigen::VectorXi demand(2);
  demand << 1, 1;
  const BinaryInstance inst = make_instance(activity, demand);
  auto rng = urllc::trial_engine(8, 0, urllc::Stream::feasibility_costs);
  CHECK(urllc::check_feasibility(inst, {}, rng).feasible);
  CHECK(urllc::flow_feasibility_oracle(inst, {}).feasible);
}

TEST_CASE("lp optimum equals the exhaustive integral optimum") {
  auto rng = urllc::trial_engine(9, 0, urllc::Stream::feasibility_costs);
  int feasible_seen = 0;
  int infeasible_seen = 0;
  for (int t = 0; t < 30; ++t) {
    const BinaryInstance inst = random_instance(rng, 4, 8, 3);
    const std::vector<int> users = all_users(inst);
    const RelaxedLp relaxed = urllc::build_relaxed_lp(inst, users, rng);
    const auto sol = urllc::solve_lp(relaxed.lp);
    const double best = brute_force_min_cost(inst, users, relaxed);
    if (std::isnan(best)) {
      CHECK(sol.status == urllc::LpStatus::infeasible);
      ++infeasible_seen;
    } else {
      REQUIRE(sol.status == urllc::LpStatus::optimal);
      CHECK(sol.objective == doctest::Approx(best).epsilon(1e-6));
      ++feasible_seen;
    }
  }
  CHECK(feasible_seen > 0);
  CHECK(infeasible_seen > 0);
}

TEST_CASE("lp route and flow oracle agree on random instances") {
  auto rng = urllc::trial_engine(10, 0, urllc::Stream::feasibility_costs);
  int feasible_seen = 0;
  for (int t = 0; t < 1000; ++t) {
    const BinaryInstance inst = random_instance(rng, 6, 10, 3);
    const std::vector<int> users = all_users(inst);
    const auto lp_route = urllc::check_feasibility(inst, users, rng);
    const auto flow_route = urllc::flow_feasibility_oracle(inst, users);
    CHECK(lp_route.feasible == flow_route.feasible);
    if (lp_route.feasible) {
      ++feasible_seen;
      CHECK(urllc::verify_schedule(inst, users, lp_route.schedule));
      CHECK(urllc::verify_schedule(inst, users, flow_route.schedule));
    }
  }
  CHECK(feasible_seen > 100);
}

TEST_CASE("random costs keep the rounding path off the fallback") {
  auto rng = urllc::trial_engine(11, 0, urllc::Stream::feasibility_costs);
  int fallbacks = 0;
  for (int t = 0; t < 500; ++t) {
    const BinaryInstance inst = random_instance(rng, 6, 10, 3);
    const auto out = urllc::check_feasibility(inst, all_users(inst), rng);
    if (out.used_flow_fallback) ++fallbacks;
    if (!out.used_flow_fallback) CHECK(out.retry_count == 0);
  }
  CHECK(fallbacks == 0);
}

TEST_CASE("flow oracle handles a star of demands") {
  Eigen::MatrixXi activity(3, 3);
  activity << 1, 1, 1, 1, 0, 0, 0, 0, 1;
  Eigen::VectorXi demand(3);
  demand << 1, 1, 1;
  const BinaryInstance inst = make_instance(activity, demand);
  const auto out = urllc::flow_feasibility_oracle(inst, {0, 1, 2});
  REQUIRE(out.feasible);
  CHECK(urllc::verify_schedule(inst, {0, 1, 2}, out.schedule));
  CHECK(out.schedule.assignment(1, 0) == 1);
  CHECK(out.schedule.assignment(2, 2) == 1);
  CHECK(out.schedule.assignment(0, 1) == 1);
}

TEST_CASE("flow oracle respects a cut") {
  // Users 0 and 1 both need 2 blocks from the same 3-block pool.
  Eigen::MatrixXi activity(2, 3);
  activity << 1, 1, 1, 1, 1, 1;
  Eigen::VectorXi demand(2);
  demand << 2, 2;
  const BinaryInstance inst = make_instance(activity, demand);
  CHECK_FALSE(urllc::flow_feasibility_oracle(inst, {0, 1}).feasible);
  CHECK(urllc::flow_feasibility_oracle(inst, {0}).feasible);
}

TEST_CASE("zero demand users are feasible without blocks") {
  Eigen::MatrixXi activity(2, 2);
  activity << 0, 0, 1, 1;
  Eigen::VectorXi demand(2);
  demand << 0, 1;
  const BinaryInstance inst = make_instance(activity, demand);
  auto rng = urllc::trial_engine(12, 0, urllc::Stream::feasibility_costs);
  const auto out = urllc::check_feasibility(inst, {0, 1}, rng);
  REQUIRE(out.feasible);
  CHECK(out.schedule.assignment.row(0).sum() == 0);
  CHECK(out.schedule.assignment.row(1).sum() == 1);
}

TEST_CASE("write_lp_format emits named rows and bounds") {
  Eigen::MatrixXi activity(1, 2);
  activity << 1, 0;
  Eigen::VectorXi demand(1);
  demand << 1;
  const BinaryInstance inst = make_instance(activity, demand);
  auto rng = urllc::trial_engine(13, 0, urllc::Stream::feasibility_costs);
  const RelaxedLp relaxed = urllc::build_relaxed_lp(inst, {0}, rng);
  const std::string text = urllc::write_lp_format(relaxed);
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find(" u0:") != std::string::npos);
  CHECK(text.find(" b0:") != std::string::npos);
  CHECK(text.find(" b1:") != std::string::npos);
  CHECK(text.find("x_k0_r0") != std::string::npos);
  CHECK(text.find("x_k0_r1") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
  CHECK(text.find("<= 0") != std::string::npos);
}
