#include "urllc/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "urllc/errors.hpp"
#include "urllc/instance_model.hpp"
#include "urllc/random.hpp"

namespace urllc {

namespace {

void validate_user_set(const BinaryInstance& instance, const std::vector<int>& users) {
  instance.validate();
  std::vector<bool> seen(static_cast<std::size_t>(instance.users()), false);
  for (int k : users) {
    if (k < 0 || k >= instance.users())
      throw std::invalid_argument("user set: index out of range");
    if (seen[static_cast<std::size_t>(k)])
      throw std::invalid_argument("user set: duplicate index");
    seen[static_cast<std::size_t>(k)] = true;
  }
}

// Dinic max flow on a unit-ish bipartite network; small and exact.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes) : head_(static_cast<std::size_t>(nodes)) {}

  void add_edge(int from, int to, int cap) {
    head_[static_cast<std::size_t>(from)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({to, cap});
    head_[static_cast<std::size_t>(to)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, 0});
  }

  int run(int source, int sink) {
    int total = 0;
    while (bfs(source, sink)) {
      iter_.assign(head_.size(), 0);
      while (int pushed = dfs(source, sink, std::numeric_limits<int>::max())) total += pushed;
    }
    return total;
  }

  // Flow currently on edge e (forward edges are even indices).
  int flow_on(int e) const { return edges_[static_cast<std::size_t>(2 * e + 1)].cap; }

 private:
  struct Edge {
    int to;
    int cap;
  };

  bool bfs(int source, int sink) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(source)] = 0;
    q.push(source);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int id : head_[static_cast<std::size_t>(v)]) {
        const Edge& e = edges_[static_cast<std::size_t>(id)];
        if (e.cap > 0 && level_[static_cast<std::size_t>(e.to)] < 0) {
          level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(v)] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(sink)] >= 0;
  }

  int dfs(int v, int sink, int limit) {
    if (v == sink) return limit;
    for (std::size_t& i = iter_[static_cast<std::size_t>(v)];
         i < head_[static_cast<std::size_t>(v)].size(); ++i) {
      const int id = head_[static_cast<std::size_t>(v)][i];
      Edge& e = edges_[static_cast<std::size_t>(id)];
      if (e.cap <= 0 || level_[static_cast<std::size_t>(e.to)] !=
                            level_[static_cast<std::size_t>(v)] + 1)
        continue;
      const int pushed = dfs(e.to, sink, std::min(limit, e.cap));
      if (pushed > 0) {
        e.cap -= pushed;
        edges_[static_cast<std::size_t>(id ^ 1)].cap += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> head_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

}  // namespace

RelaxedLp build_relaxed_lp(const BinaryInstance& instance, const std::vector<int>& users,
                           std::mt19937_64& rng) {
  validate_user_set(instance, users);
  const int m = static_cast<int>(users.size());
  const int r_count = instance.blocks();
  const int cols = r_count * m;
  const int rows = m + r_count;

  RelaxedLp relaxed;
  relaxed.users = users;
  relaxed.blocks = r_count;
  LinearProgram& lp = relaxed.lp;
  lp.a = Eigen::MatrixXd::Zero(rows, cols);
  lp.rhs.resize(rows);
  lp.sense.assign(static_cast<std::size_t>(rows), RowSense::le);
  lp.cost.resize(cols);
  lp.lower = Eigen::VectorXd::Zero(cols);
  lp.upper.resize(cols);

  for (int i = 0; i < m; ++i) lp.rhs(i) = -static_cast<double>(instance.demand(users[i]));
  for (int r = 0; r < r_count; ++r) lp.rhs(m + r) = 1.0;

  for (int r = 0; r < r_count; ++r) {
    for (int i = 0; i < m; ++i) {
      const int j = relaxed.column(r, i);
      lp.a(i, j) = -1.0;
      lp.a(m + r, j) = 1.0;
      lp.cost(j) = uniform01(rng);
      lp.upper(j) = static_cast<double>(instance.activity(users[i], r));
    }
  }
  return relaxed;
}

FeasibilityOutcome flow_feasibility_oracle(const BinaryInstance& instance,
                                           const std::vector<int>& users) {
  validate_user_set(instance, users);
  const int m = static_cast<int>(users.size());
  const int r_count = instance.blocks();
  const int source = 0;
  const int sink = 1 + m + r_count;
  MaxFlow net(sink + 1);

  int demand_total = 0;
  std::vector<std::pair<int, std::pair<int, int>>> pair_edges;  // edge id -> (user, block)
  for (int i = 0; i < m; ++i) {
    const int d = instance.demand(users[i]);
    demand_total += d;
    net.add_edge(source, 1 + i, d);
  }
  int edge_count = m;
  for (int i = 0; i < m; ++i) {
    for (int r = 0; r < r_count; ++r) {
      if (instance.activity(users[i], r) == 1) {
        net.add_edge(1 + i, 1 + m + r, 1);
        pair_edges.push_back({edge_count++, {users[i], r}});
      }
    }
  }
  for (int r = 0; r < r_count; ++r) {
    net.add_edge(1 + m + r, sink, 1);
    ++edge_count;
  }

  FeasibilityOutcome out;
  const int flow = net.run(source, sink);
  out.feasible = (flow == demand_total);
  if (out.feasible) {
    out.schedule = Schedule::empty(instance.users(), r_count);
    for (const auto& [e, kr] : pair_edges)
      if (net.flow_on(e) == 1) out.schedule.assignment(kr.first, kr.second) = 1;
  }
  return out;
}

FeasibilityOutcome check_feasibility(const BinaryInstance& instance,
                                     const std::vector<int>& users, std::mt19937_64& rng) {
  constexpr int kMaxRedraws = 5;
  constexpr double kRoundTol = 1e-6;

  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    const RelaxedLp relaxed = build_relaxed_lp(instance, users, rng);
    const LpSolution sol = solve_lp(relaxed.lp);
    if (sol.status == LpStatus::unbounded)
      throw internal_error("check_feasibility: relaxed LP cannot be unbounded");

    if (sol.status == LpStatus::infeasible) {
      if (flow_feasibility_oracle(instance, users).feasible)
        throw internal_error("check_feasibility: LP infeasible but flow oracle disagrees");
      FeasibilityOutcome out;
      out.feasible = false;
      out.retry_count = attempt;
      return out;
    }

    bool integral = true;
    Schedule schedule = Schedule::empty(instance.users(), instance.blocks());
    const int m = static_cast<int>(users.size());
    for (int j = 0; j < relaxed.lp.cols() && integral; ++j) {
      const double v = sol.x(j);
      const double rounded = std::round(v);
      if (std::abs(v - rounded) > kRoundTol) {
        integral = false;
        break;
      }
      if (rounded != 0.0) schedule.assignment(users[j % m], j / m) = static_cast<int>(rounded);
    }
    if (integral && verify_schedule(instance, users, schedule)) {
      FeasibilityOutcome out;
      out.feasible = true;
      out.schedule = std::move(schedule);
      out.retry_count = attempt;
      return out;
    }
  }

  FeasibilityOutcome out = flow_feasibility_oracle(instance, users);
  if (!out.feasible)
    throw internal_error("check_feasibility: LP solvable but flow oracle reports infeasible");
  out.retry_count = kMaxRedraws + 1;
  out.used_flow_fallback = true;
  return out;
}

bool tu_bipartition_check(const RelaxedLp& relaxed) {
  const Eigen::MatrixXd& a = relaxed.lp.a;
  const int m = static_cast<int>(relaxed.users.size());
  for (int j = 0; j < a.cols(); ++j) {
    int demand_ones = 0, capacity_ones = 0;
    for (int i = 0; i < a.rows(); ++i) {
      const double v = a(i, j);
      if (v == 0.0) continue;
      if (v != 1.0 && v != -1.0) return false;
      // Demand rows are written negated; normalize them to +1.
      if (i < m) {
        if (v != -1.0) return false;
        ++demand_ones;
      } else {
        if (v != 1.0) return false;
        ++capacity_ones;
      }
    }
    if (demand_ones > 1 || capacity_ones > 1) return false;
  }
  return true;
}

std::string write_lp_format(const RelaxedLp& relaxed) {
  const int m = static_cast<int>(relaxed.users.size());
  const auto var_name = [&](int j) {
    std::ostringstream os;
    os << "x_k" << relaxed.users[static_cast<std::size_t>(j % m)] << "_r" << j / m;
    return os.str();
  };

  std::ostringstream os;
  os << "Minimize\n obj:";
  for (int j = 0; j < relaxed.lp.cols(); ++j) {
    os << (j == 0 ? " " : " + ") << relaxed.lp.cost(j) << " " << var_name(j);
  }
  os << "\nSubject To\n";
  for (int i = 0; i < relaxed.lp.rows(); ++i) {
    if (i < m)
      os << " u" << relaxed.users[static_cast<std::size_t>(i)] << ":";
    else
      os << " b" << i - m << ":";
    bool first = true;
    for (int j = 0; j < relaxed.lp.cols(); ++j) {
      const double v = relaxed.lp.a(i, j);
      if (v == 0.0) continue;
      if (v > 0.0)
        os << (first ? " " : " + ");
      else
        os << " - ";
      first = false;
      os << var_name(j);
    }
    os << " <= " << relaxed.lp.rhs(i) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < relaxed.lp.cols(); ++j)
    os << " 0 <= " << var_name(j) << " <= " << relaxed.lp.upper(j) << "\n";
  os << "End\n";
  return os.str();
}

}  // namespace urllc
