#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "urllc/admission.hpp"
#include "urllc/continuous.hpp"
#include "urllc/experiments.hpp"
#include "urllc/feasibility.hpp"
#include "urllc/finite_blocklength.hpp"
#include "urllc/instance_model.hpp"
#include "urllc/random.hpp"
#include "urllc/reduction.hpp"
#include "urllc/types.hpp"

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int number, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  std::ostringstream line;
  line << "ACCEPTANCE " << number << " (" << name << "): " << (pass ? "PASS" : "FAIL");
  if (!detail.empty()) line << " (" << detail << ")";
  line << " [" << std::fixed << std::setprecision(1) << seconds << " s]";
  std::cout << line.str() << std::endl;
}

std::vector<int> all_users(int count) {
  std::vector<int> users(static_cast<std::size_t>(count));
  std::iota(users.begin(), users.end(), 0);
  return users;
}

urllc::BinaryInstance random_binary(std::mt19937_64& rng, int max_users, int max_blocks,
                                    int max_demand, double active_lo, double active_hi,
                                    bool unit_weights) {
  const int users = 1 + static_cast<int>(urllc::uniform_int(rng, static_cast<std::uint64_t>(max_users)));
  const int blocks = 1 + static_cast<int>(urllc::uniform_int(rng, static_cast<std::uint64_t>(max_blocks)));
  const double active = urllc::uniform(rng, active_lo, active_hi);
  urllc::BinaryInstance instance;
  instance.activity.resize(users, blocks);
  for (int k = 0; k < users; ++k)
    for (int r = 0; r < blocks; ++r)
      instance.activity(k, r) = urllc::uniform01(rng) < active ? 1 : 0;
  instance.demand.resize(users);
  for (int k = 0; k < users; ++k)
    instance.demand(k) = 1 + static_cast<int>(urllc::uniform_int(rng, static_cast<std::uint64_t>(max_demand)));
  instance.utility.resize(users);
  for (int k = 0; k < users; ++k)
    instance.utility(k) = unit_weights ? 1.0 : urllc::uniform(rng, 0.0, 5.0);
  return instance;
}

std::vector<urllc::Snr> band_thresholds(const Eigen::VectorXi& demands,
                                        const urllc::SlaParams& sla) {
  std::vector<urllc::Snr> thresholds;
  thresholds.reserve(static_cast<std::size_t>(demands.size()));
  for (Eigen::Index k = 0; k < demands.size(); ++k) {
    const std::optional<urllc::Snr> snr = urllc::min_snr_for_d(demands(k), sla);
    thresholds.push_back(snr ? *snr : urllc::Snr(std::numeric_limits<double>::infinity()));
  }
  return thresholds;
}

}  // namespace

TEST_CASE("criterion 1: finite-blocklength anchor") {
  Stopwatch clock;
  const urllc::SlaParams sla;

  const std::optional<int> at_half_db = urllc::required_blocks(urllc::Snr::from_db(0.5), sla);
  const int measured = at_half_db ? *at_half_db : -1;
  const bool anchor_ok = measured == 3;

  bool non_increasing = true;
  int previous = std::numeric_limits<int>::max();
  for (int step = 0; step <= 400; ++step) {
    const double db = -10.0 + 0.1 * step;
    const std::optional<int> count = urllc::required_blocks(urllc::Snr::from_db(db), sla);
    const int value = count ? *count : std::numeric_limits<int>::max();
    if (value > previous) {
      non_increasing = false;
      break;
    }
    previous = value;
  }

  const std::optional<urllc::Snr> three_block = urllc::min_snr_for_d(3, sla);
  const double threshold_db = three_block ? three_block->db()
                                          : std::numeric_limits<double>::quiet_NaN();
  const bool threshold_ok = three_block && threshold_db >= -1.0 && threshold_db <= 2.0;

  std::ostringstream detail;
  detail << "required_blocks(0.5 dB) = " << measured << ", required 3; curve non-increasing: "
         << (non_increasing ? "yes" : "no") << "; 3-block threshold = " << std::setprecision(5)
         << threshold_db << " dB, within [-1, +2]: " << (threshold_ok ? "yes" : "no");
  report(1, "finite-blocklength anchor", anchor_ok && non_increasing && threshold_ok,
         detail.str(), clock.seconds());

  CHECK(anchor_ok);
  CHECK(non_increasing);
  CHECK(threshold_ok);
}

TEST_CASE("criterion 2: feasibility exactness") {
  Stopwatch clock;
  std::mt19937_64 gen = urllc::trial_engine(20260816, 0, urllc::Stream::scenario);

  int mismatches = 0;
  int bad_schedules = 0;
  int feasible_seen = 0;
  for (int t = 0; t < 1000; ++t) {
    const urllc::BinaryInstance instance = random_binary(gen, 6, 10, 3, 0.15, 0.95, true);
    const std::vector<int> users = all_users(instance.users());
    std::mt19937_64 costs =
        urllc::trial_engine(7, static_cast<std::uint64_t>(t), urllc::Stream::feasibility_costs);
    const urllc::FeasibilityOutcome checked = urllc::check_feasibility(instance, users, costs);
    const urllc::FeasibilityOutcome oracle = urllc::flow_feasibility_oracle(instance, users);
    if (checked.feasible != oracle.feasible) ++mismatches;
    if (checked.feasible) {
      ++feasible_seen;
      if (!urllc::verify_schedule(instance, users, checked.schedule)) ++bad_schedules;
    }
  }

  const bool pass = mismatches == 0 && bad_schedules == 0 && feasible_seen > 0;
  std::ostringstream detail;
  detail << "1000 instances, " << mismatches << " oracle mismatches, " << bad_schedules
         << " invalid schedules, " << feasible_seen << " feasible";
  report(2, "feasibility exactness", pass, detail.str(), clock.seconds());

  CHECK(mismatches == 0);
  CHECK(bad_schedules == 0);
  CHECK(feasible_seen > 0);
}

TEST_CASE("criterion 3: integral rounding rate") {
  Stopwatch clock;
  std::mt19937_64 gen = urllc::trial_engine(333, 0, urllc::Stream::scenario);

  const int target = 10000;
  int collected = 0;
  int fallbacks = 0;
  int attempts = 0;
  while (collected < target && attempts < 8 * target) {
    ++attempts;
    const urllc::BinaryInstance instance = random_binary(gen, 6, 10, 3, 0.3, 0.95, true);
    const std::vector<int> users = all_users(instance.users());
    if (!urllc::flow_feasibility_oracle(instance, users).feasible) continue;
    ++collected;
    std::mt19937_64 costs = urllc::trial_engine(999, static_cast<std::uint64_t>(attempts),
                                                urllc::Stream::feasibility_costs);
    const urllc::FeasibilityOutcome outcome = urllc::check_feasibility(instance, users, costs);
    if (!outcome.feasible || outcome.used_flow_fallback) ++fallbacks;
  }

  const bool pass = collected == target && fallbacks * 1000 <= collected;
  std::ostringstream detail;
  detail << collected << " feasible instances, " << fallbacks
         << " flow fallbacks (allowed " << target / 1000 << ")";
  report(3, "integral rounding rate", pass, detail.str(), clock.seconds());

  CHECK(collected == target);
  CHECK(fallbacks * 1000 <= collected);
}

TEST_CASE("criterion 4: greedy approximation bound") {
  Stopwatch clock;
  std::mt19937_64 gen = urllc::trial_engine(4444, 0, urllc::Stream::scenario);

  int violations = 0;
  int nontrivial = 0;
  for (int t = 0; t < 500; ++t) {
    const urllc::BinaryInstance instance = random_binary(gen, 10, 12, 3, 0.3, 0.9, true);
    std::mt19937_64 greedy_rng =
        urllc::trial_engine(4, static_cast<std::uint64_t>(t), urllc::Stream::greedy);
    const urllc::AdmissionResult greedy = urllc::greedy_admission(instance, greedy_rng);
    const urllc::AdmissionResult exact = urllc::exact_uum(instance);
    const int d_max = instance.demand.maxCoeff();
    if (greedy.total_utility + 1e-9 < exact.total_utility / static_cast<double>(d_max + 1))
      ++violations;
    if (exact.admitted_count() > 0) ++nontrivial;
  }

  urllc::ScenarioConfig cfg;
  cfg.users = 12;
  cfg.blocks = 50;
  cfg.seed = 777;
  cfg.utility_model = urllc::UtilityModel::unit;
  double ratio_sum = 0.0;
  int ratio_count = 0;
  for (int t = 0; t < 100; ++t) {
    const urllc::Scenario scenario = urllc::generate_scenario(cfg, static_cast<std::uint64_t>(t));
    const Eigen::VectorXi demands = urllc::assign_demand_bands(scenario.mean_snr_db);
    const urllc::BinaryInstance instance =
        urllc::binarize(scenario.grid, band_thresholds(demands, cfg.sla), demands, scenario.utility);
    std::mt19937_64 greedy_rng =
        urllc::trial_engine(cfg.seed, static_cast<std::uint64_t>(t), urllc::Stream::greedy);
    const urllc::AdmissionResult greedy = urllc::greedy_admission(instance, greedy_rng);
    const urllc::AdmissionResult exact = urllc::exact_uum(instance);
    if (exact.total_utility > 0.0) {
      ratio_sum += greedy.total_utility / exact.total_utility;
      ++ratio_count;
    } else {
      ratio_sum += 1.0;
      ++ratio_count;
    }
  }
  const double mean_ratio = ratio_sum / static_cast<double>(ratio_count);

  const bool pass = violations == 0 && nontrivial > 400 && mean_ratio >= 0.9;
  std::ostringstream detail;
  detail << "500 exhaustive instances, " << violations << " bound violations, " << nontrivial
         << " nontrivial; scenario mean greedy/exact ratio = " << std::setprecision(4)
         << mean_ratio << " (required >= 0.9)";
  report(4, "greedy approximation bound", pass, detail.str(), clock.seconds());

  CHECK(violations == 0);
  CHECK(nontrivial > 400);
  CHECK(mean_ratio >= 0.9);
}

TEST_CASE("criterion 5: unit-demand matching optimality") {
  Stopwatch clock;
  std::mt19937_64 gen = urllc::trial_engine(5555, 0, urllc::Stream::scenario);

  int mismatches = 0;
  int nontrivial = 0;
  for (int t = 0; t < 500; ++t) {
    urllc::BinaryInstance instance = random_binary(gen, 8, 10, 1, 0.2, 0.9, false);
    const urllc::AdmissionResult matched = urllc::matching_admission_d1(instance);
    const urllc::AdmissionResult exact = urllc::exact_uum(instance);
    if (matched.total_utility != exact.total_utility) ++mismatches;
    if (exact.admitted_count() > 0) ++nontrivial;
  }

  const bool pass = mismatches == 0 && nontrivial > 400;
  std::ostringstream detail;
  detail << "500 instances, " << mismatches << " utility mismatches (exact equality), "
         << nontrivial << " nontrivial";
  report(5, "unit-demand matching optimality", pass, detail.str(), clock.seconds());

  CHECK(mismatches == 0);
  CHECK(nontrivial > 400);
}

TEST_CASE("criterion 6: independent-set reduction equivalence") {
  Stopwatch clock;
  std::mt19937_64 gen = urllc::trial_engine(6666, 0, urllc::Stream::scenario);

  int iff_failures = 0;
  int optimum_mismatches = 0;
  for (int g = 0; g < 50; ++g) {
    urllc::UndirectedGraph graph;
    do {
      graph.vertices = 2 + static_cast<int>(urllc::uniform_int(gen, 7));
      graph.edges.clear();
      for (int u = 0; u < graph.vertices; ++u)
        for (int v = u + 1; v < graph.vertices; ++v)
          if (urllc::uniform01(gen) < 0.4) graph.edges.push_back({u, v});
    } while (graph.edges.empty());

    const urllc::BinaryInstance instance = urllc::graph_to_urllc(graph);
    for (std::uint32_t mask = 0; mask < (1u << graph.vertices); ++mask) {
      std::vector<int> subset;
      for (int v = 0; v < graph.vertices; ++v)
        if (mask & (1u << v)) subset.push_back(v);
      const bool independent = urllc::is_independent_set(graph, subset);
      const bool schedulable = urllc::flow_feasibility_oracle(instance, subset).feasible;
      if (independent != schedulable) ++iff_failures;
    }

    const int brute = urllc::independent_set_brute_force(graph);
    const urllc::AdmissionResult exact = urllc::exact_uum(instance);
    if (brute != exact.admitted_count()) ++optimum_mismatches;
  }

  const bool pass = iff_failures == 0 && optimum_mismatches == 0;
  std::ostringstream detail;
  detail << "50 graphs, " << iff_failures << " independence/schedulability disagreements, "
         << optimum_mismatches << " optimum mismatches";
  report(6, "independent-set reduction equivalence", pass, detail.str(), clock.seconds());

  CHECK(iff_failures == 0);
  CHECK(optimum_mismatches == 0);
}

TEST_CASE("criterion 7: thresholding beats the baseline under congestion") {
  Stopwatch clock;

  struct CellMean {
    double baseline_sum = 0.0;
    double ita_sum = 0.0;
    int baseline_rows = 0;
    int ita_rows = 0;
  };

  bool ordering_ok = true;
  double best_gain = -std::numeric_limits<double>::infinity();
  std::ostringstream detail;
  for (const int blocks : {10, 30}) {
    urllc::ScenarioConfig cfg;
    cfg.user_sweep = {10, 20, 30, 40, 50};
    cfg.blocks = blocks;
    cfg.trials = 1000;
    cfg.seed = 2026;
    cfg.utility_model = urllc::UtilityModel::unit;
    const std::vector<urllc::ExperimentRow> rows = urllc::run_continuous_experiment(cfg);

    std::map<int, CellMean> cells;
    for (const urllc::ExperimentRow& row : rows) {
      CellMean& cell = cells[row.users];
      if (row.algorithm == "baseline") {
        cell.baseline_sum += row.admitted_count;
        ++cell.baseline_rows;
      } else if (row.algorithm == "ita") {
        cell.ita_sum += row.admitted_count;
        ++cell.ita_rows;
      }
    }

    for (const auto& [users, cell] : cells) {
      if (users < blocks) continue;
      const double baseline_mean = cell.baseline_sum / cell.baseline_rows;
      const double ita_mean = cell.ita_sum / cell.ita_rows;
      const double gain = ita_mean - baseline_mean;
      best_gain = std::max(best_gain, gain);
      if (ita_mean < baseline_mean - 1e-12) ordering_ok = false;
      detail << "R=" << blocks << ",K=" << users << ": " << std::setprecision(4) << ita_mean
             << " vs " << baseline_mean << "; ";
    }
  }

  const bool pass = ordering_ok && best_gain > 0.0;
  detail << "max gain = " << std::setprecision(4) << best_gain;
  report(7, "thresholding beats the baseline under congestion", pass, detail.str(),
         clock.seconds());

  CHECK(ordering_ok);
  CHECK(best_gain > 0.0);
}

TEST_CASE("criterion 8: byte-identical reruns") {
  Stopwatch clock;

  urllc::ScenarioConfig binary_cfg;
  binary_cfg.users = 6;
  binary_cfg.blocks = 10;
  binary_cfg.trials = 50;
  binary_cfg.seed = 31;
  binary_cfg.utility_model = urllc::UtilityModel::uniform;
  const std::string binary_once = urllc::rows_to_csv(urllc::run_binary_experiment(binary_cfg));
  const std::string binary_again = urllc::rows_to_csv(urllc::run_binary_experiment(binary_cfg));

  urllc::ScenarioConfig continuous_cfg;
  continuous_cfg.user_sweep = {4, 8};
  continuous_cfg.blocks = 8;
  continuous_cfg.trials = 50;
  continuous_cfg.seed = 32;
  continuous_cfg.utility_model = urllc::UtilityModel::unit;
  const std::string continuous_once =
      urllc::rows_to_csv(urllc::run_continuous_experiment(continuous_cfg));
  const std::string continuous_again =
      urllc::rows_to_csv(urllc::run_continuous_experiment(continuous_cfg));

  const bool pass = binary_once == binary_again && continuous_once == continuous_again;
  std::ostringstream detail;
  detail << "binary rerun identical: " << (binary_once == binary_again ? "yes" : "no")
         << "; continuous rerun identical: "
         << (continuous_once == continuous_again ? "yes" : "no");
  report(8, "byte-identical reruns", pass, detail.str(), clock.seconds());

  CHECK(binary_once == binary_again);
  CHECK(continuous_once == continuous_again);
}
