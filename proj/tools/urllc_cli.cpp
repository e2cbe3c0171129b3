#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "urllc/admission.hpp"
#include "urllc/continuous.hpp"
#include "urllc/errors.hpp"
#include "urllc/experiments.hpp"
#include "urllc/feasibility.hpp"
#include "urllc/random.hpp"
#include "urllc/serialization.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;  // infeasible / empty where a decision was asked
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

std::vector<int> all_users(int count) {
  std::vector<int> users(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) users[static_cast<std::size_t>(k)] = k;
  return users;
}

// Instance produced from one scenario trial: grid, banded demands, activity
// thresholded at the per-demand minimum SNR.
urllc::InstanceFile generated_instance(const urllc::ScenarioConfig& cfg, std::uint64_t trial) {
  const urllc::Scenario sc = urllc::generate_scenario(cfg, trial);
  const Eigen::VectorXi demands = urllc::assign_demand_bands(sc.mean_snr_db);
  std::vector<urllc::Snr> tau;
  tau.reserve(static_cast<std::size_t>(cfg.users));
  for (int k = 0; k < cfg.users; ++k) {
    const std::optional<urllc::Snr> s = urllc::min_snr_for_d(demands(k), cfg.sla);
    tau.push_back(s ? *s : urllc::Snr(std::numeric_limits<double>::infinity()));
  }
  urllc::InstanceFile file;
  file.grid = sc.grid;
  file.binary = urllc::binarize(sc.grid, tau, demands, sc.utility);
  file.sla = cfg.sla;
  return file;
}

void print_admission(const std::string& name, const urllc::AdmissionResult& result) {
  std::cout << name << ": admitted " << result.admitted_count() << " user(s), total utility "
            << result.total_utility << "\n";
  std::cout << "admitted set:";
  for (Eigen::Index k = 0; k < result.admitted.size(); ++k)
    if (result.admitted(k) == 1) std::cout << ' ' << k;
  std::cout << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"URLLC admission control and resource-block scheduling simulator"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Generate an instance file from a scenario config");
  std::string gen_config, gen_out;
  std::uint64_t gen_trial = 0;
  std::optional<std::uint64_t> gen_seed;
  generate->add_option("--config", gen_config, "Scenario config JSON")->required();
  generate->add_option("--out", gen_out, "Instance JSON output path")->required();
  generate->add_option("--trial", gen_trial, "Trial index to draw (default 0)");
  generate->add_option("--seed", gen_seed, "Override the config seed");

  // feasible
  auto* feasible = app.add_subcommand("feasible", "Binary-model feasibility for all users");
  std::string feas_instance;
  std::uint64_t feas_seed = 0;
  bool feas_dump_lp = false;
  feasible->add_option("--instance", feas_instance, "Instance JSON")->required();
  feasible->add_option("--seed", feas_seed, "Seed for the random LP costs");
  feasible->add_flag("--dump-lp", feas_dump_lp, "Print the relaxed LP in text form");

  // admit
  auto* admit = app.add_subcommand("admit", "Binary-model admission control");
  std::string admit_instance, admit_algo = "greedy";
  std::uint64_t admit_seed = 0;
  int admit_cap = 16;
  admit->add_option("--instance", admit_instance, "Instance JSON")->required();
  admit->add_option("--algo", admit_algo, "greedy | exact | matching")
      ->check(CLI::IsMember({"greedy", "exact", "matching"}));
  admit->add_option("--seed", admit_seed, "Seed for greedy tie-breaks and block draws");
  admit->add_option("--exact-cap", admit_cap, "User cap for the exact optimizer");

  // ita
  auto* ita_cmd = app.add_subcommand("ita", "Continuous-model iterative thresholding");
  std::string ita_instance;
  std::uint64_t ita_seed = 0;
  int ita_d_max = 10;
  ita_cmd->add_option("--instance", ita_instance, "Instance JSON")->required();
  ita_cmd->add_option("--seed", ita_seed, "Seed for the level subproblems");
  ita_cmd->add_option("--d-max", ita_d_max, "Deepest threshold level");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Seeded Monte-Carlo comparison run");
  std::string exp_mode, exp_config, exp_out, exp_plot;
  std::optional<std::uint64_t> exp_seed;
  std::optional<int> exp_trials;
  bool exp_timing = false;
  int exp_threads = 0;
  experiment->add_option("--mode", exp_mode, "binary | continuous")
      ->required()
      ->check(CLI::IsMember({"binary", "continuous"}));
  experiment->add_option("--config", exp_config, "Scenario config JSON")->required();
  experiment->add_option("--out", exp_out, "CSV output path")->required();
  experiment->add_option("--seed", exp_seed, "Override the config seed");
  experiment->add_option("--trials", exp_trials, "Override the config trial count");
  experiment->add_flag("--timing", exp_timing,
                       "Record wall-clock runtimes (off keeps reruns byte-identical)");
  experiment->add_option("--plot", exp_plot, "Also write per-K mean series to this path");
  experiment->add_option("--threads", exp_threads, "Worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (generate->parsed()) {
    urllc::ScenarioConfig cfg = urllc::load_scenario(gen_config);
    if (gen_seed) cfg.seed = *gen_seed;
    urllc::save_instance(generated_instance(cfg, gen_trial), gen_out);
    std::cout << "wrote " << gen_out << "\n";
    return kExitOk;
  }

  if (feasible->parsed()) {
    const urllc::InstanceFile file = urllc::load_instance(feas_instance);
    const std::vector<int> users = all_users(file.binary.users());
    std::mt19937_64 rng = urllc::trial_engine(feas_seed, 0, urllc::Stream::feasibility_costs);
    if (feas_dump_lp) {
      std::mt19937_64 dump_rng = rng;
      std::cout << urllc::write_lp_format(urllc::build_relaxed_lp(file.binary, users, dump_rng));
    }
    const urllc::FeasibilityOutcome outcome =
        urllc::check_feasibility(file.binary, users, rng);
    std::cout << (outcome.feasible ? "feasible" : "infeasible") << " (retries: "
              << outcome.retry_count << ", flow fallback: "
              << (outcome.used_flow_fallback ? "yes" : "no") << ")\n";
    return outcome.feasible ? kExitOk : kExitNegative;
  }

  if (admit->parsed()) {
    const urllc::InstanceFile file = urllc::load_instance(admit_instance);
    urllc::AdmissionResult result;
    if (admit_algo == "greedy") {
      std::mt19937_64 rng = urllc::trial_engine(admit_seed, 0, urllc::Stream::greedy);
      result = urllc::greedy_admission(file.binary, rng);
    } else if (admit_algo == "exact") {
      result = urllc::exact_uum(file.binary, admit_cap);
    } else {
      result = urllc::matching_admission_d1(file.binary);
    }
    print_admission(admit_algo, result);
    return result.admitted_count() > 0 ? kExitOk : kExitNegative;
  }

  if (ita_cmd->parsed()) {
    const urllc::InstanceFile file = urllc::load_instance(ita_instance);
    std::mt19937_64 rng = urllc::trial_engine(ita_seed, 0, urllc::Stream::ita);
    const urllc::AdmissionResult result =
        urllc::ita(file.grid, file.binary.utility, file.sla, ita_d_max, rng);
    print_admission("ita", result);
    return result.admitted_count() > 0 ? kExitOk : kExitNegative;
  }

  // experiment
  urllc::ScenarioConfig cfg = urllc::load_scenario(exp_config);
  if (exp_seed) cfg.seed = *exp_seed;
  if (exp_trials) cfg.trials = *exp_trials;
  cfg.validate();
  urllc::ExperimentOptions options;
  options.timing = exp_timing;
  options.threads = exp_threads;
  const std::vector<urllc::ExperimentRow> rows =
      exp_mode == "binary" ? urllc::run_binary_experiment(cfg, options)
                           : urllc::run_continuous_experiment(cfg, options);
  urllc::write_csv(rows, exp_out);
  if (!exp_plot.empty()) urllc::emit_plot_data(rows, exp_plot);

  const urllc::SummaryStats stats = urllc::summarize(rows);
  for (const urllc::AlgorithmSummary& s : stats.per_algorithm) {
    std::cout << s.algorithm << ": mean admitted " << s.mean_admitted << " (sd "
              << s.stddev_admitted << "), mean utility " << s.mean_utility << " (sd "
              << s.stddev_utility << ") over " << s.row_count << " rows\n";
  }
  if (stats.ita_over_baseline_admitted)
    std::cout << "ita/baseline admitted ratio: " << *stats.ita_over_baseline_admitted << "\n";
  std::cout << "wrote " << exp_out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const urllc::internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
