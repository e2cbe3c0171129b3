#include "urllc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "urllc/admission.hpp"
#include "urllc/continuous.hpp"
#include "urllc/errors.hpp"
#include "urllc/feasibility.hpp"
#include "urllc/random.hpp"

namespace urllc {

namespace {

std::vector<int> admitted_users(const Eigen::VectorXi& admitted) {
  std::vector<int> users;
  for (Eigen::Index k = 0; k < admitted.size(); ++k)
    if (admitted(k) == 1) users.push_back(static_cast<int>(k));
  return users;
}

ExperimentRow make_row(int trial, const char* algorithm, const ScenarioConfig& cfg,
                       const AdmissionResult& result, std::int64_t runtime_us) {
  ExperimentRow row;
  row.trial = trial;
  row.algorithm = algorithm;
  row.users = cfg.users;
  row.blocks = cfg.blocks;
  row.admitted_count = result.admitted_count();
  row.total_utility = result.total_utility;
  row.runtime_us = runtime_us;
  row.seed = cfg.seed;
  return row;
}

// Runs fn(cell, trial) over every (cell, trial) pair on `threads` workers.
// Work items are claimed atomically; each writes only its own output slots,
// so the result is identical to a serial sweep.
void parallel_cells(int cells, int trials, int threads,
                    const std::function<void(int, int)>& fn) {
  const int total = cells * trials;
  int worker_count = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  worker_count = std::clamp(worker_count, 1, std::max(1, total));
  if (worker_count == 1) {
    for (int i = 0; i < total; ++i) fn(i / trials, i % trials);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(worker_count));
  for (int w = 0; w < worker_count; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= total) return;
        try {
          fn(i / trials, i % trials);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::int64_t elapsed_us(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() -
                                                               start)
      .count();
}

template <typename Fn>
AdmissionResult timed(bool timing, std::int64_t& runtime_us, Fn&& fn) {
  if (!timing) {
    runtime_us = 0;
    return fn();
  }
  const auto start = std::chrono::steady_clock::now();
  AdmissionResult result = fn();
  runtime_us = elapsed_us(start);
  return result;
}

std::vector<ScenarioConfig> sweep_cells(const ScenarioConfig& cfg) {
  std::vector<ScenarioConfig> cells;
  if (cfg.user_sweep.empty()) {
    cells.push_back(cfg);
  } else {
    for (int k : cfg.user_sweep) {
      ScenarioConfig cell = cfg;
      cell.users = k;
      cell.user_sweep.clear();
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace

std::vector<ExperimentRow> run_binary_experiment(const ScenarioConfig& cfg,
                                                 const ExperimentOptions& opts) {
  cfg.validate();
  const std::vector<ScenarioConfig> cells = sweep_cells(cfg);

  // Threshold per demand band: the minimum SNR at which d_k blocks meet the
  // SLA; a band the SLA cannot reach maps to an always-inactive threshold.
  const auto band_threshold = [&](int d) {
    const std::optional<Snr> s = min_snr_for_d(d, cfg.sla);
    return s ? *s : Snr(std::numeric_limits<double>::infinity());
  };
  std::map<int, Snr> thresholds;
  for (int d : {1, 2, 3}) thresholds.emplace(d, band_threshold(d));

  std::vector<std::vector<ExperimentRow>> slots(cells.size() *
                                                static_cast<std::size_t>(cfg.trials));
  parallel_cells(
      static_cast<int>(cells.size()), cfg.trials, opts.threads, [&](int cell, int trial) {
        const ScenarioConfig& cc = cells[static_cast<std::size_t>(cell)];
        std::vector<ExperimentRow>& out =
            slots[static_cast<std::size_t>(cell) * static_cast<std::size_t>(cfg.trials) +
                  static_cast<std::size_t>(trial)];
        if (cc.users == 0) {
          AdmissionResult nothing;
          nothing.admitted = Eigen::VectorXi::Zero(0);
          nothing.schedule = Schedule::empty(0, cc.blocks);
          if (cc.users <= cc.exact_cap) out.push_back(make_row(trial, "exact", cc, nothing, 0));
          out.push_back(make_row(trial, "greedy", cc, nothing, 0));
          return;
        }
        const Scenario sc = generate_scenario(cc, static_cast<std::uint64_t>(trial));
        const Eigen::VectorXi demands = assign_demand_bands(sc.mean_snr_db);
        std::vector<Snr> tau;
        tau.reserve(static_cast<std::size_t>(cc.users));
        for (int k = 0; k < cc.users; ++k) tau.push_back(thresholds.at(demands(k)));
        const BinaryInstance instance = binarize(sc.grid, tau, demands, sc.utility);

        if (cc.users <= cc.exact_cap) {
          std::int64_t us = 0;
          const AdmissionResult exact =
              timed(opts.timing, us, [&] { return exact_uum(instance, cc.exact_cap); });
          if (!verify_schedule(instance, admitted_users(exact.admitted), exact.schedule))
            throw internal_error("binary experiment: exact schedule failed verification");
          out.push_back(make_row(trial, "exact", cc, exact, us));
        }

        std::mt19937_64 greedy_rng =
            trial_engine(cc.seed, static_cast<std::uint64_t>(trial), Stream::greedy);
        std::int64_t us = 0;
        const AdmissionResult greedy =
            timed(opts.timing, us, [&] { return greedy_admission(instance, greedy_rng); });
        if (!verify_schedule(instance, admitted_users(greedy.admitted), greedy.schedule))
          throw internal_error("binary experiment: greedy schedule failed verification");
        out.push_back(make_row(trial, "greedy", cc, greedy, us));
      });

  std::vector<ExperimentRow> rows;
  for (std::vector<ExperimentRow>& slot : slots)
    for (ExperimentRow& row : slot) rows.push_back(std::move(row));
  return rows;
}

std::vector<ExperimentRow> run_continuous_experiment(const ScenarioConfig& cfg,
                                                     const ExperimentOptions& opts) {
  cfg.validate();
  const std::vector<ScenarioConfig> cells = sweep_cells(cfg);

  std::vector<std::vector<ExperimentRow>> slots(cells.size() *
                                                static_cast<std::size_t>(cfg.trials));
  parallel_cells(
      static_cast<int>(cells.size()), cfg.trials, opts.threads, [&](int cell, int trial) {
        const ScenarioConfig& cc = cells[static_cast<std::size_t>(cell)];
        std::vector<ExperimentRow>& out =
            slots[static_cast<std::size_t>(cell) * static_cast<std::size_t>(cfg.trials) +
                  static_cast<std::size_t>(trial)];
        if (cc.users == 0) {
          AdmissionResult nothing;
          nothing.admitted = Eigen::VectorXi::Zero(0);
          nothing.schedule = Schedule::empty(0, cc.blocks);
          out.push_back(make_row(trial, "baseline", cc, nothing, 0));
          out.push_back(make_row(trial, "ita", cc, nothing, 0));
          return;
        }
        const Scenario sc = generate_scenario(cc, static_cast<std::uint64_t>(trial));

        std::mt19937_64 baseline_rng =
            trial_engine(cc.seed, static_cast<std::uint64_t>(trial), Stream::baseline);
        std::int64_t us = 0;
        const AdmissionResult baseline = timed(opts.timing, us, [&] {
          return baseline_greedy_continuous(sc.grid, sc.utility, cc.sla, baseline_rng);
        });
        if (!verify_schedule(sc.grid, admitted_users(baseline.admitted), baseline.schedule,
                             cc.sla))
          throw internal_error("continuous experiment: baseline schedule failed verification");
        out.push_back(make_row(trial, "baseline", cc, baseline, us));

        std::mt19937_64 ita_rng =
            trial_engine(cc.seed, static_cast<std::uint64_t>(trial), Stream::ita);
        const AdmissionResult thresholded = timed(opts.timing, us, [&] {
          return ita(sc.grid, sc.utility, cc.sla, cc.d_max, ita_rng);
        });
        if (!verify_schedule(sc.grid, admitted_users(thresholded.admitted),
                             thresholded.schedule, cc.sla))
          throw internal_error("continuous experiment: ita schedule failed verification");
        out.push_back(make_row(trial, "ita", cc, thresholded, us));
      });

  std::vector<ExperimentRow> rows;
  for (std::vector<ExperimentRow>& slot : slots)
    for (ExperimentRow& row : slot) rows.push_back(std::move(row));
  return rows;
}

SummaryStats summarize(const std::vector<ExperimentRow>& rows) {
  struct Acc {
    int n = 0;
    double sum_a = 0, sum_a2 = 0, sum_u = 0, sum_u2 = 0;
  };
  std::map<std::string, Acc> by_algo;
  std::map<std::pair<int, int>, bool> distinct_trials;
  for (const ExperimentRow& row : rows) {
    Acc& acc = by_algo[row.algorithm];
    ++acc.n;
    acc.sum_a += row.admitted_count;
    acc.sum_a2 += static_cast<double>(row.admitted_count) * row.admitted_count;
    acc.sum_u += row.total_utility;
    acc.sum_u2 += row.total_utility * row.total_utility;
    distinct_trials[{row.users, row.trial}] = true;
  }

  SummaryStats stats;
  stats.trial_count = static_cast<int>(distinct_trials.size());
  for (const auto& [name, acc] : by_algo) {
    AlgorithmSummary s;
    s.algorithm = name;
    s.row_count = acc.n;
    s.mean_admitted = acc.sum_a / acc.n;
    s.mean_utility = acc.sum_u / acc.n;
    if (acc.n > 1) {
      s.stddev_admitted = std::sqrt(
          std::max(0.0, (acc.sum_a2 - acc.n * s.mean_admitted * s.mean_admitted) / (acc.n - 1)));
      s.stddev_utility = std::sqrt(
          std::max(0.0, (acc.sum_u2 - acc.n * s.mean_utility * s.mean_utility) / (acc.n - 1)));
    }
    stats.per_algorithm.push_back(s);
  }
  const auto find = [&](const char* name) -> const AlgorithmSummary* {
    for (const AlgorithmSummary& s : stats.per_algorithm)
      if (s.algorithm == name) return &s;
    return nullptr;
  };
  const AlgorithmSummary* it = find("ita");
  const AlgorithmSummary* base = find("baseline");
  if (it && base && base->mean_admitted > 0.0)
    stats.ita_over_baseline_admitted = it->mean_admitted / base->mean_admitted;
  return stats;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc())
    throw internal_error("csv: double formatting failed");
  return std::string(buf, ptr);
}

template <typename T>
T parse_number(const std::string& field, const char* what) {
  T value{};
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument(std::string("csv: bad ") + what + " value \"" + field + "\"");
  return value;
}

constexpr const char* kCsvHeader = "trial,algorithm,K,R,admitted_count,total_utility,runtime_us,seed";

}  // namespace

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const ExperimentRow& row : rows) {
    out += std::to_string(row.trial);
    out += ',';
    out += row.algorithm;
    out += ',';
    out += std::to_string(row.users);
    out += ',';
    out += std::to_string(row.blocks);
    out += ',';
    out += std::to_string(row.admitted_count);
    out += ',';
    out += format_double(row.total_utility);
    out += ',';
    out += std::to_string(row.runtime_us);
    out += ',';
    out += std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

std::vector<ExperimentRow> rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::invalid_argument("csv: missing or malformed header");

  std::vector<ExperimentRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 8) throw std::invalid_argument("csv: expected 8 fields per row");
    ExperimentRow row;
    row.trial = parse_number<int>(fields[0], "trial");
    row.algorithm = fields[1];
    row.users = parse_number<int>(fields[2], "K");
    row.blocks = parse_number<int>(fields[3], "R");
    row.admitted_count = parse_number<int>(fields[4], "admitted_count");
    row.total_utility = parse_number<double>(fields[5], "total_utility");
    row.runtime_us = parse_number<std::int64_t>(fields[6], "runtime_us");
    row.seed = parse_number<std::uint64_t>(fields[7], "seed");
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_csv(const std::vector<ExperimentRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("csv: cannot open " + path + " for writing");
  out << rows_to_csv(rows);
  if (!out) throw std::invalid_argument("csv: write failed for " + path);
}

std::vector<ExperimentRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("csv: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return rows_from_csv(buffer.str());
}

void emit_plot_data(const std::vector<ExperimentRow>& rows, const std::string& path) {
  struct Acc {
    int n = 0;
    double sum_admitted = 0, sum_utility = 0;
  };
  std::map<std::pair<int, std::string>, Acc> series;
  for (const ExperimentRow& row : rows) {
    Acc& acc = series[{row.users, row.algorithm}];
    ++acc.n;
    acc.sum_admitted += row.admitted_count;
    acc.sum_utility += row.total_utility;
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("plot data: cannot open " + path + " for writing");
  out << "K,algorithm,mean_admitted,mean_total_utility,rows\n";
  for (const auto& [key, acc] : series) {
    out << key.first << ',' << key.second << ',' << format_double(acc.sum_admitted / acc.n)
        << ',' << format_double(acc.sum_utility / acc.n) << ',' << acc.n << '\n';
  }
  if (!out) throw std::invalid_argument("plot data: write failed for " + path);
}

}  // namespace urllc
