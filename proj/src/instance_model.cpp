#include "urllc/instance_model.hpp"

#include <cmath>
#include <stdexcept>

namespace urllc {

void ScenarioConfig::validate() const {
  if (users < 0) throw std::invalid_argument("ScenarioConfig: users must be >= 0");
  if (blocks < 1) throw std::invalid_argument("ScenarioConfig: blocks must be >= 1");
  sla.validate();
  if (mean_model == MeanSnrModel::uniform_db && !(mean_lo_db <= mean_hi_db))
    throw std::invalid_argument("ScenarioConfig: mean SNR range must have lo <= hi");
  if (utility_model == UtilityModel::uniform && !(utility_max > 0.0))
    throw std::invalid_argument("ScenarioConfig: utility_max must be > 0");
  if (trials < 1) throw std::invalid_argument("ScenarioConfig: trials must be >= 1");
  if (exact_cap < 1) throw std::invalid_argument("ScenarioConfig: exact_cap must be >= 1");
  if (d_max < 1) throw std::invalid_argument("ScenarioConfig: d_max must be >= 1");
  for (int k : user_sweep)
    if (k < 0) throw std::invalid_argument("ScenarioConfig: sweep entries must be >= 0");
}

Scenario generate_scenario(const ScenarioConfig& cfg, std::uint64_t trial_index) {
  cfg.validate();
  std::mt19937_64 rng = trial_engine(cfg.seed, trial_index, Stream::scenario);
  const int k_count = cfg.users;
  const int r_count = cfg.blocks;

  Scenario sc;
  sc.mean_snr_db.resize(k_count);
  for (int k = 0; k < k_count; ++k)
    sc.mean_snr_db(k) = cfg.mean_model == MeanSnrModel::uniform_db
                            ? uniform(rng, cfg.mean_lo_db, cfg.mean_hi_db)
                            : cfg.mean_fixed_db;

  sc.grid.snr.resize(k_count, r_count);
  for (int k = 0; k < k_count; ++k) {
    const double mean_linear = Snr::from_db(sc.mean_snr_db(k)).value;
    for (int r = 0; r < r_count; ++r) sc.grid.snr(k, r) = mean_linear * exponential1(rng);
  }

  sc.utility.resize(k_count);
  for (int k = 0; k < k_count; ++k) {
    switch (cfg.utility_model) {
      case UtilityModel::unit:
        sc.utility(k) = 1.0;
        break;
      case UtilityModel::uniform:
        sc.utility(k) = uniform(rng, 0.0, cfg.utility_max);
        break;
      case UtilityModel::log_mean_snr:
        sc.utility(k) = std::log2(1.0 + Snr::from_db(sc.mean_snr_db(k)).value);
        break;
    }
  }
  return sc;
}

SnrGrid generate_snr_grid(const ScenarioConfig& cfg, std::uint64_t trial_index) {
  return generate_scenario(cfg, trial_index).grid;
}

Eigen::VectorXi assign_demand_bands(const Eigen::VectorXd& mean_snrs_db) {
  Eigen::VectorXi d(mean_snrs_db.size());
  for (Eigen::Index k = 0; k < mean_snrs_db.size(); ++k) {
    if (mean_snrs_db(k) > 12.5)
      d(k) = 1;
    else if (mean_snrs_db(k) < 4.0)
      d(k) = 3;
    else
      d(k) = 2;
  }
  return d;
}

BinaryInstance binarize(const SnrGrid& grid, const std::vector<Snr>& per_user_threshold,
                        const Eigen::VectorXi& per_user_demand,
                        const Eigen::VectorXd& utilities) {
  grid.validate();
  const int k_count = grid.users();
  if (static_cast<int>(per_user_threshold.size()) != k_count ||
      per_user_demand.size() != k_count || utilities.size() != k_count)
    throw std::invalid_argument("binarize: per-user vectors must have length K");

  BinaryInstance instance;
  instance.activity.resize(k_count, grid.blocks());
  for (int k = 0; k < k_count; ++k)
    for (int r = 0; r < grid.blocks(); ++r)
      instance.activity(k, r) =
          grid.snr(k, r) >= per_user_threshold[static_cast<std::size_t>(k)].value ? 1 : 0;
  instance.demand = per_user_demand;
  instance.utility = utilities;
  instance.validate();
  return instance;
}

namespace {

bool schedule_well_formed(const Eigen::MatrixXi& x, int k_count, int r_count) {
  if (x.rows() != k_count || x.cols() != r_count)
    throw std::invalid_argument("verify_schedule: dimension mismatch");
  if (((x.array() != 0) && (x.array() != 1)).any()) return false;
  return !(x.colwise().sum().array() > 1).any();
}

}  // namespace

bool verify_schedule(const BinaryInstance& instance, const std::vector<int>& users,
                     const Schedule& schedule) {
  instance.validate();
  const Eigen::MatrixXi& x = schedule.assignment;
  if (!schedule_well_formed(x, instance.users(), instance.blocks())) return false;
  if ((x.array() > instance.activity.array()).any()) return false;
  for (int k : users) {
    if (k < 0 || k >= instance.users())
      throw std::invalid_argument("verify_schedule: user index out of range");
    if (x.row(k).sum() < instance.demand(k)) return false;
  }
  return true;
}

bool verify_schedule(const SnrGrid& grid, const std::vector<int>& users,
                     const Schedule& schedule, const SlaParams& sla) {
  grid.validate();
  sla.validate();
  const Eigen::MatrixXi& x = schedule.assignment;
  if (!schedule_well_formed(x, grid.users(), grid.blocks())) return false;
  for (int k : users) {
    if (k < 0 || k >= grid.users())
      throw std::invalid_argument("verify_schedule: user index out of range");
    std::vector<double> snrs;
    for (int r = 0; r < grid.blocks(); ++r)
      if (x(k, r) == 1) snrs.push_back(grid.snr(k, r));
    const Eigen::Map<const Eigen::VectorXd> assigned(snrs.data(),
                                                     static_cast<Eigen::Index>(snrs.size()));
    if (frame_error_probability(assigned, sla) > sla.max_error_probability()) return false;
  }
  return true;
}

}  // namespace urllc
