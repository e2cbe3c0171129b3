#include "urllc/serialization.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace urllc {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::set<std::string>& required,
                  const std::set<std::string>& optional, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!required.count(key) && !optional.count(key))
      throw std::invalid_argument(where + ": unknown key \"" + key + "\"");
  }
  for (const std::string& key : required)
    if (!j.contains(key)) throw std::invalid_argument(where + ": missing key \"" + key + "\"");
}

json sla_to_json(const SlaParams& sla) {
  return json{{"L_bits", sla.payload_bits}, {"theta", sla.reliability}, {"n", sla.channel_uses}};
}

SlaParams sla_from_json(const json& j) {
  require_keys(j, {"L_bits", "theta", "n"}, {}, "sla");
  SlaParams sla;
  sla.payload_bits = j.at("L_bits").get<int>();
  sla.reliability = j.at("theta").get<double>();
  sla.channel_uses = j.at("n").get<int>();
  sla.validate();
  return sla;
}

template <typename Matrix>
json matrix_to_row_major(const Matrix& m) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
  return arr;
}

template <typename Matrix>
void matrix_from_row_major(const json& arr, Eigen::Index rows, Eigen::Index cols, Matrix& out,
                           const std::string& key) {
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != rows * cols)
    throw std::invalid_argument("instance: \"" + key + "\" must hold K*R values");
  out.resize(rows, cols);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      out(i, j) = arr.at(static_cast<std::size_t>(idx++)).get<typename Matrix::Scalar>();
}

}  // namespace

void InstanceFile::validate() const {
  grid.validate();
  binary.validate();
  sla.validate();
  if (grid.users() != binary.users() || grid.blocks() != binary.blocks())
    throw std::invalid_argument("InstanceFile: grid and binary dimensions differ");
}

std::string instance_to_json(const InstanceFile& instance) {
  instance.validate();
  json j;
  j["K"] = instance.grid.users();
  j["R"] = instance.grid.blocks();
  j["gamma"] = matrix_to_row_major(instance.grid.snr);
  j["delta"] = matrix_to_row_major(instance.binary.activity);
  j["demands"] = json::array();
  j["utilities"] = json::array();
  for (int k = 0; k < instance.binary.users(); ++k) {
    j["demands"].push_back(instance.binary.demand(k));
    j["utilities"].push_back(instance.binary.utility(k));
  }
  j["sla"] = sla_to_json(instance.sla);
  return j.dump(2) + "\n";
}

InstanceFile instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("instance: JSON parse error: ") + e.what());
  }
  require_keys(j, {"K", "R", "gamma", "delta", "demands", "utilities", "sla"}, {}, "instance");
  const int k_count = j.at("K").get<int>();
  const int r_count = j.at("R").get<int>();
  if (k_count < 1 || r_count < 1)
    throw std::invalid_argument("instance: K and R must be >= 1");

  InstanceFile f;
  matrix_from_row_major(j.at("gamma"), k_count, r_count, f.grid.snr, "gamma");
  matrix_from_row_major(j.at("delta"), k_count, r_count, f.binary.activity, "delta");
  const json& demands = j.at("demands");
  const json& utilities = j.at("utilities");
  if (!demands.is_array() || static_cast<int>(demands.size()) != k_count)
    throw std::invalid_argument("instance: \"demands\" must hold K values");
  if (!utilities.is_array() || static_cast<int>(utilities.size()) != k_count)
    throw std::invalid_argument("instance: \"utilities\" must hold K values");
  f.binary.demand.resize(k_count);
  f.binary.utility.resize(k_count);
  for (int k = 0; k < k_count; ++k) {
    f.binary.demand(k) = demands.at(static_cast<std::size_t>(k)).get<int>();
    f.binary.utility(k) = utilities.at(static_cast<std::size_t>(k)).get<double>();
  }
  f.sla = sla_from_json(j.at("sla"));
  f.validate();
  return f;
}

void save_instance(const InstanceFile& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("instance: cannot open " + path + " for writing");
  out << instance_to_json(instance);
  if (!out) throw std::invalid_argument("instance: write failed for " + path);
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("instance: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  cfg.validate();
  json j;
  if (cfg.user_sweep.empty())
    j["K"] = cfg.users;
  else
    j["K_sweep"] = cfg.user_sweep;
  j["R"] = cfg.blocks;
  j["sla"] = sla_to_json(cfg.sla);
  if (cfg.mean_model == MeanSnrModel::uniform_db)
    j["mean_snr_db"] = json{{"lo", cfg.mean_lo_db}, {"hi", cfg.mean_hi_db}};
  else
    j["mean_snr_db"] = json{{"fixed", cfg.mean_fixed_db}};
  j["fading"] = "rayleigh";
  switch (cfg.utility_model) {
    case UtilityModel::unit:
      j["utility"] = "unit";
      break;
    case UtilityModel::uniform:
      j["utility"] = json{{"uniform_max", cfg.utility_max}};
      break;
    case UtilityModel::log_mean_snr:
      j["utility"] = "log_mean_snr";
      break;
  }
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["exact_cap"] = cfg.exact_cap;
  j["d_max"] = cfg.d_max;
  return j.dump(2) + "\n";
}

ScenarioConfig scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario: JSON parse error: ") + e.what());
  }
  require_keys(j, {"R", "sla", "mean_snr_db", "fading", "utility"},
               {"K", "K_sweep", "seed", "trials", "exact_cap", "d_max"}, "scenario");
  if (j.contains("K") == j.contains("K_sweep"))
    throw std::invalid_argument("scenario: provide exactly one of \"K\" and \"K_sweep\"");

  ScenarioConfig cfg;
  if (j.contains("K")) {
    cfg.users = j.at("K").get<int>();
  } else {
    cfg.user_sweep = j.at("K_sweep").get<std::vector<int>>();
    if (cfg.user_sweep.empty())
      throw std::invalid_argument("scenario: \"K_sweep\" must be non-empty");
    cfg.users = cfg.user_sweep.front();
  }
  cfg.blocks = j.at("R").get<int>();
  cfg.sla = sla_from_json(j.at("sla"));

  const json& mean = j.at("mean_snr_db");
  if (mean.is_object() && mean.contains("fixed")) {
    require_keys(mean, {"fixed"}, {}, "mean_snr_db");
    cfg.mean_model = MeanSnrModel::fixed_db;
    cfg.mean_fixed_db = mean.at("fixed").get<double>();
  } else {
    require_keys(mean, {"lo", "hi"}, {}, "mean_snr_db");
    cfg.mean_model = MeanSnrModel::uniform_db;
    cfg.mean_lo_db = mean.at("lo").get<double>();
    cfg.mean_hi_db = mean.at("hi").get<double>();
  }

  if (j.at("fading").get<std::string>() != "rayleigh")
    throw std::invalid_argument("scenario: \"fading\" must be \"rayleigh\"");
  cfg.fading = FadingModel::rayleigh;

  const json& utility = j.at("utility");
  if (utility.is_string() && utility.get<std::string>() == "unit") {
    cfg.utility_model = UtilityModel::unit;
  } else if (utility.is_string() && utility.get<std::string>() == "log_mean_snr") {
    cfg.utility_model = UtilityModel::log_mean_snr;
  } else if (utility.is_object()) {
    require_keys(utility, {"uniform_max"}, {}, "utility");
    cfg.utility_model = UtilityModel::uniform;
    cfg.utility_max = utility.at("uniform_max").get<double>();
  } else {
    throw std::invalid_argument(
        "scenario: \"utility\" must be \"unit\", \"log_mean_snr\", or {\"uniform_max\": w}");
  }

  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
  if (j.contains("exact_cap")) cfg.exact_cap = j.at("exact_cap").get<int>();
  if (j.contains("d_max")) cfg.d_max = j.at("d_max").get<int>();
  cfg.validate();
  return cfg;
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("scenario: cannot open " + path + " for writing");
  out << scenario_to_json(cfg);
  if (!out) throw std::invalid_argument("scenario: write failed for " + path);
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("scenario: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return scenario_from_json(buffer.str());
}

}  // namespace urllc
