#include "blochhom/config.hpp"

#include <fstream>
#include <set>

namespace blochhom {

namespace {

const std::set<std::string> kScenarios = {
    "bands",     "cell",      "tensor",          "derivs",
    "sweep-rho", "supercell", "transform-limit", "verify-all"};

void rejectUnknown(const nlohmann::json& obj, const std::set<std::string>& ok,
                   const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!ok.count(key))
      throw ConfigInvalid("config: unknown field '" + key + "' in " + where);
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  try {
    rejectUnknown(j,
                  {"version", "coefficient", "numerics", "scenario",
                   "scenario_params", "output_dir", "seed"},
                  "top level");
    if (!j.contains("version") || j.at("version").get<int>() != 1)
      throw ConfigInvalid("config: missing or unsupported version");
    if (!j.contains("coefficient"))
      throw ConfigInvalid("config: missing coefficient");
    ExperimentConfig cfg;
    cfg.coefficient = j.at("coefficient");
    if (j.contains("numerics")) {
      const auto& n = j.at("numerics");
      rejectUnknown(n, {"N", "fd_step", "modes", "eta_count"}, "numerics");
      if (n.contains("N")) cfg.N = n.at("N").get<int>();
      if (n.contains("fd_step")) cfg.fd_step = n.at("fd_step").get<double>();
      if (n.contains("modes")) cfg.modes = n.at("modes").get<int>();
      if (n.contains("eta_count")) cfg.eta_count = n.at("eta_count").get<int>();
    }
    if (j.contains("scenario")) {
      cfg.scenario = j.at("scenario").get<std::string>();
      if (!kScenarios.count(cfg.scenario))
        throw ConfigInvalid("config: unknown scenario '" + cfg.scenario + "'");
    }
    if (j.contains("scenario_params"))
      cfg.scenario_params = j.at("scenario_params");
    if (j.contains("output_dir"))
      cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<unsigned long long>();
    if (cfg.N < 1 || cfg.modes < 1 || cfg.eta_count < 1 || cfg.fd_step <= 0)
      throw ConfigInvalid("config: numerics values out of range");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("config: malformed JSON: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigInvalid("config: cannot open " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("config: parse error: ") + e.what());
  }
  return parse_experiment_config(j);
}

}  // namespace blochhom
