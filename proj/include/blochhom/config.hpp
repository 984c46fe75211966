#pragma once

#include <string>

#include "blochhom/errors.hpp"

#include <json.hpp>

namespace blochhom {

// Schema-validated experiment description. Unknown fields are rejected so a
// typo cannot silently fall back to a default.
//
// {
//   "version": 1,
//   "coefficient": { ... coefficient description ... },
//   "numerics": { "N": 16, "fd_step": 1e-3, "modes": 4, "eta_count": 33 },
//   "scenario": "bands" | "cell" | "tensor" | "derivs" | "sweep-rho" |
//               "supercell" | "transform-limit" | "verify-all",   (optional,
//               must match the command line when present)
//   "scenario_params": { ... },
//   "output_dir": "out",          (optional; overridable on the command line)
//   "seed": 1234                  (optional)
// }
struct ExperimentConfig {
  nlohmann::json coefficient;
  int N = 8;
  double fd_step = 1e-3;
  int modes = 4;
  int eta_count = 33;
  std::string scenario;  // empty if not pinned in the file
  nlohmann::json scenario_params;
  std::string output_dir = ".";
  unsigned long long seed = 1;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace blochhom
