// Configuration-driven experiment runner. Usage:
//   blochhom <scenario> --config cfg.json [--output dir] [--seed k]
// Scenarios: bands, cell, tensor, derivs, sweep-rho, supercell,
// transform-limit, verify-all. Exit codes: 0 success, 1 compute failure,
// 2 invalid configuration. BLOCHHOM_THREADS caps the OpenMP thread count.
#include <CLI11.hpp>
#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "blochhom/config.hpp"
#include "blochhom/derivatives.hpp"
#include "blochhom/fit.hpp"
#include "blochhom/supercell.hpp"

namespace bh = blochhom;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void writeJson(const fs::path& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw bh::Error("cannot open " + path.string());
  f << j.dump(2) << "\n";
}

std::vector<double> paramList(const json& params, const char* key,
                              std::vector<double> fallback) {
  if (!params.is_object() || !params.contains(key)) return fallback;
  return params.at(key).get<std::vector<double>>();
}

double paramNum(const json& params, const char* key, double fallback) {
  if (!params.is_object() || !params.contains(key)) return fallback;
  return params.at(key).get<double>();
}

bh::Regime regimeOf(const std::string& name) {
  if (name == "zero") return bh::Regime::Zero;
  if (name == "theta") return bh::Regime::Theta;
  if (name == "infinity") return bh::Regime::Infinity;
  throw bh::ConfigInvalid("unknown regime '" + name + "'");
}

std::vector<std::pair<bh::IndexVec, bh::Complex>> defaultForcing(int d) {
  std::vector<std::pair<bh::IndexVec, bh::Complex>> modes;
  auto add = [&](std::initializer_list<int> k, bh::Complex c) {
    bh::IndexVec kv(d);
    int a = 0;
    for (int v : k) kv[a++] = v;
    modes.emplace_back(kv, c);
    for (int i = 0; i < d; ++i) kv[i] = -kv[i];
    modes.emplace_back(kv, std::conj(c));  // keep the forcing real
  };
  if (d == 1) {
    add({1}, bh::Complex(0.5, 0.0));        // cos x
    add({2}, bh::Complex(0.0, -0.15));      // 0.3 sin 2x
  } else {
    add({1, 0}, bh::Complex(0.5, 0.0));
    add({1, 1}, bh::Complex(0.0, -0.15));
  }
  return modes;
}

int runScenario(const std::string& scenario, const bh::ExperimentConfig& cfg) {
  const bh::PeriodicCoefficient A = bh::load_coefficient(cfg.coefficient);
  const int d = A.dim();
  const bh::PlaneWaveBasis basis(d, cfg.N);
  const fs::path out(cfg.output_dir);
  fs::create_directories(out);
  const json& sp = cfg.scenario_params;

  json manifest;
  manifest["library_version"] = "1.0.0";
  manifest["scenario"] = scenario;
  manifest["coefficient"] = cfg.coefficient;
  manifest["numerics"] = {{"N", cfg.N},
                          {"fd_step", cfg.fd_step},
                          {"modes", cfg.modes},
                          {"eta_count", cfg.eta_count}};
  manifest["scenario_params"] = sp;
  manifest["seed"] = cfg.seed;

  if (scenario == "bands") {
    const double rho = paramNum(sp, "rho", 1.0);
    bh::BlochBand band =
        bh::band_sweep(A, basis, rho, bh::eta_line(d, cfg.eta_count), cfg.modes);
    bh::write_band_csv((out / "bands.csv").string(), band, d);
    manifest["lipschitz_ratio"] = band.lipschitz_ratio;
  } else if (scenario == "cell") {
    const double rho = paramNum(sp, "rho", 1.0);
    bh::CorrectorSet set = bh::solve_cell(A, basis, rho);
    bh::write_corrector_csv((out / "correctors.csv").string(), basis, set);
    bh::write_corrector_energies((out / "corrector_energies.csv").string(), set);
  } else if (scenario == "tensor") {
    const double rho = paramNum(sp, "rho", 1.0);
    std::vector<bh::HomogenizedTensor> tensors;
    tensors.push_back(bh::tensor_from_cell(A, basis, rho));
    tensors.push_back(bh::tensor_from_hessian(A, basis, rho, cfg.fd_step));
    tensors.push_back(bh::regime_tensor(A, basis, bh::Regime::Zero));
    tensors.push_back(bh::regime_tensor(A, basis, bh::Regime::Infinity));
    bh::write_tensor_csv((out / "tensors.csv").string(), tensors);
    json summary;
    summary["rho"] = rho;
    summary["symmetry_defect_cell"] = tensors[0].symmetry_defect;
    summary["min_eigenvalue_cell"] = tensors[0].min_eigenvalue;
    summary["route_gap"] =
        (tensors[0].matrix - tensors[1].matrix).cwiseAbs().maxCoeff();
    writeJson(out / "tensor_summary.json", summary);
  } else if (scenario == "derivs") {
    const double rho = paramNum(sp, "rho", 1.0);
    bh::DerivativeTable table = bh::derivative_recursion(A, basis, rho, 4);
    bh::write_derivative_table_json((out / "derivatives.json").string(), table);
  } else if (scenario == "sweep-rho") {
    const std::vector<double> rhos =
        paramList(sp, "rho_list", {1, 2, 4, 8, 16, 32, 64});
    bh::StabilityReport rep = bh::stability_sweep(A, basis, rhos);
    std::FILE* f = std::fopen((out / "rho_sweep.csv").string().c_str(), "w");
    if (!f) throw bh::Error("cannot open rho_sweep.csv");
    std::fprintf(f, "rho,dist_to_mean\n");
    for (size_t i = 0; i < rep.rhos.size(); ++i)
      std::fprintf(f, "%.12e,%.12e\n", rep.rhos[i], rep.dist_to_mean[i]);
    std::fclose(f);
    json summary;
    summary["large_rho_slope"] = rep.large_rho_slope;
    summary["small_rho_diff"] = rep.small_rho_diff;
    writeJson(out / "rho_sweep_summary.json", summary);
  } else if (scenario == "supercell") {
    const std::string regime_name =
        sp.is_object() && sp.contains("regime") ? sp.at("regime").get<std::string>()
                                                : "theta";
    const double theta = paramNum(sp, "theta", 1.0);
    const std::vector<double> eps =
        paramList(sp, "eps_list", {0.25, 0.125, 0.0625, 0.03125});
    auto rows = bh::homogenization_experiment(A, cfg.N, regimeOf(regime_name),
                                              theta, eps, defaultForcing(d));
    bh::write_convergence_csv((out / "convergence.csv").string(), rows);
  } else if (scenario == "transform-limit") {
    const double rho = paramNum(sp, "rho", 1.0);  // <= 0 means eps^{-1/2}
    const std::vector<double> eps =
        paramList(sp, "eps_list", {0.25, 0.125, 0.0625, 0.03125});
    bh::TransformLimitReport rep =
        bh::transform_to_fourier_limit(A, cfg.N, rho, eps);
    std::FILE* f =
        std::fopen((out / "transform_limit.csv").string().c_str(), "w");
    if (!f) throw bh::Error("cannot open transform_limit.csv");
    std::fprintf(f, "epsilon,max_window_error\n");
    for (size_t i = 0; i < rep.eps.size(); ++i)
      std::fprintf(f, "%.12e,%.12e\n", rep.eps[i], rep.errors[i]);
    std::fclose(f);
    manifest["slope"] = rep.slope;
  } else if (scenario == "verify-all") {
    json failures = json::array();
    auto expect = [&](bool ok, const std::string& what, double value) {
      if (!ok) failures.push_back({{"check", what}, {"value", value}});
      std::printf("[%s] %s (%.3e)\n", ok ? "PASS" : "FAIL", what.c_str(),
                  value);
    };
    const Eigen::VectorXd eta0 = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd etap = Eigen::VectorXd::Zero(d);
    etap[0] = 0.3;
    for (double rho : {0.0, 1.0}) {
      const bh::FiberOperator F = bh::assemble_fiber(A, basis, rho, etap);
      const double herm =
          (F.matrix - F.matrix.adjoint()).cwiseAbs().maxCoeff();
      expect(herm < 1e-12, "fiber Hermitian (rho=" + std::to_string(rho) + ")",
             herm);
      const bh::GardingReport g = bh::garding_check(F, 200, cfg.seed);
      expect(g.min_slack >= -1e-9, "coercivity slack", g.min_slack);
      const bh::FiberOperator Fm = bh::assemble_fiber(A, basis, rho, -etap);
      const double even = (bh::solve_fiber(F, 2).lambdas -
                           bh::solve_fiber(Fm, 2).lambdas)
                              .cwiseAbs()
                              .maxCoeff();
      expect(even < 1e-9, "spectrum even in eta", even);
      const bh::FiberOperator F0 = bh::assemble_fiber(A, basis, rho, eta0);
      const double l0 = bh::solve_fiber(F0, 1).lambdas[0];
      expect(std::abs(l0) < 1e-9, "first eigenvalue vanishes at eta=0", l0);
    }
    const bh::HomogenizedTensor tc = bh::tensor_from_cell(A, basis, 1.0);
    const bh::HomogenizedTensor th = bh::tensor_from_hessian(A, basis, 1.0,
                                                             cfg.fd_step);
    const double gap = (tc.matrix - th.matrix).cwiseAbs().maxCoeff() /
                       tc.matrix.cwiseAbs().maxCoeff();
    expect(gap < 1e-4, "tensor route agreement", gap);
    writeJson(out / "verify_failures.json", failures);
    manifest["failed_checks"] = failures.size();
    writeJson(out / "manifest.json", manifest);
    return failures.empty() ? 0 : 1;
  } else {
    throw bh::ConfigInvalid("unknown scenario '" + scenario + "'");
  }
  writeJson(out / "manifest.json", manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bloch-wave homogenization experiment runner"};
  std::string scenario, config_path, output_dir;
  long long seed = -1;
  app.add_option("scenario", scenario, "experiment scenario")->required();
  app.add_option("--config", config_path, "config JSON path")->required();
  app.add_option("--output", output_dir, "output directory override");
  app.add_option("--seed", seed, "seed override");
  CLI11_PARSE(app, argc, argv);

  if (const char* t = std::getenv("BLOCHHOM_THREADS"))
    omp_set_num_threads(std::max(1, std::atoi(t)));

  try {
    bh::ExperimentConfig cfg = bh::load_experiment_config(config_path);
    if (!cfg.scenario.empty() && cfg.scenario != scenario)
      throw bh::ConfigInvalid("config pins scenario '" + cfg.scenario +
                              "' but '" + scenario + "' was requested");
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (seed >= 0) cfg.seed = static_cast<unsigned long long>(seed);
    return runScenario(scenario, cfg);
  } catch (const bh::ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
