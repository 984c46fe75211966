#pragma once

#include <string>
#include <vector>

#include "blochhom/eigensolver.hpp"
#include "blochhom/fiber.hpp"

namespace blochhom {

struct FiberSolution {
  Eigen::VectorXd lambdas;
  Eigen::MatrixXcd vectors;
};

// Smallest M eigenpairs of one fiber.
FiberSolution solve_fiber(const FiberOperator& F, int M);

struct GaugeFixedEigenfunction {
  Eigen::VectorXcd coeffs;
  double normalization_residual;  // |mean - (2pi)^{-d/2}| after the fix
};

// Remove the phase/scale ambiguity of a first-band eigenvector by pinning its
// mean (= constant-mode coefficient) to the positive real value (2pi)^{-d/2}.
// Valid only while the constant-mode amplitude stays away from zero; outside
// that neighbourhood DegenerateGauge is thrown.
GaugeFixedEigenfunction gauge_fix(const Eigen::VectorXcd& vec, int d);

// Eigenvalue branches over a quasimomentum grid. The first band's vectors are
// stored gauge-fixed where the gauge is non-degenerate; all others keep unit
// norm with deterministic phase. gauge_residuals reports
// |mean - (2pi)^{-d/2}| for every stored vector.
struct BlochBand {
  double rho;
  int modes;
  std::vector<Eigen::VectorXd> etas;
  Eigen::MatrixXd lambdas;           // row per eta, column per mode, ascending
  std::vector<Eigen::MatrixXcd> eigvecs;
  Eigen::MatrixXd gauge_residuals;
  double lipschitz_ratio;  // max |dlambda| / |deta| over adjacent grid points
};

BlochBand band_sweep(const PeriodicCoefficient& A, const PlaneWaveBasis& basis,
                     double rho, const std::vector<Eigen::VectorXd>& etas,
                     int M);

// Single-threaded reference; identical results.
BlochBand band_sweep_serial(const PeriodicCoefficient& A,
                            const PlaneWaveBasis& basis, double rho,
                            const std::vector<Eigen::VectorXd>& etas, int M);

// Deterministic CSV: header then rows (eta_1..eta_d, m, lambda,
// gauge_residual) in grid-then-mode order.
void write_band_csv(const std::string& path, const BlochBand& band, int dim);

// Uniform grid of quasimomenta along axis 0 (other components zero):
// count points spanning [-1/2, 1/2).
std::vector<Eigen::VectorXd> eta_line(int dim, int count);

}  // namespace blochhom
