#pragma once

#include <string>
#include <vector>

#include "blochhom/correctors.hpp"
#include "blochhom/spectra.hpp"

namespace blochhom {

// Effective constant matrix with provenance. All routes symmetrize (k,l) vs
// (l,k) and report the pre-symmetrization defect as a numerical-error gauge.
struct HomogenizedTensor {
  Eigen::MatrixXd matrix;
  std::string route;   // "cell-average" | "bloch-hessian" | "regime-limit"
  double rho;          // parameter value (theta for the theta regime)
  std::string regime;  // "", or "zero" | "theta" | "infinity"
  double symmetry_defect;
  double min_eigenvalue;
};

enum class Regime { Zero, Theta, Infinity };

// Cell-average route: entry (k,l) = M_Y( e_k.A e_l + e_k.A grad chi_l ).
HomogenizedTensor tensor_from_cell(const PeriodicCoefficient& A,
                                   const PlaneWaveBasis& basis, double rho);

// Bloch-Hessian route: entry (k,l) = (1/2) d^2 lambda_1 / d eta_k d eta_l
// at eta = 0, by central second differences with Richardson verification at
// h/2 (StepTooLarge when the two steps disagree beyond 1e-4 relative); the
// extrapolated value is returned.
HomogenizedTensor tensor_from_hessian(const PeriodicCoefficient& A,
                                      const PlaneWaveBasis& basis, double rho,
                                      double h = 1e-3);

// Max |d lambda_1 / d eta_l (0)| over l, by central first differences;
// should vanish (lambda_1 is even with a critical point at 0).
double first_derivative_magnitude(const PeriodicCoefficient& A,
                                  const PlaneWaveBasis& basis, double rho,
                                  double h = 1e-3);

// Regime limits: zero -> cell route at rho=0 (1D uses the exact reciprocal-
// mean value, see implementation note), theta -> cell route at rho=theta,
// infinity -> M_Y(A) exactly.
HomogenizedTensor regime_tensor(const PeriodicCoefficient& A,
                                const PlaneWaveBasis& basis, Regime regime,
                                double theta = 1.0);

struct StabilityReport {
  std::vector<double> rhos;
  std::vector<double> dist_to_mean;  // ||T_rho - M_Y(A)||_F
  double large_rho_slope;            // log-log fit over the top decade
  double small_rho_diff;             // ||T_{min rho} - T_0||_F
};

StabilityReport stability_sweep(const PeriodicCoefficient& A,
                                const PlaneWaveBasis& basis,
                                const std::vector<double>& rho_list);

// CSV rows (route, rho, k, l, value), deterministic order.
void write_tensor_csv(const std::string& path,
                      const std::vector<HomogenizedTensor>& tensors);

}  // namespace blochhom
