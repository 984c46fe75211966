#pragma once

#include <string>
#include <vector>

#include "blochhom/fiber.hpp"

namespace blochhom {

// Zero-mean cell solutions chi_j (j = 1..d) of
//   rho^2 Lap^2 chi_j - div( A (e_j + grad chi_j) ) = 0  on Y,
// held as plane-wave coefficients in the basis enumeration (constant mode
// exactly 0). Energy diagnostics use the coefficient (Parseval)
// normalization: a factor (2pi)^{d/2} converts to integral norms.
struct CorrectorSet {
  double rho;
  std::vector<Eigen::VectorXcd> chi;  // one coefficient vector per direction j
  // Row j: { rho * ||Lap chi_j||, ||chi_j||_{H1}, rho^2 * ||grad^3 chi_j|| }.
  Eigen::MatrixXd energies;
};

CorrectorSet solve_cell(const PeriodicCoefficient& A,
                        const PlaneWaveBasis& basis, double rho);

// || grad(u - v) || in the coefficient normalization.
double grad_diff_norm(const PlaneWaveBasis& basis, const Eigen::VectorXcd& u,
                      const Eigen::VectorXcd& v);

struct RhoStabilityReport {
  double diff;      // max_j || grad chi^{rho1}_j - grad chi^{rho2}_j ||
  double scale;     // |1 - (rho1/rho2)^2|
  double fitted_C;  // diff / scale (infinity guarded)
};

RhoStabilityReport corrector_rho_stability(const PeriodicCoefficient& A,
                                           const PlaneWaveBasis& basis,
                                           double rho1, double rho2);

struct MollifiedCoefficient {
  PeriodicCoefficient B;
  double kappa_target;  // requested kernel width
  double achieved;      // (M_Y |A-B|_F^q)^{1/q} by fine-grid quadrature
  double q;
};

// Smooth the coefficient by a tensor-product Fejer (nonnegative, unit-mass,
// trigonometric) kernel with cutoff K = ceil(1/width): Bhat(k) =
// Ahat(k) * prod_a (1 - |k_a|/(K+1))_+. Pointwise convolution against a
// nonnegative unit-mass kernel preserves symmetry and ellipticity.
MollifiedCoefficient mollify(const PeriodicCoefficient& A, double width,
                             double q);

struct ZeroRhoReport {
  double varkappa;          // achieved ||A - B||_{L^q}
  double chiB_h2;           // max_j H2 norm of the smooth-coefficient corrector
  double diff_zero;         // max_j ||grad chi^0 - grad chi^B||
  double fitted_C_zero;     // diff_zero / varkappa
  std::vector<double> rhos;
  std::vector<double> diffs;      // max_j ||grad chi^rho - grad chi^B||
  std::vector<double> fitted_C;   // diffs / (rho * chiB_h2 + varkappa)
};

// Compares correctors of A at small rho and at rho = 0 against the corrector
// of the mollified coefficient, reporting the fitted stability constants.
ZeroRhoReport zero_rho_consistency(const PeriodicCoefficient& A,
                                   const PlaneWaveBasis& basis,
                                   const std::vector<double>& rho_list,
                                   double width, double q);

// CSV dump (j, n_1..n_d, re, im) plus an energies sidecar
// (j, rho_lap, h1, rho2_grad3).
void write_corrector_csv(const std::string& path, const PlaneWaveBasis& basis,
                         const CorrectorSet& set);
void write_corrector_energies(const std::string& path, const CorrectorSet& set);

}  // namespace blochhom
