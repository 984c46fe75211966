#pragma once

#include <string>
#include <utility>
#include <vector>

#include "blochhom/spectra.hpp"
#include "blochhom/tensor.hpp"

namespace blochhom {

// Finite periodic supercell [0, 2 pi eps M)^d made of M^d copies of the
// scaled unit cell. Everything lives in per-fiber coefficient space: a
// supercell function is
//
//   g(x) = sum_q sum_n ghat_{q,n} e^{i (n + eta_q) . x / eps},
//
// with quasimomenta eta_q = q/M, q in {-floor(M/2) .. ceil(M/2)-1}^d, and n
// running over the per-fiber plane-wave basis. The scaled operator
// kappa^2 Lap^2 - div A(./eps) grad acts fiber-wise as eps^{-2} H(eta_q) with
// rho = kappa/eps, which makes the decomposition an exact finite identity.
struct SupercellProblem {
  double epsilon;
  int M;
  double kappa;
  PeriodicCoefficient A;
  PlaneWaveBasis basis;

  int dim() const { return A.dim(); }
  double rho() const { return kappa / epsilon; }
  double length() const { return kTwoPi * epsilon * M; }
  double volume() const { return std::pow(length(), dim()); }
  int numFibers() const;
  IndexVec fiberIndex(int qflat) const;
  int fiberFlat(const IndexVec& q) const;
  Eigen::VectorXd etaOf(int qflat) const;
};

SupercellProblem make_supercell(const PeriodicCoefficient& A, double epsilon,
                                int M, double kappa, int truncation);

// Per-fiber coefficient vectors, outer index = flat fiber.
using SupercellField = std::vector<Eigen::VectorXcd>;

SupercellField zero_field(const SupercellProblem& P);

// Build a field from integer global frequencies (requires eps*M == 1, so the
// supercell is [0,2pi)^d and every integer k splits as k = n*M + q).
SupercellField field_from_global_modes(
    const SupercellProblem& P,
    const std::vector<std::pair<IndexVec, Complex>>& modes);

double field_l2(const SupercellProblem& P, const SupercellField& g);
Complex field_inner(const SupercellProblem& P, const SupercellField& f,
                    const SupercellField& g);

// Eigendecompositions of every fiber (modes smallest pairs each), parallel
// over fibers; vectors have unit l2 coefficient norm.
struct SupercellSpectra {
  int modes;
  std::vector<Eigen::VectorXd> lambdas;   // per fiber, ascending (unscaled)
  std::vector<Eigen::MatrixXcd> vectors;  // per fiber, S x modes
};

SupercellSpectra fiber_spectra(const SupercellProblem& P, int modes);

// Operator eigenvalue on the supercell: eps^{-2} lambda^rho_m(eta_q).
double scaled_eigenvalue(const SupercellProblem& P, const SupercellSpectra& S,
                         int m, int qflat);

// b(m,q) = integral over the supercell of g e^{-i x . xi_q}
// conj(phi_m(x/eps; eta_q)) with ||phi_m||_{L2(Y)} = 1.
struct BlochCoefficients {
  Eigen::MatrixXcd b;  // modes x fibers
};

BlochCoefficients bloch_transform(const SupercellProblem& P,
                                  const SupercellSpectra& S,
                                  const SupercellField& g);
SupercellField inverse_bloch(const SupercellProblem& P,
                             const SupercellSpectra& S,
                             const BlochCoefficients& bc);
// sqrt( (eps M)^{-d} sum |b|^2 ), equals field_l2 when modes span the basis.
double coefficients_l2(const SupercellProblem& P, const BlochCoefficients& bc);
Complex coefficients_inner(const SupercellProblem& P,
                           const BlochCoefficients& f,
                           const BlochCoefficients& g);

// Spectral application of the scaled operator.
SupercellField apply_operator(const SupercellProblem& P,
                              const SupercellField& g);

// Solve (kappa^2 Lap^2 - div A(./eps) grad) u = f, f zero-mean; the solution
// is the zero-mean one (the q=0 constant mode is pinned to zero).
SupercellField solve_operator(const SupercellProblem& P,
                              const SupercellField& f);

struct DiagonalizationReport {
  double max_rel_residual;  // of b_m(Au) = lambda_m b_m(u), significant b only
};

DiagonalizationReport diagonalization_check(const SupercellProblem& P,
                                            const SupercellField& u);

// kappa(eps) per regime; check_regime throws RegimeMismatch on inconsistency.
double regime_kappa(Regime regime, double eps, double theta);
void check_regime(Regime regime, double eps, double kappa, double theta);

struct ConvergenceRow {
  double epsilon;
  double kappa;
  std::string regime;
  double l2_error;          // ||u_eps - u*|| / ||u*||
  double flux_weak_error;   // Fourier-weighted (1+|K|^2)^{-1/2} norm, relative
  double higher_mode_norm;  // L2 norm of the m >= 2 part of u_eps
};

// Oscillating-vs-homogenized comparison at fixed domain [0,2pi)^d: cells per
// axis M = 1/eps, kappa from the regime. u* solves the constant-coefficient
// problem with the discrete regime tensor at the same truncation (or with
// tensor_override when supplied, used for the wrong-tensor sanity check).
std::vector<ConvergenceRow> homogenization_experiment(
    const PeriodicCoefficient& A, int truncation, Regime regime, double theta,
    const std::vector<double>& eps_list,
    const std::vector<std::pair<IndexVec, Complex>>& f_modes,
    const Eigen::MatrixXd* tensor_override = nullptr);

void write_convergence_csv(const std::string& path,
                           const std::vector<ConvergenceRow>& rows);

struct TransformLimitReport {
  std::vector<double> eps;
  std::vector<double> errors;  // max over the fixed frequency window
  double slope;
};

// First Bloch coefficient of a fixed smooth bump versus its Fourier
// coefficients on the window |xi| <= 3, swept over eps (d = 1).
// fixed_rho > 0 keeps rho constant; fixed_rho <= 0 runs rho = eps^{-1/2}.
TransformLimitReport transform_to_fourier_limit(
    const PeriodicCoefficient& A, int truncation, double fixed_rho,
    const std::vector<double>& eps_list);

}  // namespace blochhom
