#pragma once

#include <string>
#include <vector>

#include "blochhom/basis.hpp"
#include "blochhom/coefficient.hpp"

namespace blochhom {

// Hermitian Galerkin matrix of the shifted form at quasimomentum eta and
// singular-perturbation ratio rho. Entry (m,n), in the basis enumeration:
//
//   H(m,n) = (m+eta) . Ahat(m-n) (n+eta)  +  rho^2 delta_{mn} |n+eta|^4
//
// (the common (2pi)^d volume factor is divided out; all downstream spectral
// quantities use the same normalization).
struct FiberOperator {
  PlaneWaveBasis basis;
  double rho;
  Eigen::VectorXd eta;
  Eigen::MatrixXcd matrix;
  double garding_constant;      // C* certificate for the coercivity shift
  double alpha;                 // ellipticity constant of the coefficient
  bool truncation_too_small;    // coefficient bandwidth exceeds 2N (advisory)
};

// Coercivity shift built from traceable constants:
//   C* = alpha/2 + C1*C2 + C4 + 16 rho^2,
//   C1 = 2 ||A||_inf,  C2 = 2 C1 / alpha,  C4 = ||A||_inf * d / 4.
// The first-order cross terms are absorbed with Cauchy-Schwarz weights
// producing C1, C2; C4 bounds the zeroth-order remainder; 16 rho^2 absorbs
// the quartic shift terms.
double garding_constant(const PeriodicCoefficient& A, double rho);

// OpenMP-parallel assembly (rows distributed over threads).
FiberOperator assemble_fiber(const PeriodicCoefficient& A,
                             const PlaneWaveBasis& basis, double rho,
                             const Eigen::VectorXd& eta);

// Single-threaded reference used by tests and the benchmark; bit-identical
// to the parallel path.
FiberOperator assemble_fiber_serial(const PeriodicCoefficient& A,
                                    const PlaneWaveBasis& basis, double rho,
                                    const Eigen::VectorXd& eta);

struct GardingReport {
  double min_slack;
  int trials;
};

// Randomized certificate: for seeded random unit coefficient vectors u checks
//   u* H u + C* |u|^2  >=  (rho^2/6) sum |n|^4 |u_n|^2
//                        + (alpha/2) sum (1+|n|^2) |u_n|^2
// and returns the smallest observed slack. Throws GardingViolation below
// -1e-9, which signals an assembly bug rather than a sharp-constant failure.
GardingReport garding_check(const FiberOperator& F, int trials,
                            unsigned long long seed);

// Mixed partial derivative of the fiber matrix with respect to eta at eta=0.
// dirs lists the differentiation directions (values in [0,dim)), one entry
// per derivative order, 1 <= |dirs| <= 4; all higher derivatives vanish.
Eigen::MatrixXcd eta_derivative_matrix(const PeriodicCoefficient& A,
                                       const PlaneWaveBasis& basis, double rho,
                                       const std::vector<int>& dirs);

// Regression golden dump: little-endian header {int32 d, int32 N, f64 rho,
// f64 eta[d]} followed by the matrix row-major as (Re,Im) double pairs.
void dump_fiber(const std::string& path, const FiberOperator& F);

}  // namespace blochhom
