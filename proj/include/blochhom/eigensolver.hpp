#pragma once

#include "blochhom/torus.hpp"

namespace blochhom {

struct EigenResult {
  Eigen::VectorXd lambdas;   // ascending, length M
  Eigen::MatrixXcd vectors;  // unit l2-norm columns, deterministic phase
};

// Smallest M eigenpairs of a Hermitian matrix.
//
// Small matrices use a dense solve; larger ones (supercell / 2D fibers) use
// shift-inverted block subspace iteration on (H + sigma I)^{-1}, valid here
// because every matrix we solve is positive semi-definite. Either way the
// eigenvalues are recomputed as Rayleigh quotients of the computed vectors
// (the raw dense eigenvalues carry an absolute error ~eps*||H||, ruinous for
// finite differencing when ||H|| ~ rho^2 N^4), and pairs failing the residual
// target ||Hv - lambda v|| <= 1e-8 (1+|lambda|) are polished by shifted
// inverse iteration. Vector phase is fixed by making the largest-magnitude
// entry real positive.
EigenResult smallest_eigenpairs(const Eigen::MatrixXcd& H, int M);

}  // namespace blochhom
