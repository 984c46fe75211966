#pragma once

#include <map>
#include <string>
#include <vector>

#include "blochhom/tensor.hpp"

namespace blochhom {

using MultiIndex = std::vector<int>;  // length d, nonnegative entries

// All multi-indices with 1 <= |beta| <= max_order in graded lexicographic
// order (by total order first, then lexicographically).
std::vector<MultiIndex> multi_indices(int dim, int max_order);

// Product of per-component binomial coefficients C(beta_a, gamma_a),
// computed exactly in integers.
long long multi_binomial(const MultiIndex& beta, const MultiIndex& gamma);

struct DerivativeEntry {
  double lambda;          // d^beta lambda_1 at eta = 0
  Eigen::VectorXcd phi;   // d^beta phi_1 coefficients, zero constant mode
};

struct DerivativeTable {
  double rho;
  int dim;
  int max_order;
  std::map<MultiIndex, DerivativeEntry> entries;
};

// Exact eta-derivatives of the first eigenpair at eta = 0 up to max_order
// (<= 4; the fiber matrix is a quartic polynomial in eta so all higher
// operator derivatives vanish). The branch is pinned by the mean
// normalization phi_1(.;eta) having constant-mode coefficient (2pi)^{-d/2},
// which makes every derivative of phi_1 zero-mean. Differentiating
// H(eta) x(eta) = lambda(eta) x(eta) by the Leibniz rule and evaluating at 0
// yields, for each beta, a linear solve with the (beta-independent) reduced
// H(0), factorized once; lambda^(beta) falls out of the constant-mode row,
// which H(0) annihilates.
DerivativeTable derivative_recursion(const PeriodicCoefficient& A,
                                     const PlaneWaveBasis& basis, double rho,
                                     int max_order);

struct UniformEstimateReport {
  std::vector<double> rhos;
  std::vector<double> phi1_h1;      // max_j ||d^{e_j} phi||_{H1}
  std::vector<double> phi2_h1;      // max over |beta|=2
  std::vector<double> phi3_l2;      // max over |beta|=3
  std::vector<double> phi4_l2;      // max over |beta|=4
  std::vector<double> lambda2_dev;  // max_{j,k} |d^{e_j+e_k} lambda - 2 M_Y(e_j.A e_k)|
  std::vector<double> lambda4_abs;  // max over |beta|=4 of |d^beta lambda|
  double slope_phi1, slope_phi2, slope_phi3, slope_lambda2_dev, slope_lambda4;
  double phi4_ratio;  // max/min across rho (boundedness indicator)
};

UniformEstimateReport uniform_estimate_sweep(const PeriodicCoefficient& A,
                                             const PlaneWaveBasis& basis,
                                             const std::vector<double>& rho_list);

struct HessianCrossCheck {
  Eigen::MatrixXd hessian_half;  // (1/2) d^2 lambda_1 from the recursion
  double max_rel_diff;           // against the supplied tensor
};

HessianCrossCheck cross_check_hessian(const DerivativeTable& table,
                                      const HomogenizedTensor& tensor);

// Key format "e1+e2" (one summand per derivative, axis-numbered from 1).
std::string multi_index_key(const MultiIndex& beta);

void write_derivative_table_json(const std::string& path,
                                 const DerivativeTable& table);

}  // namespace blochhom
