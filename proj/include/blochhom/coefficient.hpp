#pragma once

#include <map>
#include <string>
#include <vector>

#include "blochhom/torus.hpp"

#include <json.hpp>

namespace blochhom {

// A d x d symmetric, uniformly elliptic periodic matrix field on Y=[0,2pi)^d,
// held in dual form: grid samples (used for ellipticity/symmetry validation
// and quadrature) plus exact Fourier data (used for Galerkin assembly).
//
// For band-limited fields (constant, trigonometric, resampled data) the
// Fourier data is a finite map of nonzero coefficients. The 1D laminate keeps
// its closed-form coefficients instead, because its Fourier support is
// unbounded: ahat(k) = (a1-a2) (1 - e^{-i 2 pi k f}) / (2 pi i k). Laminates
// are therefore sampled midpoint-per-cell (exact min/max, no Gibbs at nodes)
// while smooth fields sample at the grid nodes.
class PeriodicCoefficient {
 public:
  enum class Kind { Constant, Trig, Laminate, Samples };
  using FourierMap = std::map<std::vector<int>, Eigen::MatrixXcd>;

  static PeriodicCoefficient constant(const Eigen::MatrixXd& C, int n_per_axis);
  static PeriodicCoefficient laminate(double a1, double a2, double fraction,
                                      int n_per_axis);
  // Band-limited field given by its exact Fourier coefficients. The map only
  // needs one of each {k,-k} pair if hermitian_complete is false; the mirror
  // is filled in from realness.
  static PeriodicCoefficient fromFourier(int dim, int n_per_axis,
                                         const FourierMap& map, Kind kind);
  static PeriodicCoefficient fromSamples(int dim, int n_per_axis,
                                         const std::vector<Eigen::MatrixXd>& samples);

  Kind kind() const { return kind_; }
  int dim() const { return grid_.dim(); }
  const TorusGrid& grid() const { return grid_; }
  double alpha() const { return alpha_; }      // grid min of smallest eigenvalue
  double supNorm() const { return sup_norm_; } // grid max of spectral norm

  // Exact Fourier coefficient Ahat(k) for any k (zero outside support for
  // band-limited kinds; closed form for laminates).
  Eigen::MatrixXcd fourierAt(const IndexVec& k) const;

  // Exact pointwise value (closed form or trigonometric interpolant).
  Eigen::MatrixXd valueAt(const Eigen::VectorXd& y) const;

  // M_Y(A) = real part of Ahat(0).
  Eigen::MatrixXd meanMatrix() const;

  // Largest |k|_inf carrying a nonzero coefficient; -1 means unbounded.
  int bandwidth() const { return bandwidth_; }

  const std::vector<Eigen::MatrixXd>& samples() const { return samples_; }

  // Laminate closed-form data (kind() must be Laminate).
  double laminateA1() const { return lam_a1_; }
  double laminateA2() const { return lam_a2_; }
  double laminateFraction() const { return lam_f_; }

 private:
  PeriodicCoefficient(Kind kind, TorusGrid grid,
                      std::vector<Eigen::MatrixXd> samples, FourierMap fourier,
                      int bandwidth, double lam_a1 = 0, double lam_a2 = 0,
                      double lam_f = 0);

  void validate();

  Kind kind_;
  TorusGrid grid_;
  std::vector<Eigen::MatrixXd> samples_;
  FourierMap fourier_;
  int bandwidth_;
  double lam_a1_, lam_a2_, lam_f_;  // laminate closed-form data
  double alpha_ = 0.0;
  double sup_norm_ = 0.0;
};

// Build a coefficient from the versioned JSON description:
//   { "version": 1, "dim": d, "n_per_axis": odd, "kind": "...", "payload": {...} }
// kinds:
//   constant: payload {"matrix": [[...], ...]}
//   trig:     payload {"entries": [{"row": i, "col": j,
//                "terms": [{"c": coef, "k": [...], "fn": "cos"|"sin"}]}]}
//             (off-diagonal entries mirrored to keep symmetry)
//   laminate: payload {"values": [a1, a2], "fraction": f}   (d = 1)
//   samples:  payload {"values": [flat row-major d*d reals per grid point]}
PeriodicCoefficient load_coefficient(const nlohmann::json& spec);

}  // namespace blochhom
