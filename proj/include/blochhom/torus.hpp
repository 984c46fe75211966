#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "blochhom/errors.hpp"

namespace blochhom {

using Complex = std::complex<double>;
using IndexVec = Eigen::VectorXi;  // a Fourier multi-index n in Z^d

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform collocation lattice on the torus Y = [0, 2*pi)^d.
//
// n_per_axis is required odd so the symmetric index set {-N..N}^d,
// N = (n_per_axis-1)/2, bijects with the grid modes and real fields stay
// exactly conjugate-symmetric (no unmatched Nyquist mode).
class TorusGrid {
 public:
  TorusGrid(int dim, int n_per_axis);

  int dim() const { return dim_; }
  int nPerAxis() const { return n_; }
  int half() const { return (n_ - 1) / 2; }       // N
  int numPoints() const { return num_points_; }   // n_per_axis^d
  double cellVolume() const;                      // (2*pi)^d

  // Grid point y_k for flat index p (row-major over axes).
  Eigen::VectorXd point(int p) const;

  // Fourier index for flat index p, entries in {-N..N}.
  IndexVec freq(int p) const;

  // Flat index of a Fourier multi-index (each entry must lie in {-N..N}).
  int flatIndex(const IndexVec& k) const;

 private:
  int dim_;
  int n_;
  int num_points_;
};

// A complex periodic function on the torus, held in its dual (Fourier)
// representation over the grid's symmetric index set together with the
// collocation values. Convention shared by every module:
//
//   u(y) = sum_n uhat(n) e^{i n.y},   uhat(n) = (2*pi)^{-d} \int_Y u e^{-i n.y}
//
// so the mean M_Y(u) equals uhat(0).
class PeriodicFunction {
 public:
  static PeriodicFunction fromValues(const TorusGrid& grid,
                                     const Eigen::VectorXcd& values);
  static PeriodicFunction fromCoeffs(const TorusGrid& grid,
                                     const Eigen::VectorXcd& coeffs);

  const TorusGrid& grid() const { return grid_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  const Eigen::VectorXcd& values() const { return values_; }

  Complex coeff(const IndexVec& k) const { return coeffs_[grid_.flatIndex(k)]; }
  Complex mean() const;

  // (sum_n (1+|n|^2)^s |uhat(n)|^2)^{1/2}; the s=0 value is the L2 norm in
  // the coefficient (Parseval) normalization, i.e. (2*pi)^{-d/2} ||u||_L2.
  double sobolevNorm(int s) const;

  // True L2(Y) norm: (2*pi)^{d/2} * sobolevNorm(0).
  double l2Norm() const;

 private:
  PeriodicFunction(const TorusGrid& grid, Eigen::VectorXcd coeffs,
                   Eigen::VectorXcd values)
      : grid_(grid), coeffs_(std::move(coeffs)), values_(std::move(values)) {}

  TorusGrid grid_;
  Eigen::VectorXcd coeffs_;
  Eigen::VectorXcd values_;
};

// Dense direct DFTs matching the convention above. Sizes here are desk scale
// (n^d up to a few thousand), so O(n^2) transforms are fine.
Eigen::VectorXcd forwardDft(const TorusGrid& grid, const Eigen::VectorXcd& values);
Eigen::VectorXcd inverseDft(const TorusGrid& grid, const Eigen::VectorXcd& coeffs);

inline Complex meanValue(const PeriodicFunction& u) { return u.mean(); }
inline double sobolevNorm(const PeriodicFunction& u, int s) {
  return u.sobolevNorm(s);
}

}  // namespace blochhom
