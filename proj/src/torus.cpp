#include "blochhom/torus.hpp"

#include <cmath>

namespace blochhom {

TorusGrid::TorusGrid(int dim, int n_per_axis) : dim_(dim), n_(n_per_axis) {
  if (dim < 1 || dim > 3) throw BadDimension("TorusGrid: dim must be 1..3");
  if (n_per_axis < 3 || n_per_axis % 2 == 0)
    throw BadDimension("TorusGrid: n_per_axis must be odd and >= 3");
  num_points_ = 1;
  for (int a = 0; a < dim; ++a) num_points_ *= n_;
}

double TorusGrid::cellVolume() const {
  return std::pow(kTwoPi, dim_);
}

Eigen::VectorXd TorusGrid::point(int p) const {
  Eigen::VectorXd y(dim_);
  for (int a = dim_ - 1; a >= 0; --a) {
    y[a] = kTwoPi * (p % n_) / n_;
    p /= n_;
  }
  return y;
}

IndexVec TorusGrid::freq(int p) const {
  IndexVec k(dim_);
  const int N = half();
  for (int a = dim_ - 1; a >= 0; --a) {
    int j = p % n_;
    k[a] = (j <= N) ? j : j - n_;
    p /= n_;
  }
  return k;
}

int TorusGrid::flatIndex(const IndexVec& k) const {
  const int N = half();
  int p = 0;
  for (int a = 0; a < dim_; ++a) {
    int ka = k[a];
    if (ka < -N || ka > N) throw BadDimension("flatIndex: mode outside grid");
    int j = (ka >= 0) ? ka : ka + n_;
    p = p * n_ + j;
  }
  return p;
}

Eigen::VectorXcd forwardDft(const TorusGrid& grid, const Eigen::VectorXcd& values) {
  const int P = grid.numPoints();
  Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(P);
  for (int q = 0; q < P; ++q) {
    const IndexVec k = grid.freq(q);
    Complex acc(0.0, 0.0);
    for (int p = 0; p < P; ++p) {
      const Eigen::VectorXd y = grid.point(p);
      double phase = 0.0;
      for (int a = 0; a < grid.dim(); ++a) phase += k[a] * y[a];
      acc += values[p] * std::polar(1.0, -phase);
    }
    coeffs[q] = acc / static_cast<double>(P);
  }
  return coeffs;
}

Eigen::VectorXcd inverseDft(const TorusGrid& grid, const Eigen::VectorXcd& coeffs) {
  const int P = grid.numPoints();
  Eigen::VectorXcd values = Eigen::VectorXcd::Zero(P);
  for (int p = 0; p < P; ++p) {
    const Eigen::VectorXd y = grid.point(p);
    Complex acc(0.0, 0.0);
    for (int q = 0; q < P; ++q) {
      const IndexVec k = grid.freq(q);
      double phase = 0.0;
      for (int a = 0; a < grid.dim(); ++a) phase += k[a] * y[a];
      acc += coeffs[q] * std::polar(1.0, phase);
    }
    values[p] = acc;
  }
  return values;
}

PeriodicFunction PeriodicFunction::fromValues(const TorusGrid& grid,
                                              const Eigen::VectorXcd& values) {
  if (values.size() != grid.numPoints())
    throw BadDimension("PeriodicFunction: values size mismatch");
  return PeriodicFunction(grid, forwardDft(grid, values), values);
}

PeriodicFunction PeriodicFunction::fromCoeffs(const TorusGrid& grid,
                                              const Eigen::VectorXcd& coeffs) {
  if (coeffs.size() != grid.numPoints())
    throw BadDimension("PeriodicFunction: coeffs size mismatch");
  return PeriodicFunction(grid, coeffs, inverseDft(grid, coeffs));
}

Complex PeriodicFunction::mean() const {
  IndexVec zero = IndexVec::Zero(grid_.dim());
  return coeffs_[grid_.flatIndex(zero)];
}

double PeriodicFunction::sobolevNorm(int s) const {
  double acc = 0.0;
  for (int q = 0; q < grid_.numPoints(); ++q) {
    const IndexVec k = grid_.freq(q);
    double k2 = 0.0;
    for (int a = 0; a < grid_.dim(); ++a) k2 += double(k[a]) * k[a];
    acc += std::pow(1.0 + k2, s) * std::norm(coeffs_[q]);
  }
  return std::sqrt(acc);
}

double PeriodicFunction::l2Norm() const {
  return std::sqrt(grid_.cellVolume()) * sobolevNorm(0);
}

}  // namespace blochhom
