#pragma once

#include "blochhom/coefficient.hpp"

namespace testutil {

using blochhom::Complex;
using blochhom::PeriodicCoefficient;

// 1D laminate a = 1 on [0,pi), 4 on [pi,2pi): alpha 1, mean 2.5,
// harmonic mean 1.6.
inline PeriodicCoefficient laminate14(int n = 129) {
  return PeriodicCoefficient::laminate(1.0, 4.0, 0.5, n);
}

// Smooth 1D benchmark a(y) = 2 + cos y + 0.5 sin 2y (min ~ 0.70).
inline PeriodicCoefficient smooth1d(int n = 65) {
  PeriodicCoefficient::FourierMap map;
  map[{0}] = Eigen::MatrixXcd::Constant(1, 1, Complex(2.0, 0.0));
  map[{1}] = Eigen::MatrixXcd::Constant(1, 1, Complex(0.5, 0.0));
  map[{2}] = Eigen::MatrixXcd::Constant(1, 1, Complex(0.0, -0.25));
  return PeriodicCoefficient::fromFourier(1, n, map,
                                          PeriodicCoefficient::Kind::Trig);
}

// 2D benchmark a(y) = (2 + sin y1 sin y2) I, using
// sin y1 sin y2 = (cos(y1-y2) - cos(y1+y2)) / 2.
inline PeriodicCoefficient trig2d(int n = 33) {
  PeriodicCoefficient::FourierMap map;
  const Eigen::MatrixXcd I2 = Eigen::MatrixXcd::Identity(2, 2);
  map[{0, 0}] = 2.0 * I2;
  map[{1, -1}] = 0.25 * I2;
  map[{1, 1}] = -0.25 * I2;
  return PeriodicCoefficient::fromFourier(2, n, map,
                                          PeriodicCoefficient::Kind::Trig);
}

// 1D a(y) = 2 + 2 cos y (alpha small but positive on the odd grid).
inline PeriodicCoefficient cosine1d(int n = 65) {
  PeriodicCoefficient::FourierMap map;
  map[{0}] = Eigen::MatrixXcd::Constant(1, 1, Complex(2.0, 0.0));
  map[{1}] = Eigen::MatrixXcd::Constant(1, 1, Complex(1.0, 0.0));
  return PeriodicCoefficient::fromFourier(1, n, map,
                                          PeriodicCoefficient::Kind::Trig);
}

inline PeriodicCoefficient identity(int d, int n = 17) {
  return PeriodicCoefficient::constant(Eigen::MatrixXd::Identity(d, d), n);
}

}  // namespace testutil
