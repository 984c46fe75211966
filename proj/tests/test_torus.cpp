#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "blochhom/basis.hpp"
#include "blochhom/torus.hpp"

using namespace blochhom;

namespace {

Eigen::VectorXcd randomValues(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  return v;
}

}  // namespace

TEST_CASE("grid construction validates dimensions and parity") {
  CHECK_THROWS_AS(TorusGrid(0, 5), BadDimension);
  CHECK_THROWS_AS(TorusGrid(4, 5), BadDimension);
  CHECK_THROWS_AS(TorusGrid(1, 4), BadDimension);  // even grids rejected
  CHECK_THROWS_AS(TorusGrid(1, 1), BadDimension);
  TorusGrid g(2, 7);
  CHECK(g.half() == 3);
  CHECK(g.numPoints() == 49);
  CHECK(g.cellVolume() == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-15));
}

TEST_CASE("freq/flatIndex are inverse bijections") {
  TorusGrid g(2, 9);
  for (int p = 0; p < g.numPoints(); ++p) {
    CHECK(g.flatIndex(g.freq(p)) == p);
  }
  IndexVec k(2);
  k << 5, 0;
  CHECK_THROWS_AS(g.flatIndex(k), BadDimension);
}

TEST_CASE("DFT round trip is exact to machine precision") {
  for (int d : {1, 2}) {
    TorusGrid g(d, d == 1 ? 31 : 9);
    const Eigen::VectorXcd v = randomValues(g.numPoints(), 42 + d);
    const Eigen::VectorXcd back = inverseDft(g, forwardDft(g, v));
    CHECK((back - v).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("pure modes transform to unit coefficients") {
  TorusGrid g(1, 17);
  Eigen::VectorXcd v(g.numPoints());
  const int n = 3;
  for (int p = 0; p < g.numPoints(); ++p)
    v[p] = std::exp(Complex(0, n * g.point(p)[0]));
  const Eigen::VectorXcd c = forwardDft(g, v);
  for (int p = 0; p < g.numPoints(); ++p) {
    const double expect = g.freq(p)[0] == n ? 1.0 : 0.0;
    CHECK(std::abs(c[p] - expect) < 1e-12);
  }
}

TEST_CASE("mean equals the zero coefficient") {
  TorusGrid g(1, 33);
  Eigen::VectorXcd v(g.numPoints());
  for (int p = 0; p < g.numPoints(); ++p)
    v[p] = 2.5 + std::cos(g.point(p)[0]);
  const PeriodicFunction u = PeriodicFunction::fromValues(g, v);
  CHECK(std::abs(u.mean() - 2.5) < 1e-12);
}

TEST_CASE("grid Parseval identity") {
  TorusGrid g(2, 9);
  const Eigen::VectorXcd v = randomValues(g.numPoints(), 7);
  const PeriodicFunction u = PeriodicFunction::fromValues(g, v);
  // quadrature of |u|^2 over the grid vs the coefficient sum
  const double quad =
      v.squaredNorm() * g.cellVolume() / g.numPoints();
  CHECK(u.l2Norm() * u.l2Norm() == doctest::Approx(quad).epsilon(1e-10));
}

TEST_CASE("Sobolev norm of a single mode") {
  TorusGrid g(1, 17);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(g.numPoints());
  IndexVec k(1);
  k << 1;
  c[g.flatIndex(k)] = 1.0;  // u = e^{iy}
  const PeriodicFunction u = PeriodicFunction::fromCoeffs(g, c);
  CHECK(u.sobolevNorm(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(u.sobolevNorm(2) == doctest::Approx(2.0).epsilon(1e-14));  // (1+1)^2=4
  CHECK(u.l2Norm() == doctest::Approx(std::sqrt(kTwoPi)).epsilon(1e-14));
}

TEST_CASE("fromCoeffs/fromValues agree") {
  TorusGrid g(1, 21);
  const Eigen::VectorXcd c = randomValues(g.numPoints(), 11);
  const PeriodicFunction u = PeriodicFunction::fromCoeffs(g, c);
  const PeriodicFunction w = PeriodicFunction::fromValues(g, u.values());
  CHECK((w.coeffs() - c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("basis enumeration: constant first, positions consistent") {
  PlaneWaveBasis b(2, 3);
  CHECK(b.size() == 49);
  CHECK(b.index(0).isZero());
  for (int i = 0; i < b.size(); ++i) CHECK(b.position(b.index(i)) == i);
  IndexVec out(2);
  out << 4, 0;
  CHECK_THROWS_AS(b.position(out), BadDimension);
}

TEST_CASE("basis enumeration is deterministic lexicographic after 0") {
  PlaneWaveBasis b(1, 2);
  CHECK(b.index(0)[0] == 0);
  CHECK(b.index(1)[0] == -2);
  CHECK(b.index(2)[0] == -1);
  CHECK(b.index(3)[0] == 1);
  CHECK(b.index(4)[0] == 2);
}
