#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "blochhom/fiber.hpp"
#include "helpers.hpp"

using namespace blochhom;
using namespace testutil;

namespace {

Eigen::VectorXd etaVec(std::initializer_list<double> v) {
  Eigen::VectorXd e(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) e[i++] = x;
  return e;
}

}  // namespace

TEST_CASE("coefficient factories validate their input") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 0.2, 0.3, 1;  // not symmetric
  CHECK_THROWS_AS(PeriodicCoefficient::constant(bad, 9), NotSymmetric);
  Eigen::MatrixXd neg(1, 1);
  neg << -1;
  CHECK_THROWS_AS(PeriodicCoefficient::constant(neg, 9), NotElliptic);
  CHECK_THROWS_AS(PeriodicCoefficient::laminate(1, 4, 1.5, 9), ConfigInvalid);
}

TEST_CASE("laminate closed-form Fourier data") {
  const PeriodicCoefficient A = laminate14();
  CHECK(A.alpha() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(A.supNorm() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(A.meanMatrix()(0, 0) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(A.bandwidth() == -1);
  IndexVec k(1);
  // ahat(k) against direct quadrature of the step function
  for (int kk : {1, 2, 3, 7}) {
    k << kk;
    Complex quad(0, 0);
    const int nq = 200000;
    for (int i = 0; i < nq; ++i) {
      const double y = kTwoPi * (i + 0.5) / nq;
      quad += A.valueAt(etaVec({y}))(0, 0) * std::exp(Complex(0, -kk * y));
    }
    quad /= static_cast<double>(nq);
    CHECK(std::abs(A.fourierAt(k)(0, 0) - quad) < 1e-8);
  }
  // even k (other than 0) vanish for a half-half laminate
  k << 2;
  CHECK(std::abs(A.fourierAt(k)(0, 0)) < 1e-14);
}

TEST_CASE("trig coefficient: exact band and values") {
  const PeriodicCoefficient A = smooth1d();
  CHECK(A.bandwidth() == 2);
  IndexVec k(1);
  k << 3;
  CHECK(A.fourierAt(k).cwiseAbs().maxCoeff() == 0.0);
  for (double y : {0.3, 1.7, 5.1}) {
    const double expect = 2.0 + std::cos(y) + 0.5 * std::sin(2 * y);
    CHECK(A.valueAt(etaVec({y}))(0, 0) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("2D trig benchmark is elliptic with alpha near 1") {
  const PeriodicCoefficient A = trig2d();
  CHECK(A.dim() == 2);
  CHECK(A.alpha() >= 1.0 - 1e-12);
  CHECK(A.alpha() <= 1.05);
  const Eigen::VectorXd y = etaVec({0.7, 2.1});
  const double expect = 2.0 + std::sin(0.7) * std::sin(2.1);
  CHECK(A.valueAt(y)(0, 0) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(A.valueAt(y)(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("JSON coefficient loader round trips every kind") {
  using nlohmann::json;
  json lam = {{"version", 1},
              {"dim", 1},
              {"n_per_axis", 65},
              {"kind", "laminate"},
              {"payload", {{"values", {1.0, 4.0}}, {"fraction", 0.5}}}};
  const PeriodicCoefficient L = load_coefficient(lam);
  CHECK(L.meanMatrix()(0, 0) == doctest::Approx(2.5).epsilon(1e-12));

  json cst = {{"version", 1},
              {"dim", 2},
              {"n_per_axis", 9},
              {"kind", "constant"},
              {"payload", {{"matrix", {{2.0, 0.5}, {0.5, 3.0}}}}}};
  const PeriodicCoefficient C = load_coefficient(cst);
  CHECK(C.meanMatrix()(0, 1) == doctest::Approx(0.5).epsilon(1e-12));

  json trig;
  trig["version"] = 1;
  trig["dim"] = 1;
  trig["n_per_axis"] = 33;
  trig["kind"] = "trig";
  json terms = json::array();
  terms.push_back({{"c", 2.0}, {"k", {0}}, {"fn", "cos"}});
  terms.push_back({{"c", 1.0}, {"k", {1}}, {"fn", "cos"}});
  terms.push_back({{"c", 0.5}, {"k", {2}}, {"fn", "sin"}});
  json entry;
  entry["row"] = 0;
  entry["col"] = 0;
  entry["terms"] = terms;
  trig["payload"]["entries"] = json::array({entry});
  const PeriodicCoefficient T = load_coefficient(trig);
  const double y = 1.234;
  CHECK(T.valueAt(etaVec({y}))(0, 0) ==
        doctest::Approx(2.0 + std::cos(y) + 0.5 * std::sin(2 * y))
            .epsilon(1e-12));

  json badver = lam;
  badver["version"] = 2;
  CHECK_THROWS_AS(load_coefficient(badver), ConfigInvalid);
  json badkind = lam;
  badkind["kind"] = "nope";
  CHECK_THROWS_AS(load_coefficient(badkind), ConfigInvalid);
}

TEST_CASE("identity coefficient gives a diagonal fiber with symbol entries") {
  const PeriodicCoefficient A = identity(1);
  const PlaneWaveBasis basis(1, 6);
  const double rho = 1.5;
  const Eigen::VectorXd eta = etaVec({0.25});
  const FiberOperator F = assemble_fiber(A, basis, rho, eta);
  for (int i = 0; i < basis.size(); ++i) {
    for (int j = 0; j < basis.size(); ++j) {
      const double p = basis.index(i)[0] + 0.25;
      const double expect =
          i == j ? p * p + rho * rho * p * p * p * p : 0.0;
      CHECK(std::abs(F.matrix(i, j) - expect) < 1e-13);
    }
  }
}

TEST_CASE("fiber entries match direct quadrature of the sesquilinear form") {
  const PeriodicCoefficient A = cosine1d();
  const PlaneWaveBasis basis(1, 1);
  const double rho = 1.0, eta = 0.25;
  const FiberOperator F = assemble_fiber(A, basis, rho, etaVec({eta}));
  const int nq = 1024;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double m = basis.index(i)[0] + eta;
      const double n = basis.index(j)[0] + eta;
      Complex quad(0, 0);
      for (int p = 0; p < nq; ++p) {
        const double y = kTwoPi * p / nq;
        const double a = 2.0 + 2.0 * std::cos(y);
        quad += (m * a * n + rho * rho * m * m * n * n) *
                std::exp(Complex(0, (basis.index(j)[0] - basis.index(i)[0]) * y));
      }
      quad /= static_cast<double>(nq);
      CHECK(std::abs(F.matrix(i, j) - quad) < 1e-8);
    }
  }
}

TEST_CASE("fiber matrix is Hermitian and eta-even in spectrum inputs") {
  const PeriodicCoefficient A = laminate14();
  const PlaneWaveBasis basis(1, 24);
  const FiberOperator F = assemble_fiber(A, basis, 2.0, etaVec({0.37}));
  CHECK((F.matrix - F.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(F.truncation_too_small);  // unbounded laminate band
  const PeriodicCoefficient T = smooth1d();
  CHECK_FALSE(assemble_fiber(T, basis, 2.0, etaVec({0.37})).truncation_too_small);
  CHECK_THROWS_AS(assemble_fiber(A, basis, 2.0, etaVec({0.51})), EtaOutOfCell);
}

TEST_CASE("constant-mode row and column vanish at eta = 0") {
  const PeriodicCoefficient A = laminate14();
  const PlaneWaveBasis basis(1, 16);
  const FiberOperator F = assemble_fiber(A, basis, 3.0, etaVec({0.0}));
  CHECK(F.matrix.row(0).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(F.matrix.col(0).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("serial and parallel assembly agree bit for bit") {
  const PeriodicCoefficient A = laminate14();
  const PlaneWaveBasis basis(1, 20);
  const Eigen::VectorXd eta = etaVec({0.11});
  const FiberOperator Fp = assemble_fiber(A, basis, 1.7, eta);
  const FiberOperator Fs = assemble_fiber_serial(A, basis, 1.7, eta);
  CHECK((Fp.matrix - Fs.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coercivity constant formula and randomized slack certificate") {
  const PeriodicCoefficient I1 = identity(1);
  const double rho = 2.0;
  // alpha = sup = 1: C* = 1/2 + 2*4 + 1/4 + 16 rho^2
  CHECK(garding_constant(I1, rho) ==
        doctest::Approx(8.75 + 16 * rho * rho).epsilon(1e-14));
  const PlaneWaveBasis basis(1, 12);
  const FiberOperator F = assemble_fiber(laminate14(), basis, rho, etaVec({0.4}));
  const GardingReport rep = garding_check(F, 300, 123);
  CHECK(rep.trials == 300);
  CHECK(rep.min_slack >= -1e-9);
}

TEST_CASE("eta derivatives of the fiber match exact difference stencils") {
  // H(eta) is a polynomial of degree 4 in eta, so the five-point stencils
  // below are exact: their error terms involve fifth and sixth derivatives.
  const PeriodicCoefficient A = smooth1d();
  const PlaneWaveBasis basis(1, 4);
  const double rho = 1.3, h = 0.05;
  auto H = [&](double e) {
    return assemble_fiber(A, basis, rho, etaVec({e})).matrix;
  };
  const Eigen::MatrixXcd Hm2 = H(-2 * h), Hm1 = H(-h), H0 = H(0), Hp1 = H(h),
                         Hp2 = H(2 * h);
  const Eigen::MatrixXcd d1 = (Hm2 - 8 * Hm1 + 8 * Hp1 - Hp2) / (12 * h);
  const Eigen::MatrixXcd d2 =
      (-Hm2 + 16 * Hm1 - 30 * H0 + 16 * Hp1 - Hp2) / (12 * h * h);
  const Eigen::MatrixXcd d3 = (-Hm2 + 2 * Hm1 - 2 * Hp1 + Hp2) / (2 * h * h * h);
  const Eigen::MatrixXcd d4 =
      (Hm2 - 4 * Hm1 + 6 * H0 - 4 * Hp1 + Hp2) / (h * h * h * h);
  CHECK((eta_derivative_matrix(A, basis, rho, {0}) - d1).cwiseAbs().maxCoeff() <
        1e-9);
  CHECK((eta_derivative_matrix(A, basis, rho, {0, 0}) - d2)
            .cwiseAbs()
            .maxCoeff() < 1e-8);
  CHECK((eta_derivative_matrix(A, basis, rho, {0, 0, 0}) - d3)
            .cwiseAbs()
            .maxCoeff() < 1e-7);
  CHECK((eta_derivative_matrix(A, basis, rho, {0, 0, 0, 0}) - d4)
            .cwiseAbs()
            .maxCoeff() < 1e-6);
}

TEST_CASE("mixed second eta derivative in 2D matches the directional stencil") {
  const PeriodicCoefficient A = trig2d(9);
  const PlaneWaveBasis basis(2, 2);
  const double rho = 0.8, h = 0.05;
  auto H = [&](double t) {
    return assemble_fiber(A, basis, rho, etaVec({t, t})).matrix;
  };
  auto Hx = [&](double t) {
    return assemble_fiber(A, basis, rho, etaVec({t, 0.0})).matrix;
  };
  auto Hy = [&](double t) {
    return assemble_fiber(A, basis, rho, etaVec({0.0, t})).matrix;
  };
  auto second = [&](auto&& f) -> Eigen::MatrixXcd {
    return (-f(-2 * h) + 16 * f(-h) - 30 * f(0.0) + 16 * f(h) - f(2 * h)) /
           (12 * h * h);
  };
  // d1 d2 = ((d1+d2)^2 - d1^2 - d2^2) / 2, each term along a line
  const Eigen::MatrixXcd mixed = 0.5 * (second(H) - second(Hx) - second(Hy));
  CHECK((eta_derivative_matrix(A, basis, rho, {0, 1}) - mixed)
            .cwiseAbs()
            .maxCoeff() < 1e-8);
}

TEST_CASE("identity coefficient derivative closed forms") {
  const PeriodicCoefficient A = identity(1);
  const PlaneWaveBasis basis(1, 3);
  const double rho = 2.0;
  const Eigen::MatrixXcd D2 = eta_derivative_matrix(A, basis, rho, {0, 0});
  const Eigen::MatrixXcd D4 = eta_derivative_matrix(A, basis, rho, {0, 0, 0, 0});
  for (int i = 0; i < basis.size(); ++i) {
    const double n = basis.index(i)[0];
    CHECK(std::abs(D2(i, i) - (2.0 + rho * rho * 12.0 * n * n)) < 1e-12);
    CHECK(std::abs(D4(i, i) - rho * rho * 24.0) < 1e-12);
  }
}

TEST_CASE("binary fiber dump round trips header and payload") {
  const PeriodicCoefficient A = smooth1d();
  const PlaneWaveBasis basis(1, 3);
  const FiberOperator F = assemble_fiber(A, basis, 1.25, etaVec({0.125}));
  const std::string path = "fiber_dump_test.bin";
  dump_fiber(path, F);
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  int32_t d = 0, N = 0;
  double rho = 0, eta = 0;
  f.read(reinterpret_cast<char*>(&d), 4);
  f.read(reinterpret_cast<char*>(&N), 4);
  f.read(reinterpret_cast<char*>(&rho), 8);
  f.read(reinterpret_cast<char*>(&eta), 8);
  CHECK(d == 1);
  CHECK(N == 3);
  CHECK(rho == 1.25);
  CHECK(eta == 0.125);
  const int S = basis.size();
  std::vector<double> buf(2 * S * S);
  f.read(reinterpret_cast<char*>(buf.data()), 16 * S * S);
  CHECK(f.good());
  double worst = 0;
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j) {
      worst = std::max(worst,
                       std::abs(Complex(buf[2 * (i * S + j)],
                                        buf[2 * (i * S + j) + 1]) -
                                F.matrix(i, j)));
    }
  CHECK(worst == 0.0);
  std::remove(path.c_str());
}
