#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "blochhom/correctors.hpp"
#include "blochhom/tensor.hpp"
#include "helpers.hpp"

using namespace blochhom;
using namespace testutil;

TEST_CASE("constant coefficient has a vanishing corrector") {
  Eigen::MatrixXd C(2, 2);
  C << 2, 0.5, 0.5, 3;
  const PeriodicCoefficient A = PeriodicCoefficient::constant(C, 9);
  const PlaneWaveBasis basis(2, 4);
  for (double rho : {0.0, 2.0}) {
    const CorrectorSet set = solve_cell(A, basis, rho);
    for (int j = 0; j < 2; ++j) {
      CHECK(set.chi[j].cwiseAbs().maxCoeff() < 1e-12);
      CHECK(set.energies(j, 1) < 1e-12);
    }
  }
}

TEST_CASE("correctors have exactly zero mean") {
  const PeriodicCoefficient A = laminate14();
  const PlaneWaveBasis basis(1, 32);
  for (double rho : {0.0, 1.0, 8.0}) {
    const CorrectorSet set = solve_cell(A, basis, rho);
    CHECK(std::abs(set.chi[0][0]) == 0.0);
  }
}

TEST_CASE("cell residual vanishes on the whole trial space") {
  const PeriodicCoefficient A = laminate14();
  const PlaneWaveBasis basis(1, 24);
  const double rho = 1.3;
  const CorrectorSet set = solve_cell(A, basis, rho);
  // the Galerkin solution satisfies H(0) chi = r on nonconstant modes,
  // where r is the transform of div(A e_j)
  const FiberOperator F =
      assemble_fiber(A, basis, rho, Eigen::VectorXd::Zero(1));
  Eigen::VectorXcd r(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const IndexVec m = basis.index(i);
    r[i] = Complex(0, m[0]) * A.fourierAt(m)(0, 0);
  }
  const Eigen::VectorXcd resid = F.matrix * set.chi[0] - r;
  CHECK(resid.tail(basis.size() - 1).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("smooth 1D coefficient: flux of the corrected gradient is constant") {
  // at rho = 0 in 1D, a (1 + chi') is constant; with a band-limited smooth
  // coefficient the Galerkin corrector converges spectrally, so the pointwise
  // flux variation on a fine grid must be tiny.
  const PeriodicCoefficient A = smooth1d();
  const PlaneWaveBasis basis(1, 32);
  const CorrectorSet set = solve_cell(A, basis, 0.0);
  const int nq = 2048;
  double fmin = 1e300, fmax = -1e300;
  for (int p = 0; p < nq; ++p) {
    const double y = kTwoPi * p / nq;
    Complex grad(0, 0);
    for (int i = 1; i < basis.size(); ++i) {
      const int n = basis.index(i)[0];
      grad += Complex(0, n) * set.chi[0][i] * std::exp(Complex(0, n * y));
    }
    Eigen::VectorXd yv(1);
    yv << y;
    const double flux = A.valueAt(yv)(0, 0) * (1.0 + grad.real());
    CHECK(std::abs(grad.imag()) < 1e-9);
    fmin = std::min(fmin, flux);
    fmax = std::max(fmax, flux);
  }
  CHECK(fmax - fmin < 1e-6 * std::abs(fmax));
}

TEST_CASE("laminate flux constancy holds in the mean-square sense") {
  const PeriodicCoefficient A = laminate14();
  const PlaneWaveBasis basis(1, 64);
  const CorrectorSet set = solve_cell(A, basis, 0.0);
  // pointwise flux oscillates near the jumps (truncation ringing), but the
  // flux mean must already be close to the exact reciprocal mean 1.6
  Complex fluxMean = A.fourierAt(IndexVec::Zero(1))(0, 0);
  for (int i = 1; i < basis.size(); ++i) {
    const IndexVec n = basis.index(i);
    IndexVec mn = -n;
    fluxMean += A.fourierAt(mn)(0, 0) * Complex(0, n[0]) * set.chi[0][i];
  }
  CHECK(std::abs(fluxMean.real() - 1.6) < 0.05);
  CHECK(std::abs(fluxMean.imag()) < 1e-10);
}

TEST_CASE("Galerkin cell energies decrease monotonically with N") {
  const PeriodicCoefficient A = laminate14();
  double prev = 1e300;
  for (int N : {8, 16, 32, 64}) {
    const double t =
        tensor_from_cell(A, PlaneWaveBasis(1, N), 0.0).matrix(0, 0);
    CHECK(t < prev + 1e-12);  // richer space, smaller minimum
    prev = t;
  }
  CHECK(prev >= 1.6 - 1e-9);  // bounded below by the exact value
}

TEST_CASE("corrector rho stability scales like the relative rho change") {
  const PeriodicCoefficient A = laminate14();
  const PlaneWaveBasis basis(1, 32);
  const RhoStabilityReport same = corrector_rho_stability(A, basis, 1.0, 1.0);
  CHECK(same.diff == 0.0);
  const RhoStabilityReport near = corrector_rho_stability(A, basis, 1.0, 1.1);
  const RhoStabilityReport far = corrector_rho_stability(A, basis, 1.0, 2.0);
  CHECK(near.diff > 0.0);
  CHECK(near.diff < far.diff);
  // fitted constants from nearby and distant pairs agree within a factor 3
  CHECK(near.fitted_C / far.fitted_C > 1.0 / 3.0);
  CHECK(near.fitted_C / far.fitted_C < 3.0);
}

TEST_CASE("Fejer mollification: identity on constants, shrinking error") {
  Eigen::MatrixXd C(1, 1);
  C << 3.0;
  const PeriodicCoefficient K = PeriodicCoefficient::constant(C, 33);
  const MollifiedCoefficient mc = mollify(K, 0.25, 2.0);
  CHECK(mc.achieved < 1e-12);

  const PeriodicCoefficient A = laminate14(257);
  const MollifiedCoefficient w1 = mollify(A, 0.2, 2.0);
  const MollifiedCoefficient w2 = mollify(A, 0.1, 2.0);
  CHECK(w1.achieved > 0.0);
  CHECK(w2.achieved < w1.achieved);           // finer kernel, smaller error
  CHECK(w2.B.alpha() >= A.alpha() - 1e-9);    // ellipticity preserved
  CHECK(w2.B.bandwidth() >= 0);               // smooth output is band limited
  // L2 mollification error of a jump scales like sqrt(width)
  const double ratio = w1.achieved / w2.achieved;
  CHECK(ratio > 1.1);
  CHECK(ratio < 2.5);
}

TEST_CASE("zero-rho consistency against a mollified coefficient") {
  const PeriodicCoefficient A = laminate14(257);
  const PlaneWaveBasis basis(1, 32);
  const std::vector<double> rhos = {0.4, 0.2, 0.1, 0.05};
  const ZeroRhoReport rep = zero_rho_consistency(A, basis, rhos, 0.15, 2.0);
  CHECK(rep.varkappa > 0.0);
  CHECK(rep.chiB_h2 > 0.0);
  CHECK(std::isfinite(rep.fitted_C_zero));
  REQUIRE(rep.diffs.size() == rhos.size());
  // the small-rho corrector approaches the rho = 0 corrector monotonically
  for (size_t i = 1; i < rep.diffs.size(); ++i) {
    const double di = grad_diff_norm(basis, solve_cell(A, basis, rhos[i]).chi[0],
                                     solve_cell(A, basis, 0.0).chi[0]);
    const double dprev =
        grad_diff_norm(basis, solve_cell(A, basis, rhos[i - 1]).chi[0],
                       solve_cell(A, basis, 0.0).chi[0]);
    CHECK(di <= dprev + 1e-12);
  }
  for (double c : rep.fitted_C) CHECK(std::isfinite(c));
}

TEST_CASE("corrector energies stay bounded across the rho range") {
  const PeriodicCoefficient A = laminate14();
  const PlaneWaveBasis basis(1, 32);
  double emin = 1e300, emax = 0.0;
  for (double rho : {0.1, 1.0, 8.0, 64.0}) {
    const CorrectorSet set = solve_cell(A, basis, rho);
    const double e = set.energies(0, 0) + set.energies(0, 1);
    emin = std::min(emin, e);
    emax = std::max(emax, e);
  }
  CHECK(emax / emin < 50.0);
}

TEST_CASE("corrector CSV dumps are deterministic and complete") {
  const PeriodicCoefficient A = smooth1d();
  const PlaneWaveBasis basis(1, 8);
  const CorrectorSet set = solve_cell(A, basis, 1.0);
  write_corrector_csv("corr_test.csv", basis, set);
  write_corrector_energies("corr_energy_test.csv", set);
  std::ifstream f("corr_test.csv");
  REQUIRE(f.good());
  std::string header;
  std::getline(f, header);
  CHECK(header == "j,n_1,re,im");
  int rows = 0;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) ++rows;
  CHECK(rows == basis.size());
  std::ifstream g("corr_energy_test.csv");
  std::getline(g, header);
  CHECK(header == "j,rho_lap,h1,rho2_grad3");
  std::remove("corr_test.csv");
  std::remove("corr_energy_test.csv");
}
