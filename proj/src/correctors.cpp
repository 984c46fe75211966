#include "blochhom/correctors.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <cstdio>

namespace blochhom {

namespace {

double weightedNorm(const PlaneWaveBasis& basis, const Eigen::VectorXcd& c,
                    int power, bool plus_one) {
  double acc = 0.0;
  for (int i = 0; i < basis.size(); ++i) {
    const double n2 = basis.index(i).cast<double>().squaredNorm();
    const double base = plus_one ? 1.0 + n2 : n2;
    acc += std::pow(base, power) * std::norm(c[i]);
  }
  return std::sqrt(acc);
}

}  // namespace

CorrectorSet solve_cell(const PeriodicCoefficient& A,
                        const PlaneWaveBasis& basis, double rho) {
  const int d = A.dim();
  const int S = basis.size();
  const FiberOperator F =
      assemble_fiber(A, basis, rho, Eigen::VectorXd::Zero(d));
  const Eigen::MatrixXcd Hred = F.matrix.block(1, 1, S - 1, S - 1);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(Hred);
  if (ldlt.info() != Eigen::Success)
    throw SingularSystem("solve_cell: factorization of the cell matrix failed");

  CorrectorSet set;
  set.rho = rho;
  set.energies.resize(d, 3);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXcd rhs(S - 1);
    for (int m = 1; m < S; ++m) {
      const IndexVec& km = basis.index(m);
      const Eigen::MatrixXcd Ahat = A.fourierAt(km);
      Complex v(0.0, 0.0);
      for (int a = 0; a < d; ++a) v += double(km[a]) * Ahat(a, j);
      rhs[m - 1] = Complex(0.0, 1.0) * v;
    }
    Eigen::VectorXcd x = ldlt.solve(rhs);
    if (!x.allFinite())
      throw SingularSystem("solve_cell: non-finite corrector solution");
    Eigen::VectorXcd chi = Eigen::VectorXcd::Zero(S);
    chi.tail(S - 1) = x;
    set.energies(j, 0) = rho * weightedNorm(basis, chi, 2, false);
    set.energies(j, 1) = weightedNorm(basis, chi, 1, true);
    set.energies(j, 2) = rho * rho * weightedNorm(basis, chi, 3, false);
    set.chi.push_back(std::move(chi));
  }
  return set;
}

double grad_diff_norm(const PlaneWaveBasis& basis, const Eigen::VectorXcd& u,
                      const Eigen::VectorXcd& v) {
  return weightedNorm(basis, u - v, 1, false);
}

RhoStabilityReport corrector_rho_stability(const PeriodicCoefficient& A,
                                           const PlaneWaveBasis& basis,
                                           double rho1, double rho2) {
  if (rho1 <= 0.0 || rho2 <= 0.0)
    throw ConfigInvalid("corrector_rho_stability: rho values must be positive");
  const CorrectorSet s1 = solve_cell(A, basis, rho1);
  const CorrectorSet s2 = solve_cell(A, basis, rho2);
  double diff = 0.0;
  for (int j = 0; j < A.dim(); ++j)
    diff = std::max(diff, grad_diff_norm(basis, s1.chi[j], s2.chi[j]));
  const double scale = std::abs(1.0 - (rho1 / rho2) * (rho1 / rho2));
  const double fitted = scale > 0.0 ? diff / scale : 0.0;
  if (!std::isfinite(fitted))
    throw Error("corrector_rho_stability: non-finite fitted constant");
  return RhoStabilityReport{diff, scale, fitted};
}

MollifiedCoefficient mollify(const PeriodicCoefficient& A, double width,
                             double q) {
  if (width <= 0.0) throw ConfigInvalid("mollify: width must be positive");
  if (q <= 1.0) throw ConfigInvalid("mollify: q must exceed 1");
  const int d = A.dim();
  const int K = static_cast<int>(std::ceil(1.0 / width));

  PeriodicCoefficient::FourierMap map;
  std::vector<int> k(d, -K);
  while (true) {
    double w = 1.0;
    for (int a = 0; a < d; ++a) w *= 1.0 - std::abs(k[a]) / (K + 1.0);
    IndexVec kv(d);
    for (int a = 0; a < d; ++a) kv[a] = k[a];
    const Eigen::MatrixXcd c = A.fourierAt(kv) * w;
    if (c.cwiseAbs().maxCoeff() > 1e-16) map[k] = c;
    int a = d - 1;
    while (a >= 0 && k[a] == K) k[a--] = -K;
    if (a < 0) break;
    ++k[a];
  }
  PeriodicCoefficient B = PeriodicCoefficient::fromFourier(
      d, A.grid().nPerAxis(), map, PeriodicCoefficient::Kind::Trig);

  // Quadrature of the achieved L^q distance on a fine grid with exact values.
  const int nq = (d == 1) ? 8192 : 128;
  double acc = 0.0;
  std::vector<int> idx(d, 0);
  int total = 1;
  for (int a = 0; a < d; ++a) total *= nq;
  for (int p = 0; p < total; ++p) {
    int rem = p;
    Eigen::VectorXd y(d);
    for (int a = d - 1; a >= 0; --a) {
      y[a] = kTwoPi * ((rem % nq) + 0.5) / nq;
      rem /= nq;
    }
    acc += std::pow((A.valueAt(y) - B.valueAt(y)).norm(), q);
  }
  const double achieved = std::pow(acc / total, 1.0 / q);
  return MollifiedCoefficient{std::move(B), width, achieved, q};
}

ZeroRhoReport zero_rho_consistency(const PeriodicCoefficient& A,
                                   const PlaneWaveBasis& basis,
                                   const std::vector<double>& rho_list,
                                   double width, double q) {
  const int d = A.dim();
  MollifiedCoefficient mol = mollify(A, width, q);
  const CorrectorSet chiB = solve_cell(mol.B, basis, 0.0);
  const CorrectorSet chi0 = solve_cell(A, basis, 0.0);

  ZeroRhoReport rep;
  rep.varkappa = mol.achieved;
  rep.chiB_h2 = 0.0;
  for (int j = 0; j < d; ++j)
    rep.chiB_h2 = std::max(rep.chiB_h2,
                           weightedNorm(basis, chiB.chi[j], 2, true));
  rep.diff_zero = 0.0;
  for (int j = 0; j < d; ++j)
    rep.diff_zero =
        std::max(rep.diff_zero, grad_diff_norm(basis, chi0.chi[j], chiB.chi[j]));
  rep.fitted_C_zero = rep.varkappa > 0 ? rep.diff_zero / rep.varkappa : 0.0;

  for (double rho : rho_list) {
    const CorrectorSet chiR = solve_cell(A, basis, rho);
    double diff = 0.0;
    for (int j = 0; j < d; ++j)
      diff = std::max(diff, grad_diff_norm(basis, chiR.chi[j], chiB.chi[j]));
    rep.rhos.push_back(rho);
    rep.diffs.push_back(diff);
    rep.fitted_C.push_back(diff / (rho * rep.chiB_h2 + rep.varkappa));
  }
  return rep;
}

void write_corrector_csv(const std::string& path, const PlaneWaveBasis& basis,
                         const CorrectorSet& set) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("write_corrector_csv: cannot open " + path);
  std::fprintf(f, "j");
  for (int a = 0; a < basis.dim(); ++a) std::fprintf(f, ",n_%d", a + 1);
  std::fprintf(f, ",re,im\n");
  for (size_t j = 0; j < set.chi.size(); ++j)
    for (int i = 0; i < basis.size(); ++i) {
      std::fprintf(f, "%zu", j + 1);
      for (int a = 0; a < basis.dim(); ++a)
        std::fprintf(f, ",%d", basis.index(i)[a]);
      std::fprintf(f, ",%.12e,%.12e\n", set.chi[j][i].real(),
                   set.chi[j][i].imag());
    }
  std::fclose(f);
}

void write_corrector_energies(const std::string& path,
                              const CorrectorSet& set) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("write_corrector_energies: cannot open " + path);
  std::fprintf(f, "j,rho_lap,h1,rho2_grad3\n");
  for (int j = 0; j < set.energies.rows(); ++j)
    std::fprintf(f, "%d,%.12e,%.12e,%.12e\n", j + 1, set.energies(j, 0),
                 set.energies(j, 1), set.energies(j, 2));
  std::fclose(f);
}

}  // namespace blochhom
