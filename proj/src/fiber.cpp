#include "blochhom/fiber.hpp"

#include <cstdint>
#include <cstdio>
#include <random>

namespace blochhom {

namespace {

void checkEta(const Eigen::VectorXd& eta, int dim) {
  if (eta.size() != dim) throw BadDimension("fiber: eta has wrong length");
  if (eta.cwiseAbs().maxCoeff() > 0.5 + 1e-15)
    throw EtaOutOfCell("fiber: |eta|_inf must be <= 1/2");
}

Complex entryAt(const PeriodicCoefficient& A, const PlaneWaveBasis& basis,
                double rho, const Eigen::VectorXd& eta, int m, int n) {
  const IndexVec& im = basis.index(m);
  const IndexVec& in = basis.index(n);
  const Eigen::VectorXd pm = im.cast<double>() + eta;
  const Eigen::VectorXd pn = in.cast<double>() + eta;
  const Eigen::MatrixXcd Ahat = A.fourierAt(im - in);
  Complex v = (pm.cast<Complex>().transpose() * Ahat * pn.cast<Complex>())(0, 0);
  if (m == n) {
    const double s2 = pn.squaredNorm();
    v += rho * rho * s2 * s2;
  }
  return v;
}

FiberOperator assembleImpl(const PeriodicCoefficient& A,
                           const PlaneWaveBasis& basis, double rho,
                           const Eigen::VectorXd& eta, bool parallel) {
  if (basis.dim() != A.dim()) throw BadDimension("fiber: basis/coefficient dim");
  if (rho < 0.0) throw ConfigInvalid("fiber: rho must be >= 0");
  checkEta(eta, A.dim());
  const int S = basis.size();
  Eigen::MatrixXcd H(S, S);
#pragma omp parallel for schedule(static) if (parallel)
  for (int m = 0; m < S; ++m)
    for (int n = 0; n < S; ++n) H(m, n) = entryAt(A, basis, rho, eta, m, n);
  const bool flagged = A.bandwidth() < 0 || A.bandwidth() > 2 * basis.truncation();
  return FiberOperator{basis,       rho,       eta, std::move(H),
                       garding_constant(A, rho), A.alpha(), flagged};
}

}  // namespace

double garding_constant(const PeriodicCoefficient& A, double rho) {
  const double sup = A.supNorm();
  const double alpha = A.alpha();
  const double c1 = 2.0 * sup;
  const double c2 = 2.0 * c1 / alpha;
  const double c4 = sup * A.dim() / 4.0;
  return 0.5 * alpha + c1 * c2 + c4 + 16.0 * rho * rho;
}

FiberOperator assemble_fiber(const PeriodicCoefficient& A,
                             const PlaneWaveBasis& basis, double rho,
                             const Eigen::VectorXd& eta) {
  return assembleImpl(A, basis, rho, eta, true);
}

FiberOperator assemble_fiber_serial(const PeriodicCoefficient& A,
                                    const PlaneWaveBasis& basis, double rho,
                                    const Eigen::VectorXd& eta) {
  return assembleImpl(A, basis, rho, eta, false);
}

GardingReport garding_check(const FiberOperator& F, int trials,
                            unsigned long long seed) {
  if (trials < 1) throw ConfigInvalid("garding_check: trials must be >= 1");
  const int S = F.basis.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double min_slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd u(S);
    for (int i = 0; i < S; ++i) u[i] = Complex(gauss(rng), gauss(rng));
    u.normalize();
    const double form = (u.adjoint() * F.matrix * u)(0, 0).real();
    double bih = 0.0, h1 = 0.0;
    for (int i = 0; i < S; ++i) {
      const double n2 = F.basis.index(i).cast<double>().squaredNorm();
      const double w = std::norm(u[i]);
      bih += n2 * n2 * w;
      h1 += (1.0 + n2) * w;
    }
    const double slack = form + F.garding_constant -
                         (F.rho * F.rho / 6.0) * bih - 0.5 * F.alpha * h1;
    min_slack = std::min(min_slack, slack);
  }
  if (min_slack < -1e-9)
    throw GardingViolation("garding_check: slack " + std::to_string(min_slack));
  return GardingReport{min_slack, trials};
}

Eigen::MatrixXcd eta_derivative_matrix(const PeriodicCoefficient& A,
                                       const PlaneWaveBasis& basis, double rho,
                                       const std::vector<int>& dirs) {
  const int d = A.dim();
  const int order = static_cast<int>(dirs.size());
  if (order < 1 || order > 4)
    throw BadDimension("eta_derivative_matrix: order must be 1..4");
  for (int a : dirs)
    if (a < 0 || a >= d) throw BadDimension("eta_derivative_matrix: bad dir");
  const int S = basis.size();
  const double r2 = rho * rho;
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(S, S);
  auto kron = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (int m = 0; m < S; ++m) {
    const IndexVec& im = basis.index(m);
    for (int n = 0; n < S; ++n) {
      const IndexVec& in = basis.index(n);
      Complex v(0.0, 0.0);
      if (order <= 2) {
        const Eigen::MatrixXcd Ahat = A.fourierAt(im - in);
        if (order == 1) {
          const int j = dirs[0];
          v += (Ahat.row(j) * in.cast<Complex>())(0, 0);
          v += (im.cast<Complex>().transpose() * Ahat.col(j))(0, 0);
        } else {
          const int j = dirs[0], k = dirs[1];
          v += Ahat(j, k) + Ahat(k, j);
        }
      }
      if (m == n) {
        const Eigen::VectorXd p = in.cast<double>();
        const double p2 = p.squaredNorm();
        switch (order) {
          case 1:
            v += r2 * 4.0 * p2 * p[dirs[0]];
            break;
          case 2: {
            const int j = dirs[0], k = dirs[1];
            v += r2 * (8.0 * p[j] * p[k] + 4.0 * p2 * kron(j, k));
            break;
          }
          case 3: {
            const int j = dirs[0], k = dirs[1], l = dirs[2];
            v += r2 * 8.0 *
                 (kron(j, k) * p[l] + kron(j, l) * p[k] + kron(k, l) * p[j]);
            break;
          }
          case 4: {
            const int j = dirs[0], k = dirs[1], l = dirs[2], w = dirs[3];
            v += r2 * 8.0 *
                 (kron(j, k) * kron(l, w) + kron(j, l) * kron(k, w) +
                  kron(j, w) * kron(k, l));
            break;
          }
        }
      }
      D(m, n) = v;
    }
  }
  return D;
}

void dump_fiber(const std::string& path, const FiberOperator& F) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw Error("dump_fiber: cannot open " + path);
  const std::int32_t d = F.basis.dim();
  const std::int32_t N = F.basis.truncation();
  std::fwrite(&d, sizeof d, 1, f);
  std::fwrite(&N, sizeof N, 1, f);
  std::fwrite(&F.rho, sizeof(double), 1, f);
  std::fwrite(F.eta.data(), sizeof(double), d, f);
  const int S = F.basis.size();
  for (int m = 0; m < S; ++m)
    for (int n = 0; n < S; ++n) {
      const double re = F.matrix(m, n).real();
      const double im = F.matrix(m, n).imag();
      std::fwrite(&re, sizeof re, 1, f);
      std::fwrite(&im, sizeof im, 1, f);
    }
  std::fclose(f);
}

}  // namespace blochhom
