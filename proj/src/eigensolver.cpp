#include "blochhom/eigensolver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <random>

namespace blochhom {

namespace {

constexpr int kDenseLimit = 512;
constexpr double kResidualTol = 1e-8;  // times (1 + |lambda|)

double rayleigh(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& v) {
  return (v.adjoint() * H * v)(0, 0).real();
}

void fixPhase(Eigen::VectorXcd& v) {
  int imax = 0;
  double best = -1.0;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best + 1e-15) {
      best = a;
      imax = i;
    }
  }
  if (best > 0) v *= std::conj(v[imax]) / std::abs(v[imax]);
}

// Shifted inverse iteration to drive the residual of one pair below target.
// prior columns (already accepted) are projected out to keep the returned
// block orthonormal through degenerate clusters.
void polish(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& prior,
            double& lambda, Eigen::VectorXcd& v) {
  for (int it = 0; it < 6; ++it) {
    const double resid = (H * v - lambda * v).norm();
    if (resid <= 0.25 * kResidualTol * (1.0 + std::abs(lambda))) return;
    const double shift = lambda + 1e-12 * (1.0 + std::abs(lambda));
    Eigen::MatrixXcd A = H;
    A.diagonal().array() -= shift;
    Eigen::VectorXcd w = Eigen::PartialPivLU<Eigen::MatrixXcd>(A).solve(v);
    if (!w.allFinite() || w.norm() == 0.0) return;
    if (prior.cols() > 0) w -= prior * (prior.adjoint() * w);
    const double nrm = w.norm();
    if (nrm == 0.0) return;
    v = w / nrm;
    lambda = rayleigh(H, v);
  }
}

EigenResult finalize(const Eigen::MatrixXcd& H, Eigen::MatrixXcd V, int M) {
  EigenResult out;
  out.lambdas.resize(M);
  out.vectors.resize(H.rows(), M);
  Eigen::MatrixXcd accepted(H.rows(), 0);
  // Rayleigh quotients can reorder near-degenerate pairs; process in RQ order.
  std::vector<std::pair<double, int>> order(M);
  for (int i = 0; i < M; ++i) order[i] = {rayleigh(H, V.col(i)), i};
  std::sort(order.begin(), order.end());
  for (int i = 0; i < M; ++i) {
    Eigen::VectorXcd v = V.col(order[i].second);
    double lambda = order[i].first;
    if ((H * v - lambda * v).norm() > 0.25 * kResidualTol * (1.0 + std::abs(lambda)))
      polish(H, accepted, lambda, v);
    if ((H * v - lambda * v).norm() > kResidualTol * (1.0 + std::abs(lambda)))
      throw EigensolverFailure("residual target missed for pair " +
                               std::to_string(i));
    fixPhase(v);
    out.lambdas[i] = lambda;
    out.vectors.col(i) = v;
    accepted.conservativeResize(Eigen::NoChange, i + 1);
    accepted.col(i) = v;
  }
  // Re-sort ascending in case polishing nudged a cluster.
  std::vector<int> idx(M);
  for (int i = 0; i < M; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return out.lambdas[a] < out.lambdas[b]; });
  EigenResult sorted;
  sorted.lambdas.resize(M);
  sorted.vectors.resize(H.rows(), M);
  for (int i = 0; i < M; ++i) {
    sorted.lambdas[i] = out.lambdas[idx[i]];
    sorted.vectors.col(i) = out.vectors.col(idx[i]);
  }
  return sorted;
}

EigenResult denseSolve(const Eigen::MatrixXcd& H, int M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success)
    throw EigensolverFailure("dense Hermitian eigensolve failed");
  return finalize(H, es.eigenvectors().leftCols(M), M);
}

EigenResult subspaceSolve(const Eigen::MatrixXcd& H, int M) {
  const int S = static_cast<int>(H.rows());
  const int B = std::min(S, M + 4);
  const double sigma = 0.1;
  Eigen::MatrixXcd A = H;
  A.diagonal().array() += sigma;
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw EigensolverFailure("LDLT of shifted fiber failed");

  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd X(S, B);
  for (int j = 0; j < B; ++j)
    for (int i = 0; i < S; ++i) X(i, j) = Complex(gauss(rng), gauss(rng));

  for (int it = 0; it < 300; ++it) {
    X = ldlt.solve(X);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(X);
    X = qr.householderQ() * Eigen::MatrixXcd::Identity(S, B);
    const Eigen::MatrixXcd T = X.adjoint() * H * X;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T);
    X = X * es.eigenvectors();
    bool converged = true;
    for (int j = 0; j < M; ++j) {
      const double lam = es.eigenvalues()[j];
      if ((H * X.col(j) - lam * X.col(j)).norm() >
          0.2 * kResidualTol * (1.0 + std::abs(lam))) {
        converged = false;
        break;
      }
    }
    if (converged) return finalize(H, X.leftCols(M), M);
  }
  throw EigensolverFailure("subspace iteration did not converge");
}

}  // namespace

EigenResult smallest_eigenpairs(const Eigen::MatrixXcd& H, int M) {
  const int S = static_cast<int>(H.rows());
  if (M < 1 || M > S) throw BadDimension("smallest_eigenpairs: bad mode count");
  if (S <= kDenseLimit || M > S / 4) return denseSolve(H, M);
  return subspaceSolve(H, M);
}

}  // namespace blochhom
