#include "blochhom/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>

#include "blochhom/fit.hpp"

namespace blochhom {

namespace {

HomogenizedTensor finish(Eigen::MatrixXd raw, std::string route, double rho,
                         std::string regime) {
  HomogenizedTensor t;
  t.symmetry_defect = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  t.matrix = 0.5 * (raw + raw.transpose());
  t.route = std::move(route);
  t.rho = rho;
  t.regime = std::move(regime);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.matrix,
                                                    Eigen::EigenvaluesOnly);
  t.min_eigenvalue = es.eigenvalues().minCoeff();
  return t;
}

double lambda1(const PeriodicCoefficient& A, const PlaneWaveBasis& basis,
               double rho, const Eigen::VectorXd& eta) {
  const FiberOperator F = assemble_fiber(A, basis, rho, eta);
  return solve_fiber(F, 1).lambdas[0];
}

// Raw Hessian of lambda_1 at 0 with step h.
Eigen::MatrixXd hessianAt(const PeriodicCoefficient& A,
                          const PlaneWaveBasis& basis, double rho, double h) {
  const int d = A.dim();
  Eigen::MatrixXd D(d, d);
  const double l0 = lambda1(A, basis, rho, Eigen::VectorXd::Zero(d));
  auto at = [&](const Eigen::VectorXd& e) { return lambda1(A, basis, rho, e); };
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[k] = h;
    D(k, k) = (at(e) - 2.0 * l0 + at(-e)) / (h * h);
  }
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      Eigen::VectorXd pp = Eigen::VectorXd::Zero(d), pm = pp;
      pp[k] = h;
      pp[l] = h;
      pm[k] = h;
      pm[l] = -h;
      const double v =
          (at(pp) + at(-pp) - at(pm) - at(-pm)) / (4.0 * h * h);
      D(k, l) = D(l, k) = v;
    }
  return D;
}

}  // namespace

HomogenizedTensor tensor_from_cell(const PeriodicCoefficient& A,
                                   const PlaneWaveBasis& basis, double rho) {
  const int d = A.dim();
  const CorrectorSet set = solve_cell(A, basis, rho);
  Eigen::MatrixXd raw = A.meanMatrix();
  for (int l = 0; l < d; ++l) {
    for (int i = 0; i < basis.size(); ++i) {
      const IndexVec& n = basis.index(i);
      // M_Y( A grad chi_l )_k = sum_n [ Ahat(-n) (i n) chihat_l(n) ]_k
      const Eigen::MatrixXcd Am = A.fourierAt(-n);
      const Eigen::VectorXcd gn =
          Complex(0.0, 1.0) * n.cast<double>().cast<Complex>() * set.chi[l][i];
      const Eigen::VectorXcd contrib = Am * gn;
      for (int k = 0; k < d; ++k) raw(k, l) += contrib[k].real();
    }
  }
  return finish(std::move(raw), "cell-average", rho, "");
}

HomogenizedTensor tensor_from_hessian(const PeriodicCoefficient& A,
                                      const PlaneWaveBasis& basis, double rho,
                                      double h) {
  const Eigen::MatrixXd Dh = hessianAt(A, basis, rho, h);
  const Eigen::MatrixXd Dh2 = hessianAt(A, basis, rho, 0.5 * h);
  const double scale = std::max(Dh2.cwiseAbs().maxCoeff(), 1e-12);
  if ((Dh - Dh2).cwiseAbs().maxCoeff() > 1e-4 * scale)
    throw StepTooLarge("tensor_from_hessian: h and h/2 disagree beyond 1e-4");
  const Eigen::MatrixXd richardson = (4.0 * Dh2 - Dh) / 3.0;
  return finish(0.5 * richardson, "bloch-hessian", rho, "");
}

double first_derivative_magnitude(const PeriodicCoefficient& A,
                                  const PlaneWaveBasis& basis, double rho,
                                  double h) {
  const int d = A.dim();
  double worst = 0.0;
  for (int l = 0; l < d; ++l) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[l] = h;
    const double der =
        (lambda1(A, basis, rho, e) - lambda1(A, basis, rho, -e)) / (2.0 * h);
    worst = std::max(worst, std::abs(der));
  }
  return worst;
}

HomogenizedTensor regime_tensor(const PeriodicCoefficient& A,
                                const PlaneWaveBasis& basis, Regime regime,
                                double theta) {
  switch (regime) {
    case Regime::Infinity:
      return finish(A.meanMatrix(), "regime-limit",
                    std::numeric_limits<double>::infinity(), "infinity");
    case Regime::Theta: {
      if (theta <= 0.0) throw ConfigInvalid("regime_tensor: theta must be > 0");
      HomogenizedTensor t = tensor_from_cell(A, basis, theta);
      t.route = "regime-limit";
      t.regime = "theta";
      return t;
    }
    case Regime::Zero: {
      if (A.dim() == 1) {
        // In one dimension the rho=0 effective value is the reciprocal of
        // M_Y(1/a), available in closed form for piecewise-constant fields
        // and by spectrally accurate quadrature otherwise. Truncated
        // Galerkin converges only like 1/N on discontinuous data, so the
        // exact value is used here.
        double mean_inv;
        if (A.kind() == PeriodicCoefficient::Kind::Laminate) {
          const double f = A.laminateFraction();
          mean_inv = f / A.laminateA1() + (1.0 - f) / A.laminateA2();
        } else {
          const int nq = 8192;
          double acc = 0.0;
          for (int p = 0; p < nq; ++p) {
            Eigen::VectorXd y(1);
            y[0] = kTwoPi * (p + 0.5) / nq;
            acc += 1.0 / A.valueAt(y)(0, 0);
          }
          mean_inv = acc / nq;
        }
        Eigen::MatrixXd m(1, 1);
        m(0, 0) = 1.0 / mean_inv;
        HomogenizedTensor t = finish(std::move(m), "regime-limit", 0.0, "zero");
        return t;
      }
      HomogenizedTensor t = tensor_from_cell(A, basis, 0.0);
      t.route = "regime-limit";
      t.regime = "zero";
      return t;
    }
  }
  throw ConfigInvalid("regime_tensor: unknown regime");
}

StabilityReport stability_sweep(const PeriodicCoefficient& A,
                                const PlaneWaveBasis& basis,
                                const std::vector<double>& rho_list) {
  if (rho_list.size() < 2)
    throw ConfigInvalid("stability_sweep: need at least two rho values");
  StabilityReport rep;
  const Eigen::MatrixXd mean = A.meanMatrix();
  double min_rho = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd at_min;
  for (double rho : rho_list) {
    const HomogenizedTensor t = tensor_from_cell(A, basis, rho);
    rep.rhos.push_back(rho);
    rep.dist_to_mean.push_back((t.matrix - mean).norm());
    if (rho < min_rho) {
      min_rho = rho;
      at_min = t.matrix;
    }
  }
  const HomogenizedTensor t0 = tensor_from_cell(A, basis, 0.0);
  rep.small_rho_diff = (at_min - t0.matrix).norm();

  const double top = *std::max_element(rep.rhos.begin(), rep.rhos.end());
  std::vector<double> xs, ys;
  for (size_t i = 0; i < rep.rhos.size(); ++i)
    if (rep.rhos[i] >= top / 16.0 && rep.dist_to_mean[i] > 0) {
      xs.push_back(rep.rhos[i]);
      ys.push_back(rep.dist_to_mean[i]);
    }
  rep.large_rho_slope = xs.size() >= 2 ? fit_loglog_slope(xs, ys) : 0.0;
  return rep;
}

void write_tensor_csv(const std::string& path,
                      const std::vector<HomogenizedTensor>& tensors) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("write_tensor_csv: cannot open " + path);
  std::fprintf(f, "route,rho,k,l,value\n");
  for (const auto& t : tensors)
    for (int k = 0; k < t.matrix.rows(); ++k)
      for (int l = 0; l < t.matrix.cols(); ++l)
        std::fprintf(f, "%s,%.12e,%d,%d,%.12e\n", t.route.c_str(), t.rho, k + 1,
                     l + 1, t.matrix(k, l));
  std::fclose(f);
}

}  // namespace blochhom
