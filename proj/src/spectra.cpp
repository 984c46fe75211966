#include "blochhom/spectra.hpp"

#include <cmath>
#include <cstdio>

namespace blochhom {

FiberSolution solve_fiber(const FiberOperator& F, int M) {
  if (M > F.basis.size())
    throw BadDimension("solve_fiber: more modes than basis vectors");
  EigenResult r = smallest_eigenpairs(F.matrix, M);
  return FiberSolution{std::move(r.lambdas), std::move(r.vectors)};
}

GaugeFixedEigenfunction gauge_fix(const Eigen::VectorXcd& vec, int d) {
  const Complex c0 = vec[0];
  const double nrm = vec.norm();
  if (nrm == 0.0 || std::abs(c0) < 1e-8 * nrm)
    throw DegenerateGauge("gauge_fix: constant-mode amplitude too small");
  const double target = std::pow(kTwoPi, -0.5 * d);
  GaugeFixedEigenfunction out;
  out.coeffs = vec * (target / c0);
  out.normalization_residual = std::abs(out.coeffs[0] - Complex(target, 0.0));
  return out;
}

namespace {

BlochBand sweepImpl(const PeriodicCoefficient& A, const PlaneWaveBasis& basis,
                    double rho, const std::vector<Eigen::VectorXd>& etas, int M,
                    bool parallel) {
  const int Q = static_cast<int>(etas.size());
  if (Q == 0) throw ConfigInvalid("band_sweep: empty eta grid");
  BlochBand band;
  band.rho = rho;
  band.modes = M;
  band.etas = etas;
  band.lambdas.resize(Q, M);
  band.eigvecs.resize(Q);
  band.gauge_residuals.resize(Q, M);
  const double target = std::pow(kTwoPi, -0.5 * basis.dim());

  std::vector<std::string> errors(Q);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int q = 0; q < Q; ++q) {
    try {
      FiberOperator F = assemble_fiber_serial(A, basis, rho, etas[q]);
      FiberSolution sol = solve_fiber(F, M);
      band.lambdas.row(q) = sol.lambdas.transpose();
      for (int m = 0; m < M; ++m) {
        if (m == 0) {
          try {
            GaugeFixedEigenfunction g = gauge_fix(sol.vectors.col(0), basis.dim());
            sol.vectors.col(0) = g.coeffs;  // mean-pinned; norm re-reported only
          } catch (const DegenerateGauge&) {
            // keep the phase-fixed unit vector; residual records the miss
          }
        }
        band.gauge_residuals(q, m) =
            std::abs(sol.vectors.col(m)[0] - Complex(target, 0.0));
      }
      band.eigvecs[q] = std::move(sol.vectors);
    } catch (const Error& e) {
      errors[q] = e.what();
    }
  }
  for (const auto& msg : errors)
    if (!msg.empty()) throw EigensolverFailure("band_sweep: " + msg);

  double lip = 0.0;
  for (int q = 0; q + 1 < Q; ++q) {
    const double de = (etas[q + 1] - etas[q]).norm();
    if (de <= 0) continue;
    for (int m = 0; m < M; ++m)
      lip = std::max(lip,
                     std::abs(band.lambdas(q + 1, m) - band.lambdas(q, m)) / de);
  }
  band.lipschitz_ratio = lip;
  return band;
}

}  // namespace

BlochBand band_sweep(const PeriodicCoefficient& A, const PlaneWaveBasis& basis,
                     double rho, const std::vector<Eigen::VectorXd>& etas,
                     int M) {
  return sweepImpl(A, basis, rho, etas, M, true);
}

BlochBand band_sweep_serial(const PeriodicCoefficient& A,
                            const PlaneWaveBasis& basis, double rho,
                            const std::vector<Eigen::VectorXd>& etas, int M) {
  return sweepImpl(A, basis, rho, etas, M, false);
}

void write_band_csv(const std::string& path, const BlochBand& band, int dim) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("write_band_csv: cannot open " + path);
  for (int a = 0; a < dim; ++a) std::fprintf(f, "eta_%d,", a + 1);
  std::fprintf(f, "m,lambda,gauge_residual\n");
  for (size_t q = 0; q < band.etas.size(); ++q)
    for (int m = 0; m < band.modes; ++m) {
      for (int a = 0; a < dim; ++a)
        std::fprintf(f, "%.12e,", band.etas[q][a]);
      std::fprintf(f, "%d,%.12e,%.12e\n", m + 1, band.lambdas(q, m),
                   band.gauge_residuals(q, m));
    }
  std::fclose(f);
}

std::vector<Eigen::VectorXd> eta_line(int dim, int count) {
  if (count < 1) throw ConfigInvalid("eta_line: count must be >= 1");
  std::vector<Eigen::VectorXd> etas;
  etas.reserve(count);
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e[0] = -0.5 + static_cast<double>(i) / count;
    etas.push_back(e);
  }
  return etas;
}

}  // namespace blochhom
