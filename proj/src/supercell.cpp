#include "blochhom/supercell.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <cstdio>
#include <map>

#include "blochhom/fit.hpp"

namespace blochhom {

namespace {

int floorHalf(int M) { return M / 2; }  // lower fiber offset

// q = n*M + r with r in {-floor(M/2) .. ceil(M/2)-1}
void splitGlobal(int k, int M, int* n, int* r) {
  const int lo = -floorHalf(M);
  int rr = ((k % M) + M) % M;               // 0..M-1
  if (rr >= M + lo) rr -= M;                // shift into the half-open window
  // rr now in {lo .. M+lo-1} = {-floor(M/2) .. ceil(M/2)-1}
  *r = rr;
  *n = (k - rr) / M;
}

void requireUnitDomain(const SupercellProblem& P, const char* who) {
  if (std::abs(P.epsilon * P.M - 1.0) > 1e-9)
    throw IncommensurateGrid(std::string(who) +
                             ": requires eps * M == 1 (domain [0,2pi)^d)");
}

}  // namespace

int SupercellProblem::numFibers() const {
  int f = 1;
  for (int a = 0; a < dim(); ++a) f *= M;
  return f;
}

IndexVec SupercellProblem::fiberIndex(int qflat) const {
  IndexVec q(dim());
  for (int a = dim() - 1; a >= 0; --a) {
    q[a] = (qflat % M) - floorHalf(M);
    qflat /= M;
  }
  return q;
}

int SupercellProblem::fiberFlat(const IndexVec& q) const {
  int p = 0;
  for (int a = 0; a < dim(); ++a) {
    const int digit = q[a] + floorHalf(M);
    if (digit < 0 || digit >= M)
      throw BadDimension("fiberFlat: index outside the fiber grid");
    p = p * M + digit;
  }
  return p;
}

Eigen::VectorXd SupercellProblem::etaOf(int qflat) const {
  return fiberIndex(qflat).cast<double>() / M;
}

SupercellProblem make_supercell(const PeriodicCoefficient& A, double epsilon,
                                int M, double kappa, int truncation) {
  if (epsilon <= 0 || M < 1) throw ConfigInvalid("make_supercell: bad scales");
  if (kappa < 0) throw ConfigInvalid("make_supercell: kappa must be >= 0");
  return SupercellProblem{epsilon, M, kappa, A,
                          PlaneWaveBasis(A.dim(), truncation)};
}

SupercellField zero_field(const SupercellProblem& P) {
  return SupercellField(P.numFibers(),
                        Eigen::VectorXcd::Zero(P.basis.size()));
}

SupercellField field_from_global_modes(
    const SupercellProblem& P,
    const std::vector<std::pair<IndexVec, Complex>>& modes) {
  requireUnitDomain(P, "field_from_global_modes");
  SupercellField g = zero_field(P);
  const int d = P.dim();
  for (const auto& [k, c] : modes) {
    IndexVec n(d), q(d);
    for (int a = 0; a < d; ++a) splitGlobal(k[a], P.M, &n[a], &q[a]);
    if (n.cwiseAbs().maxCoeff() > P.basis.truncation())
      throw BadDimension("field_from_global_modes: frequency outside basis");
    g[P.fiberFlat(q)][P.basis.position(n)] += c;
  }
  return g;
}

double field_l2(const SupercellProblem& P, const SupercellField& g) {
  double acc = 0.0;
  for (const auto& v : g) acc += v.squaredNorm();
  return std::sqrt(P.volume() * acc);
}

Complex field_inner(const SupercellProblem& P, const SupercellField& f,
                    const SupercellField& g) {
  Complex acc(0.0, 0.0);
  for (size_t q = 0; q < f.size(); ++q)
    acc += (g[q].adjoint() * f[q])(0, 0);
  return P.volume() * acc;
}

SupercellSpectra fiber_spectra(const SupercellProblem& P, int modes) {
  const int Q = P.numFibers();
  SupercellSpectra S;
  S.modes = modes;
  S.lambdas.resize(Q);
  S.vectors.resize(Q);
  std::vector<std::string> errors(Q);
#pragma omp parallel for schedule(dynamic)
  for (int q = 0; q < Q; ++q) {
    try {
      const FiberOperator F =
          assemble_fiber_serial(P.A, P.basis, P.rho(), P.etaOf(q));
      EigenResult r = smallest_eigenpairs(F.matrix, modes);
      S.lambdas[q] = std::move(r.lambdas);
      S.vectors[q] = std::move(r.vectors);
    } catch (const Error& e) {
      errors[q] = e.what();
    }
  }
  for (const auto& msg : errors)
    if (!msg.empty()) throw EigensolverFailure("fiber_spectra: " + msg);
  return S;
}

double scaled_eigenvalue(const SupercellProblem& P, const SupercellSpectra& S,
                         int m, int qflat) {
  return S.lambdas[qflat][m] / (P.epsilon * P.epsilon);
}

BlochCoefficients bloch_transform(const SupercellProblem& P,
                                  const SupercellSpectra& S,
                                  const SupercellField& g) {
  const int Q = P.numFibers();
  const double factor = P.volume() * std::pow(kTwoPi, -0.5 * P.dim());
  BlochCoefficients bc;
  bc.b.resize(S.modes, Q);
  for (int q = 0; q < Q; ++q)
    bc.b.col(q) = factor * (S.vectors[q].adjoint() * g[q]);
  return bc;
}

SupercellField inverse_bloch(const SupercellProblem& P,
                             const SupercellSpectra& S,
                             const BlochCoefficients& bc) {
  const double factor = std::pow(P.epsilon * P.M, -P.dim()) *
                        std::pow(kTwoPi, -0.5 * P.dim());
  SupercellField g(P.numFibers());
  for (int q = 0; q < P.numFibers(); ++q)
    g[q] = factor * (S.vectors[q] * bc.b.col(q));
  return g;
}

double coefficients_l2(const SupercellProblem& P, const BlochCoefficients& bc) {
  return std::sqrt(std::pow(P.epsilon * P.M, -P.dim()) * bc.b.squaredNorm());
}

Complex coefficients_inner(const SupercellProblem& P,
                           const BlochCoefficients& f,
                           const BlochCoefficients& g) {
  Complex acc(0.0, 0.0);
  for (int q = 0; q < f.b.cols(); ++q)
    acc += (g.b.col(q).adjoint() * f.b.col(q))(0, 0);
  return std::pow(P.epsilon * P.M, -P.dim()) * acc;
}

SupercellField apply_operator(const SupercellProblem& P,
                              const SupercellField& g) {
  SupercellField out(P.numFibers());
  const double s = 1.0 / (P.epsilon * P.epsilon);
#pragma omp parallel for schedule(dynamic)
  for (int q = 0; q < P.numFibers(); ++q) {
    const FiberOperator F =
        assemble_fiber_serial(P.A, P.basis, P.rho(), P.etaOf(q));
    out[q] = s * (F.matrix * g[q]);
  }
  return out;
}

SupercellField solve_operator(const SupercellProblem& P,
                              const SupercellField& f) {
  const int S = P.basis.size();
  const double e2 = P.epsilon * P.epsilon;
  const int q0 = P.fiberFlat(IndexVec::Zero(P.dim()));
  double fnorm = 0.0;
  for (const auto& v : f) fnorm += v.squaredNorm();
  fnorm = std::sqrt(fnorm);
  if (std::abs(f[q0][0]) > 1e-10 * (1.0 + fnorm))
    throw CompatibilityViolation("solve_operator: forcing must be zero-mean");

  SupercellField u(P.numFibers());
  std::vector<std::string> errors(P.numFibers());
#pragma omp parallel for schedule(dynamic)
  for (int q = 0; q < P.numFibers(); ++q) {
    try {
      const FiberOperator F =
          assemble_fiber_serial(P.A, P.basis, P.rho(), P.etaOf(q));
      if (q == q0) {
        Eigen::LDLT<Eigen::MatrixXcd> ldlt(F.matrix.block(1, 1, S - 1, S - 1));
        if (ldlt.info() != Eigen::Success)
          throw SingularSystem("solve_operator: mean fiber not factorizable");
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(S);
        x.tail(S - 1) = e2 * ldlt.solve(f[q].tail(S - 1));
        u[q] = std::move(x);
      } else {
        Eigen::LDLT<Eigen::MatrixXcd> ldlt(F.matrix);
        if (ldlt.info() != Eigen::Success)
          throw SingularSystem("solve_operator: fiber not factorizable");
        u[q] = e2 * ldlt.solve(f[q]);
      }
      if (!u[q].allFinite())
        throw SingularSystem("solve_operator: non-finite fiber solution");
    } catch (const Error& e) {
      errors[q] = e.what();
    }
  }
  for (const auto& msg : errors)
    if (!msg.empty()) throw SingularSystem("solve_operator: " + msg);
  return u;
}

DiagonalizationReport diagonalization_check(const SupercellProblem& P,
                                            const SupercellField& u) {
  const SupercellSpectra S = fiber_spectra(P, P.basis.size());
  const SupercellField Au = apply_operator(P, u);
  const BlochCoefficients bu = bloch_transform(P, S, u);
  const BlochCoefficients bAu = bloch_transform(P, S, Au);

  const double bmax = bu.b.cwiseAbs().maxCoeff();
  double lmax = 0.0;
  for (int q = 0; q < P.numFibers(); ++q)
    for (int m = 0; m < S.modes; ++m)
      lmax = std::max(lmax, std::abs(scaled_eigenvalue(P, S, m, q) *
                                     bu.b(m, q)));
  double worst = 0.0;
  for (int q = 0; q < P.numFibers(); ++q)
    for (int m = 0; m < S.modes; ++m) {
      if (std::abs(bu.b(m, q)) <= 1e-10 * bmax) continue;
      const double lam = scaled_eigenvalue(P, S, m, q);
      const double resid = std::abs(bAu.b(m, q) - lam * bu.b(m, q));
      worst = std::max(
          worst, resid / (std::abs(lam * bu.b(m, q)) + 1e-10 * lmax + 1e-300));
    }
  return DiagonalizationReport{worst};
}

double regime_kappa(Regime regime, double eps, double theta) {
  switch (regime) {
    case Regime::Zero:
      return eps * eps;
    case Regime::Theta:
      return theta * eps;
    case Regime::Infinity:
      return std::sqrt(eps);
  }
  throw ConfigInvalid("regime_kappa: unknown regime");
}

void check_regime(Regime regime, double eps, double kappa, double theta) {
  const double want = regime_kappa(regime, eps, theta);
  if (std::abs(kappa - want) > 1e-12 * std::max(1.0, want))
    throw RegimeMismatch("kappa " + std::to_string(kappa) +
                         " inconsistent with declared regime");
}

namespace {

const char* regimeName(Regime r) {
  switch (r) {
    case Regime::Zero:
      return "zero";
    case Regime::Theta:
      return "theta";
    case Regime::Infinity:
      return "infinity";
  }
  return "?";
}

// Nonzero Fourier coefficients of A up to |k|_inf <= band.
std::vector<std::pair<IndexVec, Eigen::MatrixXcd>> coefficientList(
    const PeriodicCoefficient& A, int band) {
  std::vector<std::pair<IndexVec, Eigen::MatrixXcd>> list;
  const int d = A.dim();
  IndexVec k = IndexVec::Constant(d, -band);
  while (true) {
    const Eigen::MatrixXcd c = A.fourierAt(k);
    if (c.cwiseAbs().maxCoeff() > 1e-16) list.emplace_back(k, c);
    int a = d - 1;
    while (a >= 0 && k[a] == band) k[a--] = -band;
    if (a < 0) break;
    ++k[a];
  }
  return list;
}

// Relative flux error || A(x/eps) grad u_eps - T grad u* || in the
// Fourier-weighted (1+|K|^2)^{-1/2} norm over physical frequencies K.
double fluxWeakError(const SupercellProblem& P, const SupercellField& u,
                     const std::map<std::vector<int>, Eigen::VectorXcd>& fstar,
                     double fstar_weighted_sq) {
  const int d = P.dim();
  const int N = P.basis.truncation();
  const int band = P.A.bandwidth() >= 0 ? P.A.bandwidth() : 2 * N;
  const auto list = coefficientList(P.A, band);
  const int ext = N + band;

  double num = 0.0;
  std::map<std::vector<int>, Eigen::VectorXcd> seen;  // K -> flux of u_eps
  for (int q = 0; q < P.numFibers(); ++q) {
    const IndexVec qi = P.fiberIndex(q);
    const Eigen::VectorXd eta = P.etaOf(q);
    IndexVec n = IndexVec::Constant(d, -ext);
    while (true) {
      Eigen::VectorXcd G = Eigen::VectorXcd::Zero(d);
      for (const auto& [k, Ak] : list) {
        const IndexVec nm = n - k;
        if (nm.cwiseAbs().maxCoeff() > N) continue;
        const Complex c = u[q][P.basis.position(nm)];
        if (c == Complex(0.0, 0.0)) continue;
        const Eigen::VectorXcd grad =
            Complex(0.0, 1.0 / P.epsilon) *
            (nm.cast<double>() + eta).cast<Complex>() * c;
        G += Ak * grad;
      }
      if (G.cwiseAbs().maxCoeff() > 0) {
        // physical frequency K = n*M + q (integer on the unit domain)
        std::vector<int> K(d);
        double k2 = 0.0;
        for (int a = 0; a < d; ++a) {
          K[a] = n[a] * P.M + qi[a];
          k2 += double(K[a]) * K[a];
        }
        Eigen::VectorXcd ref = Eigen::VectorXcd::Zero(d);
        auto it = fstar.find(K);
        if (it != fstar.end()) ref = it->second;
        num += (G - ref).squaredNorm() / (1.0 + k2);
        seen[K] = G;
      }
      int a = d - 1;
      while (a >= 0 && n[a] == ext) n[a--] = -ext;
      if (a < 0) break;
      ++n[a];
    }
  }
  // homogenized flux frequencies that the oscillating flux never produced
  for (const auto& [K, ref] : fstar) {
    if (seen.count(K)) continue;
    double k2 = 0.0;
    for (int v : K) k2 += double(v) * v;
    num += ref.squaredNorm() / (1.0 + k2);
  }
  return std::sqrt(num / fstar_weighted_sq);
}

}  // namespace

std::vector<ConvergenceRow> homogenization_experiment(
    const PeriodicCoefficient& A, int truncation, Regime regime, double theta,
    const std::vector<double>& eps_list,
    const std::vector<std::pair<IndexVec, Complex>>& f_modes,
    const Eigen::MatrixXd* tensor_override) {
  const int d = A.dim();
  const PlaneWaveBasis basis(d, truncation);

  Eigen::MatrixXd T;
  if (tensor_override) {
    T = *tensor_override;
  } else {
    switch (regime) {
      case Regime::Zero:
        T = tensor_from_cell(A, basis, 0.0).matrix;
        break;
      case Regime::Theta:
        T = tensor_from_cell(A, basis, theta).matrix;
        break;
      case Regime::Infinity:
        T = A.meanMatrix();
        break;
    }
  }

  std::vector<ConvergenceRow> rows;
  for (double eps : eps_list) {
    const int M = static_cast<int>(std::lround(1.0 / eps));
    if (std::abs(eps * M - 1.0) > 1e-9)
      throw IncommensurateGrid("homogenization_experiment: 1/eps not integer");
    const double kappa = regime_kappa(regime, eps, theta);
    check_regime(regime, eps, kappa, theta);
    SupercellProblem P = make_supercell(A, eps, M, kappa, truncation);

    const SupercellField f = field_from_global_modes(P, f_modes);
    const SupercellField u = solve_operator(P, f);

    // Homogenized solution by constant-coefficient Fourier division.
    std::vector<std::pair<IndexVec, Complex>> ustar_modes;
    std::map<std::vector<int>, Eigen::VectorXcd> fstar;
    double fstar_weighted_sq = 0.0;
    for (const auto& [k, c] : f_modes) {
      const Eigen::VectorXd kd = k.cast<double>();
      const double denom = kd.dot(T * kd);
      if (denom <= 0)
        throw ConfigInvalid("homogenization_experiment: zero-frequency forcing");
      const Complex uk = c / denom;
      ustar_modes.emplace_back(k, uk);
      const Eigen::VectorXcd flux =
          (T * kd).cast<Complex>() * (Complex(0.0, 1.0) * uk);
      std::vector<int> key(k.data(), k.data() + d);
      fstar[key] = flux;
      fstar_weighted_sq += flux.squaredNorm() / (1.0 + kd.squaredNorm());
    }
    const SupercellField ustar = field_from_global_modes(P, ustar_modes);

    SupercellField diff = u;
    for (int q = 0; q < P.numFibers(); ++q) diff[q] -= ustar[q];
    const double l2 = field_l2(P, diff) / field_l2(P, ustar);

    const double flux_err = fluxWeakError(P, u, fstar, fstar_weighted_sq);

    const SupercellSpectra S1 = fiber_spectra(P, 1);
    SupercellField high = u;
    for (int q = 0; q < P.numFibers(); ++q) {
      const Eigen::VectorXcd w = S1.vectors[q].col(0);
      high[q] -= w * (w.adjoint() * u[q])(0, 0);
    }
    const double hm = field_l2(P, high);

    rows.push_back(
        ConvergenceRow{eps, kappa, regimeName(regime), l2, flux_err, hm});
  }
  return rows;
}

void write_convergence_csv(const std::string& path,
                           const std::vector<ConvergenceRow>& rows) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("write_convergence_csv: cannot open " + path);
  std::fprintf(f,
               "epsilon,kappa,regime,l2_error,flux_weak_error,"
               "higher_mode_norm\n");
  for (const auto& r : rows)
    std::fprintf(f, "%.12e,%.12e,%s,%.12e,%.12e,%.12e\n", r.epsilon, r.kappa,
                 r.regime.c_str(), r.l2_error, r.flux_weak_error,
                 r.higher_mode_norm);
  std::fclose(f);
}

TransformLimitReport transform_to_fourier_limit(
    const PeriodicCoefficient& A, int truncation, double fixed_rho,
    const std::vector<double>& eps_list) {
  if (A.dim() != 1)
    throw BadDimension("transform_to_fourier_limit: implemented for d = 1");
  // Narrow periodized Gaussian centered at pi. The width is chosen small so
  // the spectrum of the test function stays essentially flat across every
  // frequency the sweep pairs against the eigenvector deviation; a broad bump
  // would make those pairings superexponentially small and the measured
  // error would then be dominated by the quadratic mean-amplitude deficit
  // instead of the linear eigenfunction-deviation term.
  const double sigma = 0.005;
  auto bump = [&](double x) {
    double acc = 0.0;
    for (int im = -1; im <= 1; ++im) {
      const double t = x - M_PI + kTwoPi * im;
      acc += std::exp(-t * t / (2.0 * sigma * sigma));
    }
    return acc;
  };
  const int nq = 8192;
  auto ghat = [&](int k) {
    Complex acc(0.0, 0.0);
    for (int p = 0; p < nq; ++p) {
      const double x = kTwoPi * p / nq;
      acc += bump(x) * std::polar(1.0, -k * x);
    }
    return acc / static_cast<double>(nq);
  };

  const int window = 3;
  TransformLimitReport rep;
  for (double eps : eps_list) {
    const int M = static_cast<int>(std::lround(1.0 / eps));
    if (std::abs(eps * M - 1.0) > 1e-9)
      throw IncommensurateGrid("transform_to_fourier_limit: 1/eps not integer");
    const double rho = fixed_rho > 0 ? fixed_rho : 1.0 / std::sqrt(eps);
    const double kappa = rho * eps;
    SupercellProblem P = make_supercell(A, eps, M, kappa, truncation);
    const int N = P.basis.truncation();

    double worst = 0.0;
    // the frequency window is capped by the fiber cell at coarse resolutions:
    // only |q| <= (M-1)/2 quasimomenta exist when M is small
    const int qlim = std::min(window, (M - 1) / 2);
    for (int q = -qlim; q <= qlim; ++q) {
      Eigen::VectorXd eta(1);
      eta[0] = static_cast<double>(q) / M;
      const FiberOperator F = assemble_fiber(A, P.basis, rho, eta);
      EigenResult r = smallest_eigenpairs(F.matrix, 1);
      Eigen::VectorXcd w = r.vectors.col(0);
      if (std::abs(w[0]) < 1e-8)
        throw DegenerateGauge("transform_to_fourier_limit: mean amplitude lost");
      w *= std::conj(w[0]) / std::abs(w[0]);  // mean-positive gauge

      // b_1(xi_q) normalized so its limit is ghat(q): the volume and
      // (2pi)^{-1/2} factors of the raw transform cancel against the same
      // factors in the limiting Fourier coefficient.
      Complex b(0.0, 0.0);
      for (int i = 0; i < P.basis.size(); ++i) {
        const int n = P.basis.index(i)[0];
        if (std::abs(n) > N) continue;
        b += ghat(n * M + q) * std::conj(w[i]);
      }
      worst = std::max(worst, std::abs(b - ghat(q)));
    }
    rep.eps.push_back(eps);
    rep.errors.push_back(worst);
  }
  rep.slope = fit_loglog_slope(rep.eps, rep.errors);
  return rep;
}

}  // namespace blochhom
