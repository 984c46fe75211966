#include "blochhom/derivatives.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <fstream>

#include "blochhom/fit.hpp"

#include <json.hpp>

namespace blochhom {

namespace {

int order(const MultiIndex& b) {
  int s = 0;
  for (int v : b) s += v;
  return s;
}

bool componentwiseLE(const MultiIndex& g, const MultiIndex& b) {
  for (size_t a = 0; a < b.size(); ++a)
    if (g[a] > b[a]) return false;
  return true;
}

MultiIndex minus(const MultiIndex& b, const MultiIndex& g) {
  MultiIndex r(b.size());
  for (size_t a = 0; a < b.size(); ++a) r[a] = b[a] - g[a];
  return r;
}

std::vector<int> dirsOf(const MultiIndex& g) {
  std::vector<int> dirs;
  for (size_t a = 0; a < g.size(); ++a)
    for (int r = 0; r < g[a]; ++r) dirs.push_back(static_cast<int>(a));
  return dirs;
}

double h1Norm(const PlaneWaveBasis& basis, const Eigen::VectorXcd& c) {
  double acc = 0.0;
  for (int i = 0; i < basis.size(); ++i)
    acc += (1.0 + basis.index(i).cast<double>().squaredNorm()) * std::norm(c[i]);
  return std::sqrt(acc);
}

}  // namespace

std::vector<MultiIndex> multi_indices(int dim, int max_order) {
  std::vector<MultiIndex> out;
  for (int ord = 1; ord <= max_order; ++ord) {
    std::vector<MultiIndex> level;
    MultiIndex cur(dim, 0);
    // enumerate all |beta| = ord compositions recursively
    auto rec = [&](auto&& self, int slot, int rem) -> void {
      if (slot == dim - 1) {
        cur[slot] = rem;
        level.push_back(cur);
        return;
      }
      for (int v = 0; v <= rem; ++v) {
        cur[slot] = v;
        self(self, slot + 1, rem - v);
      }
    };
    rec(rec, 0, ord);
    std::sort(level.begin(), level.end());
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

long long multi_binomial(const MultiIndex& beta, const MultiIndex& gamma) {
  auto binom = [](int n, int k) -> long long {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  long long r = 1;
  for (size_t a = 0; a < beta.size(); ++a) r *= binom(beta[a], gamma[a]);
  return r;
}

DerivativeTable derivative_recursion(const PeriodicCoefficient& A,
                                     const PlaneWaveBasis& basis, double rho,
                                     int max_order) {
  if (max_order < 1 || max_order > 4)
    throw ConfigInvalid("derivative_recursion: max_order must be 1..4");
  const int d = A.dim();
  const int S = basis.size();
  const double mean0 = std::pow(kTwoPi, -0.5 * d);

  const FiberOperator F = assemble_fiber(A, basis, rho, Eigen::VectorXd::Zero(d));
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(F.matrix.block(1, 1, S - 1, S - 1));
  if (ldlt.info() != Eigen::Success)
    throw SingularSystem("derivative_recursion: reduced fiber not factorizable");

  // Operator derivatives dH/d eta^gamma at eta = 0, for every gamma needed.
  std::map<MultiIndex, Eigen::MatrixXcd> dH;
  for (const MultiIndex& g : multi_indices(d, max_order))
    dH[g] = eta_derivative_matrix(A, basis, rho, dirsOf(g));

  DerivativeTable table;
  table.rho = rho;
  table.dim = d;
  table.max_order = max_order;

  Eigen::VectorXcd x0 = Eigen::VectorXcd::Zero(S);
  x0[0] = mean0;
  auto phiOf = [&](const MultiIndex& b) -> const Eigen::VectorXcd& {
    static Eigen::VectorXcd dummy;
    if (order(b) == 0) return x0;
    return table.entries.at(b).phi;
  };

  for (const MultiIndex& beta : multi_indices(d, max_order)) {
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(S);
    for (const auto& [gamma, Dg] : dH) {
      if (!componentwiseLE(gamma, beta)) continue;
      const double c = static_cast<double>(multi_binomial(beta, gamma));
      rhs.noalias() -= c * (Dg * phiOf(minus(beta, gamma)));
    }
    for (const auto& [gamma, entry] : table.entries) {
      if (!componentwiseLE(gamma, beta) || gamma == beta) continue;
      const double c = static_cast<double>(multi_binomial(beta, gamma));
      rhs.noalias() += c * entry.lambda * phiOf(minus(beta, gamma));
    }
    // Constant-mode row of H(0) vanishes, so consistency fixes lambda^(beta).
    const Complex lam = -rhs[0] / mean0;
    if (std::abs(lam.imag()) > 1e-8 * (1.0 + std::abs(lam.real())))
      throw CompatibilityViolation(
          "derivative_recursion: eigenvalue derivative not real for " +
          multi_index_key(beta));
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(S);
    phi.tail(S - 1) = ldlt.solve(rhs.tail(S - 1));
    if (!phi.allFinite())
      throw SingularSystem("derivative_recursion: non-finite solve for " +
                           multi_index_key(beta));
    table.entries[beta] = DerivativeEntry{lam.real(), std::move(phi)};
  }
  return table;
}

UniformEstimateReport uniform_estimate_sweep(
    const PeriodicCoefficient& A, const PlaneWaveBasis& basis,
    const std::vector<double>& rho_list) {
  UniformEstimateReport rep{};
  const Eigen::MatrixXd mean = A.meanMatrix();
  for (double rho : rho_list) {
    const DerivativeTable t = derivative_recursion(A, basis, rho, 4);
    double p1 = 0, p2 = 0, p3 = 0, p4 = 0, l2dev = 0, l4 = 0;
    for (const auto& [beta, entry] : t.entries) {
      const int o = order(beta);
      const double h1 = h1Norm(basis, entry.phi);
      if (o == 1) p1 = std::max(p1, h1);
      if (o == 2) {
        p2 = std::max(p2, h1);
        // beta = e_j + e_k: the raw derivative should approach 2 M_Y(A)_{jk}
        const std::vector<int> jk = dirsOf(beta);
        l2dev = std::max(l2dev,
                         std::abs(entry.lambda - 2.0 * mean(jk[0], jk[1])));
      }
      if (o == 3) p3 = std::max(p3, entry.phi.norm());
      if (o == 4) {
        p4 = std::max(p4, entry.phi.norm());
        l4 = std::max(l4, std::abs(entry.lambda));
      }
    }
    rep.rhos.push_back(rho);
    rep.phi1_h1.push_back(p1);
    rep.phi2_h1.push_back(p2);
    rep.phi3_l2.push_back(p3);
    rep.phi4_l2.push_back(p4);
    rep.lambda2_dev.push_back(l2dev);
    rep.lambda4_abs.push_back(l4);
  }
  auto slopeOf = [&](const std::vector<double>& y) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < y.size(); ++i)
      if (y[i] > 1e-14) {
        xs.push_back(rep.rhos[i]);
        ys.push_back(y[i]);
      }
    return xs.size() >= 2 ? fit_loglog_slope(xs, ys) : 0.0;
  };
  rep.slope_phi1 = slopeOf(rep.phi1_h1);
  rep.slope_phi2 = slopeOf(rep.phi2_h1);
  rep.slope_phi3 = slopeOf(rep.phi3_l2);
  rep.slope_lambda2_dev = slopeOf(rep.lambda2_dev);
  rep.slope_lambda4 = slopeOf(rep.lambda4_abs);
  const auto [mn, mx] =
      std::minmax_element(rep.phi4_l2.begin(), rep.phi4_l2.end());
  rep.phi4_ratio = (*mn > 1e-14) ? *mx / *mn : 1.0;
  return rep;
}

HessianCrossCheck cross_check_hessian(const DerivativeTable& table,
                                      const HomogenizedTensor& tensor) {
  const int d = table.dim;
  Eigen::MatrixXd H(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      MultiIndex beta(d, 0);
      beta[k] += 1;
      beta[l] += 1;
      H(k, l) = 0.5 * table.entries.at(beta).lambda;
    }
  const double scale = tensor.matrix.cwiseAbs().maxCoeff();
  const double diff = (H - tensor.matrix).cwiseAbs().maxCoeff();
  return HessianCrossCheck{H, diff / scale};
}

std::string multi_index_key(const MultiIndex& beta) {
  std::string key;
  for (size_t a = 0; a < beta.size(); ++a)
    for (int r = 0; r < beta[a]; ++r) {
      if (!key.empty()) key += "+";
      key += "e" + std::to_string(a + 1);
    }
  return key;
}

void write_derivative_table_json(const std::string& path,
                                 const DerivativeTable& table) {
  nlohmann::json out;
  out["rho"] = table.rho;
  out["dim"] = table.dim;
  out["max_order"] = table.max_order;
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [beta, entry] : table.entries) {
    nlohmann::json e;
    e["order"] = order(beta);
    e["lambda"] = entry.lambda;
    e["phi_l2"] = entry.phi.norm();
    entries[multi_index_key(beta)] = e;
  }
  out["entries"] = entries;
  std::ofstream f(path);
  if (!f) throw Error("write_derivative_table_json: cannot open " + path);
  f << out.dump(2) << "\n";
}

}  // namespace blochhom
