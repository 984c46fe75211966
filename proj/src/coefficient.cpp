#include "blochhom/coefficient.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace blochhom {

namespace {

std::vector<int> keyOf(const IndexVec& k) {
  return std::vector<int>(k.data(), k.data() + k.size());
}

// Ensure Ahat(-k) = conj(Ahat(k)) by mirroring, and compute the bandwidth.
void hermitianComplete(PeriodicCoefficient::FourierMap& map, int* bandwidth) {
  PeriodicCoefficient::FourierMap mirrored;
  int bw = 0;
  for (const auto& [key, mat] : map) {
    std::vector<int> neg(key.size());
    for (size_t a = 0; a < key.size(); ++a) {
      neg[a] = -key[a];
      bw = std::max(bw, std::abs(key[a]));
    }
    mirrored[key] = map.count(neg) ? 0.5 * (mat + map.at(neg).conjugate()) : mat;
    mirrored[neg] = mirrored[key].conjugate();
  }
  map = std::move(mirrored);
  *bandwidth = bw;
}

}  // namespace

PeriodicCoefficient::PeriodicCoefficient(Kind kind, TorusGrid grid,
                                         std::vector<Eigen::MatrixXd> samples,
                                         FourierMap fourier, int bandwidth,
                                         double lam_a1, double lam_a2,
                                         double lam_f)
    : kind_(kind),
      grid_(std::move(grid)),
      samples_(std::move(samples)),
      fourier_(std::move(fourier)),
      bandwidth_(bandwidth),
      lam_a1_(lam_a1),
      lam_a2_(lam_a2),
      lam_f_(lam_f) {
  validate();
}

void PeriodicCoefficient::validate() {
  const int d = grid_.dim();
  if (static_cast<int>(samples_.size()) != grid_.numPoints())
    throw BadDimension("coefficient: samples/grid size mismatch");
  double min_eig = std::numeric_limits<double>::infinity();
  double max_norm = 0.0;
  for (const auto& S : samples_) {
    if (S.rows() != d || S.cols() != d)
      throw BadDimension("coefficient: sample matrix is not d x d");
    if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw NotSymmetric("coefficient: sample matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    max_norm = std::max(max_norm, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  if (min_eig <= 1e-12)
    throw NotElliptic("coefficient: smallest eigenvalue over the grid is " +
                      std::to_string(min_eig));
  alpha_ = min_eig;
  sup_norm_ = max_norm;
}

PeriodicCoefficient PeriodicCoefficient::constant(const Eigen::MatrixXd& C,
                                                  int n_per_axis) {
  const int d = static_cast<int>(C.rows());
  TorusGrid grid(d, n_per_axis);
  std::vector<Eigen::MatrixXd> samples(grid.numPoints(), C);
  FourierMap map;
  map[std::vector<int>(d, 0)] = C.cast<Complex>();
  return PeriodicCoefficient(Kind::Constant, grid, std::move(samples),
                             std::move(map), 0);
}

PeriodicCoefficient PeriodicCoefficient::laminate(double a1, double a2,
                                                  double fraction,
                                                  int n_per_axis) {
  if (fraction <= 0.0 || fraction >= 1.0)
    throw ConfigInvalid("laminate: fraction must lie in (0,1)");
  TorusGrid grid(1, n_per_axis);
  std::vector<Eigen::MatrixXd> samples(grid.numPoints());
  const double cell = kTwoPi / n_per_axis;
  for (int p = 0; p < grid.numPoints(); ++p) {
    const double mid = grid.point(p)[0] + 0.5 * cell;
    const double v = (mid < kTwoPi * fraction) ? a1 : a2;
    samples[p] = Eigen::MatrixXd::Constant(1, 1, v);
  }
  return PeriodicCoefficient(Kind::Laminate, grid, std::move(samples),
                             FourierMap{}, -1, a1, a2, fraction);
}

PeriodicCoefficient PeriodicCoefficient::fromFourier(int dim, int n_per_axis,
                                                     const FourierMap& map,
                                                     Kind kind) {
  TorusGrid grid(dim, n_per_axis);
  FourierMap full = map;
  int bandwidth = 0;
  hermitianComplete(full, &bandwidth);
  std::vector<Eigen::MatrixXd> samples(grid.numPoints());
  for (int p = 0; p < grid.numPoints(); ++p) {
    const Eigen::VectorXd y = grid.point(p);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [key, mat] : full) {
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += key[a] * y[a];
      acc += mat * std::polar(1.0, phase);
    }
    samples[p] = acc.real();
  }
  return PeriodicCoefficient(kind, grid, std::move(samples), std::move(full),
                             bandwidth);
}

PeriodicCoefficient PeriodicCoefficient::fromSamples(
    int dim, int n_per_axis, const std::vector<Eigen::MatrixXd>& samples) {
  TorusGrid grid(dim, n_per_axis);
  if (static_cast<int>(samples.size()) != grid.numPoints())
    throw BadDimension("fromSamples: wrong sample count");
  // DFT per matrix entry gives the exact coefficients of the trigonometric
  // interpolant; the field is treated as that band-limited interpolant.
  FourierMap map;
  const int P = grid.numPoints();
  int bandwidth = 0;
  for (int q = 0; q < P; ++q) {
    const IndexVec k = grid.freq(q);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
    for (int p = 0; p < P; ++p) {
      const Eigen::VectorXd y = grid.point(p);
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += k[a] * y[a];
      acc += samples[p].cast<Complex>() * std::polar(1.0, -phase);
    }
    acc /= static_cast<double>(P);
    if (acc.cwiseAbs().maxCoeff() > 1e-14) {
      map[keyOf(k)] = acc;
      bandwidth = std::max(bandwidth, k.cwiseAbs().maxCoeff());
    }
  }
  hermitianComplete(map, &bandwidth);
  return PeriodicCoefficient(Kind::Samples, grid, samples, std::move(map),
                             bandwidth);
}

Eigen::MatrixXcd PeriodicCoefficient::fourierAt(const IndexVec& k) const {
  const int d = grid_.dim();
  if (k.size() != d) throw BadDimension("fourierAt: wrong index length");
  if (kind_ == Kind::Laminate) {
    Eigen::MatrixXcd out(1, 1);
    const int kk = k[0];
    if (kk == 0) {
      out(0, 0) = lam_f_ * lam_a1_ + (1.0 - lam_f_) * lam_a2_;
    } else {
      const Complex num = 1.0 - std::polar(1.0, -kTwoPi * kk * lam_f_);
      out(0, 0) = (lam_a1_ - lam_a2_) * num / (Complex(0.0, kTwoPi * kk));
    }
    return out;
  }
  auto it = fourier_.find(keyOf(k));
  if (it == fourier_.end()) return Eigen::MatrixXcd::Zero(d, d);
  return it->second;
}

Eigen::MatrixXd PeriodicCoefficient::valueAt(const Eigen::VectorXd& y) const {
  const int d = grid_.dim();
  if (kind_ == Kind::Laminate) {
    double yy = std::fmod(y[0], kTwoPi);
    if (yy < 0) yy += kTwoPi;
    const double v = (yy < kTwoPi * lam_f_) ? lam_a1_ : lam_a2_;
    return Eigen::MatrixXd::Constant(1, 1, v);
  }
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [key, mat] : fourier_) {
    double phase = 0.0;
    for (int a = 0; a < d; ++a) phase += key[a] * y[a];
    acc += mat * std::polar(1.0, phase);
  }
  return acc.real();
}

Eigen::MatrixXd PeriodicCoefficient::meanMatrix() const {
  return fourierAt(IndexVec::Zero(grid_.dim())).real();
}

PeriodicCoefficient load_coefficient(const nlohmann::json& spec) {
  using nlohmann::json;
  try {
    if (!spec.contains("version") || spec.at("version").get<int>() != 1)
      throw ConfigInvalid("coefficient: missing or unsupported version");
    const int d = spec.at("dim").get<int>();
    const int n = spec.at("n_per_axis").get<int>();
    const std::string kind = spec.at("kind").get<std::string>();
    const json& payload = spec.at("payload");
    if (kind == "constant") {
      const auto rows = payload.at("matrix");
      Eigen::MatrixXd C(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) C(i, j) = rows.at(i).at(j).get<double>();
      return PeriodicCoefficient::constant(C, n);
    }
    if (kind == "laminate") {
      if (d != 1) throw ConfigInvalid("laminate: only dim = 1 supported");
      const auto vals = payload.at("values");
      return PeriodicCoefficient::laminate(vals.at(0).get<double>(),
                                           vals.at(1).get<double>(),
                                           payload.at("fraction").get<double>(),
                                           n);
    }
    if (kind == "trig") {
      PeriodicCoefficient::FourierMap map;
      auto add = [&](int i, int j, const Complex& c, const std::vector<int>& k) {
        auto it = map.find(k);
        if (it == map.end())
          it = map.emplace(k, Eigen::MatrixXcd::Zero(d, d)).first;
        it->second(i, j) += c;
        if (i != j) it->second(j, i) += c;  // symmetric completion
      };
      for (const auto& entry : payload.at("entries")) {
        const int i = entry.at("row").get<int>();
        const int j = entry.at("col").get<int>();
        if (i < 0 || j < 0 || i >= d || j >= d || j < i)
          throw ConfigInvalid("trig: entry indices must satisfy 0 <= row <= col < dim");
        for (const auto& term : entry.at("terms")) {
          const double c = term.at("c").get<double>();
          std::vector<int> k = term.at("k").get<std::vector<int>>();
          if (static_cast<int>(k.size()) != d)
            throw ConfigInvalid("trig: wavevector length != dim");
          std::vector<int> neg(k.size());
          for (size_t a = 0; a < k.size(); ++a) neg[a] = -k[a];
          const std::string fn = term.at("fn").get<std::string>();
          if (fn == "cos") {
            add(i, j, Complex(0.5 * c, 0.0), k);
            add(i, j, Complex(0.5 * c, 0.0), neg);
          } else if (fn == "sin") {
            add(i, j, Complex(0.0, -0.5 * c), k);
            add(i, j, Complex(0.0, 0.5 * c), neg);
          } else {
            throw ConfigInvalid("trig: fn must be cos or sin");
          }
        }
      }
      return PeriodicCoefficient::fromFourier(d, n, map,
                                              PeriodicCoefficient::Kind::Trig);
    }
    if (kind == "samples") {
      TorusGrid grid(d, n);
      const auto vals = payload.at("values");
      if (static_cast<int>(vals.size()) != grid.numPoints() * d * d)
        throw ConfigInvalid("samples: wrong value count");
      std::vector<Eigen::MatrixXd> samples(grid.numPoints());
      int idx = 0;
      for (int p = 0; p < grid.numPoints(); ++p) {
        Eigen::MatrixXd S(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) S(i, j) = vals.at(idx++).get<double>();
        samples[p] = S;
      }
      return PeriodicCoefficient::fromSamples(d, n, samples);
    }
    throw ConfigInvalid("coefficient: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("coefficient: malformed description: ") +
                        e.what());
  }
}

}  // namespace blochhom
