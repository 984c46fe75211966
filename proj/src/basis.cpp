#include "blochhom/basis.hpp"

namespace blochhom {

PlaneWaveBasis::PlaneWaveBasis(int dim, int truncation)
    : dim_(dim), N_(truncation) {
  if (dim < 1 || dim > 3) throw BadDimension("basis: dim must be 1..3");
  if (truncation < 1) throw BadDimension("basis: truncation must be >= 1");
  const int side = 2 * N_ + 1;
  int box = 1;
  for (int a = 0; a < dim_; ++a) box *= side;
  indices_.reserve(box);
  position_.assign(box, -1);

  IndexVec zero = IndexVec::Zero(dim_);
  indices_.push_back(zero);
  position_[boxIndex(zero)] = 0;

  IndexVec n = IndexVec::Constant(dim_, -N_);
  while (true) {
    if (n.cwiseAbs().maxCoeff() != 0 || dim_ == 0) {
      if (!(n.array() == 0).all()) {
        position_[boxIndex(n)] = static_cast<int>(indices_.size());
        indices_.push_back(n);
      }
    }
    int a = dim_ - 1;
    while (a >= 0 && n[a] == N_) {
      n[a] = -N_;
      --a;
    }
    if (a < 0) break;
    ++n[a];
  }
}

int PlaneWaveBasis::boxIndex(const IndexVec& n) const {
  const int side = 2 * N_ + 1;
  int p = 0;
  for (int a = 0; a < dim_; ++a) p = p * side + (n[a] + N_);
  return p;
}

int PlaneWaveBasis::position(const IndexVec& n) const {
  if (n.size() != dim_ || n.cwiseAbs().maxCoeff() > N_)
    throw BadDimension("basis: index outside truncation");
  return position_[boxIndex(n)];
}

}  // namespace blochhom
