#pragma once

#include <vector>

#include "blochhom/torus.hpp"

namespace blochhom {

// Truncated plane-wave basis {e^{i n.y} : |n|_inf <= N} for the Galerkin
// discretization. Enumeration is fixed: the constant mode n=0 comes first,
// then the remaining indices in lexicographic order; stable across runs.
class PlaneWaveBasis {
 public:
  PlaneWaveBasis(int dim, int truncation);

  int dim() const { return dim_; }
  int truncation() const { return N_; }
  int size() const { return static_cast<int>(indices_.size()); }

  const IndexVec& index(int i) const { return indices_[i]; }
  // Position of a multi-index in the enumeration; throws BadDimension if
  // outside the truncation.
  int position(const IndexVec& n) const;

 private:
  int dim_;
  int N_;
  std::vector<IndexVec> indices_;
  std::vector<int> position_;  // dense lookup over the (2N+1)^d box
  int boxIndex(const IndexVec& n) const;
};

}  // namespace blochhom
