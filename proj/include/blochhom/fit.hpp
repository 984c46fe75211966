#pragma once

#include <cmath>
#include <vector>

#include "blochhom/errors.hpp"

namespace blochhom {

// Least-squares slope of log(y) against log(x); used for all empirical rate
// fits. Requires positive data.
inline double fit_loglog_slope(const std::vector<double>& x,
                               const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigInvalid("fit_loglog_slope: need >= 2 matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0)
      throw ConfigInvalid("fit_loglog_slope: data must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace blochhom
