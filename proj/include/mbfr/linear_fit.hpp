#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "mbfr/errors.hpp"

namespace mbfr {

// Unweighted ordinary least squares of y against x.
struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;   // 1 when the points are exactly collinear or constant
  double rmse = 0.0;
};

inline OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
  std::size_t n = x.size();
  if (n != y.size() || n < 2) throw NumericError("ols_fit needs >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw NumericError("ols_fit: x values are all identical");
  OlsFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.rmse = std::sqrt(ss_res / static_cast<double>(n));
  f.r2 = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
  return f;
}

}  // namespace mbfr
