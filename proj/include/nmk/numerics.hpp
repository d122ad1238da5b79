#pragma once

#include "nmk/errors.hpp"

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace nmk {

/// log(e^a + e^b) without overflow; tolerates -inf ("absent term").
inline double log_sum_exp(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

inline double log_sum_exp(std::initializer_list<double> logs) {
  double acc = -INFINITY;
  for (double x : logs) acc = log_sum_exp(acc, x);
  return acc;
}

/// log(1 + e^x), stable for large |x|.
inline double log1p_exp(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// Ordinary least-squares slope of y against x.
inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2)
    throw Error(ErrCode::invalid_parameter,
                "slope fit needs two equal-length samples at least");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0)
    throw Error(ErrCode::invalid_parameter, "slope fit needs distinct abscissae");
  return sxy / sxx;
}

}  // namespace nmk
