#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "pseudodp/errors.hpp"

namespace pseudodp {

// Linear interpolation of the empirical CDF (the type-7 convention):
// h = (n - 1) p, result = x[floor(h)] + (h - floor(h)) * (x[floor(h)+1] - x[floor(h)]).
inline double quantile_type7_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw NumericError("quantile of empty sample");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile_type7(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  return quantile_type7_sorted(values, p);
}

inline double median(std::vector<double> values) { return quantile_type7(std::move(values), 0.5); }

inline double interquartile_range(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return quantile_type7_sorted(values, 0.75) - quantile_type7_sorted(values, 0.25);
}

inline double mean(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

inline double sample_variance(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return ss / static_cast<double>(values.size() - 1);
}

inline double sample_skewness(std::span<const double> values) {
  const double m = mean(values);
  double m2 = 0.0, m3 = 0.0;
  for (double v : values) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(values.size());
  m2 /= n;
  m3 /= n;
  return m3 / std::pow(m2, 1.5);
}

}  // namespace pseudodp
