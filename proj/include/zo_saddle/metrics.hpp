#pragma once

// Log-log rate fits, plateau detection and order statistics.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "zo_saddle/errors.hpp"

namespace zo_saddle {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;
};

/// Least squares of log(y) on log(x).
inline RateFit fit_rate(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 3) throw DegenerateSeries("fit_rate: need at least 3 points");
  for (const auto& [x, y] : series) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw DegenerateSeries("fit_rate: all abscissae and values must be finite and > 0");
    }
  }
  const double n = static_cast<double>(series.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : series) {
    mx += std::log(x);
    my += std::log(y);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : series) {
    const double u = std::log(x) - mx;
    const double v = std::log(y) - my;
    sxx += u * u;
    sxy += u * v;
    syy += v * v;
  }
  if (sxx == 0.0) throw DegenerateSeries("fit_rate: abscissae must not all coincide");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double sse = std::max(0.0, syy - fit.slope * sxy);
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  fit.points = series;
  return fit;
}

/// Linear-interpolation quantile (type 7) of unsorted values.
inline double quantile(std::vector<double> values, double q) {
  detail::require<InvalidArgument>(!values.empty(), "quantile: empty input");
  detail::require<InvalidArgument>(q >= 0.0 && q <= 1.0, "quantile: q must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

/// Median of the last `window` values.
inline double detect_plateau(const std::vector<double>& series, std::size_t window) {
  detail::require<InvalidArgument>(window >= 1, "detect_plateau: window must be >= 1");
  if (series.size() < window) throw SeriesTooShort("detect_plateau: series shorter than the window");
  return median(std::vector<double>(series.end() - static_cast<std::ptrdiff_t>(window), series.end()));
}

}  // namespace zo_saddle
