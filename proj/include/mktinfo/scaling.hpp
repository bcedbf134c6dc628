#pragma once

// Moment-based Hurst exponent: second-order structure function and its log-log fit.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mktinfo/errors.hpp"

namespace mktinfo {

struct StructureFunction {
  std::vector<int> scales;
  std::vector<double> moments;  // mean squared increment at each scale
  std::vector<int> excluded;    // requested scales too large for the series
};

/// M2(d) = mean over i of (x_{i+d} - x_i)^2, overlapping increments.
inline StructureFunction structure_function(std::span<const double> x, std::span<const int> scales) {
  StructureFunction sf;
  for (int d : scales) {
    if (d < 1) throw DomainError("scales must be positive integers");
    const auto step = static_cast<std::size_t>(d);
    if (step >= x.size()) {
      sf.excluded.push_back(d);
      continue;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + step < x.size(); ++i) {
      const double inc = x[i + step] - x[i];
      sum += inc * inc;
    }
    sf.scales.push_back(d);
    sf.moments.push_back(sum / static_cast<double>(x.size() - step));
  }
  return sf;
}

/// Scales 1..min(20, length - 1).
inline std::vector<int> default_scales(std::size_t length) {
  std::vector<int> scales;
  for (int d = 1; d <= 20 && static_cast<std::size_t>(d) < length; ++d) scales.push_back(d);
  return scales;
}

struct FitRange {
  int min_scale = 1;
  int max_scale = 5;
};

struct LogLogCurve {
  std::vector<int> scales;
  std::vector<double> moments;
  FitRange fit_range;
  double slope = 0.0;
  double intercept = 0.0;  // log2 M2 at log2 d = 0
  double hurst_estimate = 0.0;

  bool in_fit_range(int scale) const {
    return scale >= fit_range.min_scale && scale <= fit_range.max_scale;
  }

  /// Change of the local log2-log2 slope between consecutive segments; entry k refers to
  /// the segments (k, k+1) and (k+1, k+2). Absent where a moment is zero.
  std::vector<std::optional<double>> second_differences() const {
    std::vector<std::optional<double>> out;
    for (std::size_t k = 0; k + 2 < scales.size(); ++k) {
      if (!(moments[k] > 0.0 && moments[k + 1] > 0.0 && moments[k + 2] > 0.0)) {
        out.emplace_back();
        continue;
      }
      auto local_slope = [&](std::size_t a) {
        return (std::log2(moments[a + 1]) - std::log2(moments[a])) /
               (std::log2(scales[a + 1]) - std::log2(scales[a]));
      };
      out.emplace_back(local_slope(k + 1) - local_slope(k));
    }
    return out;
  }

  double max_abs_second_difference() const {
    double worst = 0.0;
    for (const auto& d : second_differences())
      if (d) worst = std::max(worst, std::abs(*d));
    return worst;
  }
};

/// Least squares of log M2(d) on log d over the fit range; the Hurst estimate is half the slope.
inline LogLogCurve estimate_hurst(const StructureFunction& sf, FitRange fit) {
  LogLogCurve curve{sf.scales, sf.moments, fit, 0.0, 0.0, 0.0};
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t k = 0; k < sf.scales.size(); ++k) {
    if (!curve.in_fit_range(sf.scales[k])) continue;
    if (!(sf.moments[k] > 0.0))
      throw DataError("degenerate moment at scale " + std::to_string(sf.scales[k]));
    const double x = std::log2(static_cast<double>(sf.scales[k]));
    const double y = std::log2(sf.moments[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) {
    std::string usable;
    for (int d : sf.scales) usable += (usable.empty() ? "" : ",") + std::to_string(d);
    throw DataError("insufficient scales in fit range (usable scales: " +
                    (usable.empty() ? std::string("none") : usable) + ")");
  }
  const double k = static_cast<double>(count);
  curve.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  curve.intercept = (sy - curve.slope * sx) / k;
  curve.hurst_estimate = 0.5 * curve.slope;
  return curve;
}

inline LogLogCurve estimate_hurst(std::span<const double> log_prices, std::span<const int> scales,
                                  FitRange fit) {
  return estimate_hurst(structure_function(log_prices, scales), fit);
}

}  // namespace mktinfo
