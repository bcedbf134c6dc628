#pragma once

// Gamma distribution with integer shape (Erlang): CDF and quantile.

#include <cmath>
#include <limits>

#include "mktinfo/errors.hpp"

namespace mktinfo {

/// Regularized lower incomplete gamma P(k, x) for integer k >= 1.
///
/// Below x = k the tail series e^{-x} sum_{j>=k} x^j / j! is summed directly; above it
/// the finite Erlang sum gives the upper tail Q = e^{-x} sum_{j<k} x^j / j!. Each
/// branch sums positive terms only, so neither loses precision to cancellation.
inline double erlang_cdf(long shape, double x) {
  if (shape < 1) throw DomainError("gamma shape must be a positive integer");
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double k = static_cast<double>(shape);
  // log of the j = k term: -x + k log x - log k!
  const double log_first = -x + k * std::log(x) - std::lgamma(k + 1.0);
  if (x < k) {
    double term = 1.0;
    double sum = 1.0;
    for (long j = shape + 1; j < shape + 100000; ++j) {
      term *= x / static_cast<double>(j);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return std::exp(log_first + std::log(sum));
  }
  // Upper tail, summed downward from j = k-1 so the largest terms come first.
  double term = 1.0;  // relative to the j = k-1 term
  double sum = 1.0;
  for (long j = shape - 1; j > 0; --j) {
    term *= static_cast<double>(j) / x;
    sum += term;
    if (term < sum * 1e-17) break;
  }
  const double log_top = -x + (k - 1.0) * std::log(x) - std::lgamma(k);
  return 1.0 - std::exp(log_top + std::log(sum));
}

/// Gamma(shape, scale) CDF, integer shape.
inline double gamma_cdf(long shape, double scale, double x) {
  if (!(scale > 0.0)) throw DomainError("gamma scale must be positive");
  return erlang_cdf(shape, x / scale);
}

/// Quantile of Gamma(shape, scale) at level p, by bracketed bisection on the Erlang CDF.
/// Relative accuracy 1e-10 or better.
inline double gamma_quantile(long shape, double scale, double p) {
  if (shape < 1) throw DomainError("gamma shape must be a positive integer");
  if (!(scale > 0.0)) throw DomainError("gamma scale must be positive");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("gamma quantile level must lie in (0, 1)");

  if (shape == 1) return -scale * std::log1p(-p);

  double lo = 0.0;
  double hi = static_cast<double>(shape);
  while (erlang_cdf(shape, hi) < p) {
    lo = hi;
    hi *= 2.0;
  }
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (erlang_cdf(shape, mid) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-13 * hi || hi - lo < std::numeric_limits<double>::min()) break;
  }
  return scale * 0.5 * (lo + hi);
}

}  // namespace mktinfo
