#pragma once

// Closed-form market information of one lag (I^2_m) for log-prices following a fractional
// Brownian motion or its stationary inverse-Lamperti transform ("delampertized" fBm).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mktinfo/errors.hpp"

namespace mktinfo {

struct FbmParams {
  double hurst = 0.5;
  double sigma = 1.0;

  void validate() const {
    if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst exponent must lie in (0, 1)");
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  }
};

struct DelampertizedParams {
  double hurst = 0.5;
  double sigma = 1.0;
  double theta = 1.0;  // mean-reversion strength

  void validate() const {
    FbmParams{hurst, sigma}.validate();
    if (!(theta > 0.0)) throw DomainError("theta must be positive");
  }
};

/// x log2 x, extended by continuity with 0 at x = 0.
inline double f_xlog2x(double x) {
  if (x < 0.0) throw DomainError("x log2 x is undefined for negative x");
  return x > 0.0 ? x * std::log2(x) : 0.0;
}

/// Correlation of consecutive fBm increments: 2^{2H-1} - 1.
inline double rho_fbm(double hurst) {
  FbmParams{hurst, 1.0}.validate();
  return std::exp2(2.0 * hurst - 1.0) - 1.0;
}

namespace detail {

/// h(x) for x > 1 as e^{-Hx} - e^{Hx} expm1(2H log1p(-e^{-x})). Past x = 40 the second
/// term is -2H e^{(H-1)x} to within a relative e^{-x}, which also avoids inf * 0.
inline double h_large(double hurst, double x) {
  if (x > 40.0) return std::exp(-hurst * x) + 2.0 * hurst * std::exp((hurst - 1.0) * x);
  return std::exp(-hurst * x) -
         std::exp(hurst * x) * std::expm1(2.0 * hurst * std::log1p(-std::exp(-x)));
}

}  // namespace detail

/// 2 - h(x), where h(x) = 2 cosh(Hx) - (2 sinh(x/2))^{2H}.
///
/// Written as (2 sinh(x/2))^{2H} - 4 sinh^2(Hx/2) (using cosh y - 1 = 2 sinh^2(y/2)) so
/// that small x does not cancel against the constant 2. Large x uses the exponential
/// form of h instead, which avoids the e^{Hx} - e^{Hx} cancellation.
inline double two_minus_h(double hurst, double x) {
  if (x < 0.0) throw DomainError("h is defined for x >= 0");
  if (x == 0.0) return 0.0;
  if (x <= 1.0) {
    const double s = 2.0 * std::sinh(0.5 * x);
    const double t = std::sinh(0.5 * hurst * x);
    return std::exp(2.0 * hurst * std::log(s)) - 4.0 * t * t;
  }
  return 2.0 - detail::h_large(hurst, x);
}

inline double h_lamperti(double hurst, double x) {
  if (x < 0.0) throw DomainError("h is defined for x >= 0");
  if (x <= 1.0) return 2.0 - two_minus_h(hurst, x);
  return detail::h_large(hurst, x);
}

/// Correlation of consecutive lag-m increments of the delampertized fBm:
/// (2 - h(2 m theta)) / (4 - 2 h(m theta)) - 1.
inline double rho_delampertized(double hurst, double m_theta) {
  FbmParams{hurst, 1.0}.validate();
  if (!(m_theta > 0.0)) throw DomainError("m * theta must be positive");
  const double d1 = two_minus_h(hurst, m_theta);
  const double d2 = two_minus_h(hurst, 2.0 * m_theta);
  const double rho = (d2 - 2.0 * d1) / (2.0 * d1);
  // Round-off can only move rho marginally outside the open interval.
  return std::clamp(rho, -1.0, 1.0);
}

/// P(Y > 0, Z <= 0) for a standard bivariate Gaussian with correlation rho.
inline double orthant_probability(double rho) {
  if (!(std::abs(rho) < 1.0)) throw DomainError("correlation must lie in (-1, 1)");
  return 0.25 - std::asin(rho) / (2.0 * std::numbers::pi);
}

/// One-lag market information in bits of a Gaussian process with stationary increments
/// whose consecutive increments have correlation rho. Continuous at |rho| = 1.
inline double info_from_rho(double rho) {
  if (!(std::abs(rho) <= 1.0)) throw DomainError("correlation must lie in [-1, 1]");
  const double a = std::asin(rho) / std::numbers::pi;
  return 1.0 + f_xlog2x(0.5 - a) + f_xlog2x(0.5 + a);
}

/// I^2_m for fBm log-prices; independent of m.
inline double info_fbm(double hurst) { return info_from_rho(rho_fbm(hurst)); }

/// I^2_m for delampertized fBm log-prices; depends on m and theta only through m * theta.
inline double info_delampertized(double hurst, double m, double theta) {
  if (!(m > 0.0)) throw DomainError("m must be positive");
  if (!(theta > 0.0)) throw DomainError("theta must be positive");
  return info_from_rho(rho_delampertized(hurst, m * theta));
}

/// E[B_s B_t] = sigma^2 / 2 (|t|^{2H} + |s|^{2H} - |t - s|^{2H}).
inline double fbm_covariance(double s, double t, const FbmParams& p) {
  p.validate();
  const double e = 2.0 * p.hurst;
  return 0.5 * p.sigma * p.sigma *
         (std::pow(std::abs(t), e) + std::pow(std::abs(s), e) - std::pow(std::abs(t - s), e));
}

/// Stationary autocovariance of the delampertized fBm at lag tau: sigma^2 / 2 h(theta tau).
inline double delampertized_autocovariance(double tau, const DelampertizedParams& p) {
  p.validate();
  if (tau < 0.0) throw DomainError("lag must be non-negative");
  return 0.5 * p.sigma * p.sigma * h_lamperti(p.hurst, p.theta * tau);
}

enum class TheoryModel { fbm, delampertized };
enum class TheoryAbscissa { hurst, m_theta };

inline std::string to_string(TheoryModel m) { return m == TheoryModel::fbm ? "fbm" : "delampertized"; }
inline std::string to_string(TheoryAbscissa a) { return a == TheoryAbscissa::hurst ? "hurst" : "m_theta"; }

/// Parameters held constant along a theory curve. For the delampertized model with a
/// Hurst abscissa, `m` and `theta` are fixed; with an m*theta abscissa, `hurst` is fixed.
struct TheoryFixed {
  double hurst = 0.5;
  double m = 1.0;
  double theta = 1.0;
};

struct TheoryCurve {
  TheoryModel model = TheoryModel::fbm;
  TheoryAbscissa abscissa_kind = TheoryAbscissa::hurst;
  TheoryFixed fixed;
  std::vector<double> abscissa;
  std::vector<double> ordinate;  // I^2 in bits
};

/// Hurst values from 0.05 to 0.95 by 0.05.
inline std::vector<double> default_hurst_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(0.05 * k);
  return grid;
}

inline TheoryCurve theory_curve(TheoryModel model, std::vector<double> grid, TheoryFixed fixed = {},
                                TheoryAbscissa abscissa = TheoryAbscissa::hurst) {
  if (grid.empty()) throw DomainError("theory grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("theory grid must be strictly increasing");
  if (model == TheoryModel::fbm && abscissa != TheoryAbscissa::hurst)
    throw DomainError("the fBm curve is parameterized by the Hurst exponent only");

  TheoryCurve curve{model, abscissa, fixed, std::move(grid), {}};
  curve.ordinate.reserve(curve.abscissa.size());
  for (double x : curve.abscissa) {
    double value = 0.0;
    if (model == TheoryModel::fbm)
      value = info_fbm(x);
    else if (abscissa == TheoryAbscissa::hurst)
      value = info_delampertized(x, fixed.m, fixed.theta);
    else
      value = info_from_rho(rho_delampertized(fixed.hurst, x));
    curve.ordinate.push_back(value);
  }
  return curve;
}

}  // namespace mktinfo
