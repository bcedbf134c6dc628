#pragma once

// Exact Gaussian sampling of fBm and delampertized fBm paths, the pseudo-periodic
// return recursion, and conversion of simulated paths to price series.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mktinfo/errors.hpp"
#include "mktinfo/fractional_theory.hpp"
#include "mktinfo/random.hpp"
#include "mktinfo/series.hpp"

namespace mktinfo {

enum class SimModel { fbm, delampertized, pseudo_periodic };

inline std::string to_string(SimModel m) {
  switch (m) {
    case SimModel::fbm: return "fbm";
    case SimModel::delampertized: return "delampertized";
    case SimModel::pseudo_periodic: return "pseudo-periodic";
  }
  return "unknown";
}

/// R_i = beta R_{i - tau} + sqrt(1 - beta^2) eps_i.
struct PseudoPeriodicParams {
  double beta = 0.0;
  int tau = 1;

  void validate() const {
    if (!(std::abs(beta) < 1.0)) throw DomainError("beta must lie in (-1, 1)");
    if (tau < 1) throw DomainError("tau must be a positive integer");
  }
};

using ModelParams = std::variant<FbmParams, DelampertizedParams, PseudoPeriodicParams>;

/// A simulated log-path (fbm, delampertized) or return sequence (pseudo_periodic).
struct SimulatedPath {
  SimModel model = SimModel::fbm;
  ModelParams params;
  double dt = 1.0;
  std::vector<double> values;
  std::uint64_t seed = 0;
};

enum class FbmMethod { automatic, circulant, cholesky };

namespace detail {

inline void check_length(std::size_t n, double dt) {
  if (n < 2) throw DomainError("path length must be at least 2");
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
}

/// Lower Cholesky factor of a symmetric Toeplitz matrix with first column `acv`, adding
/// progressively larger diagonal jitter (up to 1e-8 * acv[0]) if the plain factorization fails.
inline Eigen::MatrixXd toeplitz_cholesky(const std::vector<double>& acv) {
  const auto n = static_cast<Eigen::Index>(acv.size());
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) cov(i, j) = acv[static_cast<std::size_t>(std::abs(i - j))];

  for (double jitter : {0.0, 1e-14, 1e-12, 1e-10, 1e-8}) {
    Eigen::MatrixXd work = cov;
    work.diagonal().array() += jitter * acv[0];
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw NumericError("covariance not factorizable");
}

inline std::vector<double> correlate(const Eigen::MatrixXd& lower, Rng& rng) {
  Eigen::VectorXd z(lower.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  const Eigen::VectorXd x = lower.triangularView<Eigen::Lower>() * z;
  return {x.data(), x.data() + x.size()};
}

/// Autocovariance of fractional Gaussian noise with step dt at integer lag k.
inline double fgn_autocovariance(std::size_t k, const FbmParams& p, double dt) {
  const double e = 2.0 * p.hurst;
  const double kk = static_cast<double>(k);
  const double base = k == 0 ? 2.0
                             : std::pow(kk + 1.0, e) - 2.0 * std::pow(kk, e) + std::pow(kk - 1.0, e);
  return 0.5 * p.sigma * p.sigma * std::pow(dt, e) * base;
}

/// Circulant embedding (Davies-Harte / Wood-Chan) sample of n stationary values with the
/// given autocovariance function. Returns nullopt when the embedding has a materially
/// negative eigenvalue.
template <class Acv>
std::optional<std::vector<double>> circulant_sample(std::size_t n, Acv acv, Rng& rng) {
  const std::size_t half = std::bit_ceil(std::max<std::size_t>(n, 2));
  const std::size_t size = 2 * half;
  std::vector<std::complex<double>> row(size);
  for (std::size_t k = 0; k <= half; ++k) row[k] = acv(k);
  for (std::size_t k = 1; k < half; ++k) row[size - k] = row[k];

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> eigen;
  fft.fwd(eigen, row);
  double largest = 0.0;
  for (const auto& e : eigen) largest = std::max(largest, e.real());
  std::vector<std::complex<double>> weights(size);
  for (std::size_t k = 0; k < size; ++k) {
    double lambda = eigen[k].real();
    if (lambda < -1e-10 * largest) return std::nullopt;
    lambda = std::max(lambda, 0.0);
    const double amp = std::sqrt(lambda / static_cast<double>(size));
    const double a = rng.normal();
    const double b = rng.normal();
    weights[k] = {amp * a, amp * b};
  }
  // The real and imaginary parts of the transform are two independent samples with the
  // circulant covariance; the real part is used.
  std::vector<std::complex<double>> mixed;
  fft.fwd(mixed, weights);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = mixed[i].real();
  return out;
}

}  // namespace detail

/// Exact sample of (B_{dt}, ..., B_{n dt}) for an fBm: fractional Gaussian noise drawn by
/// circulant embedding, then cumulatively summed. Falls back to a dense Cholesky
/// factorization of the noise covariance if the embedding is not nonnegative definite.
inline SimulatedPath simulate_fbm(const FbmParams& params, std::size_t n, double dt,
                                  std::uint64_t seed, FbmMethod method = FbmMethod::automatic) {
  params.validate();
  detail::check_length(n, dt);
  Rng rng(seed);
  auto acv = [&](std::size_t k) { return detail::fgn_autocovariance(k, params, dt); };

  std::optional<std::vector<double>> noise;
  if (method != FbmMethod::cholesky) noise = detail::circulant_sample(n, acv, rng);
  if (!noise) {
    if (method == FbmMethod::circulant)
      throw NumericError("circulant embedding is not nonnegative definite");
    std::vector<double> first_column(n);
    for (std::size_t k = 0; k < n; ++k) first_column[k] = acv(k);
    noise = detail::correlate(detail::toeplitz_cholesky(first_column), rng);
  }

  SimulatedPath path{SimModel::fbm, params, dt, std::move(*noise), seed};
  double level = 0.0;
  for (double& v : path.values) {
    level += v;
    v = level;
  }
  return path;
}

/// Sampler for the stationary delampertized fBm on a uniform grid t_i = i dt, i = 0..n-1.
/// The Cholesky factor of the n x n covariance sigma^2 / 2 h(theta |t_i - t_j|) is computed
/// once; each draw then costs one triangular matrix-vector product.
class DelampertizedSampler {
 public:
  DelampertizedSampler(const DelampertizedParams& params, std::size_t n, double dt)
      : params_(params), dt_(dt) {
    params.validate();
    detail::check_length(n, dt);
    std::vector<double> acv(n);
    for (std::size_t k = 0; k < n; ++k)
      acv[k] = delampertized_autocovariance(static_cast<double>(k) * dt, params);
    lower_ = detail::toeplitz_cholesky(acv);
  }

  SimulatedPath sample(std::uint64_t seed) const {
    Rng rng(seed);
    return SimulatedPath{SimModel::delampertized, params_, dt_, detail::correlate(lower_, rng), seed};
  }

  std::size_t size() const { return static_cast<std::size_t>(lower_.rows()); }

 private:
  DelampertizedParams params_;
  double dt_;
  Eigen::MatrixXd lower_;
};

/// O(n^3) in the path length because of the dense factorization.
inline SimulatedPath simulate_delampertized(const DelampertizedParams& params, std::size_t n,
                                            double dt, std::uint64_t seed) {
  return DelampertizedSampler(params, n, dt).sample(seed);
}

/// The first tau returns are standard Gaussian draws, which is the stationary marginal law.
inline SimulatedPath simulate_pseudo_periodic(const PseudoPeriodicParams& params, std::size_t n,
                                              std::uint64_t seed) {
  params.validate();
  detail::check_length(n, 1.0);
  Rng rng(seed);
  const auto tau = static_cast<std::size_t>(params.tau);
  const double noise_scale = std::sqrt(1.0 - params.beta * params.beta);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double eps = rng.normal();
    r[i] = i < tau ? eps : params.beta * r[i - tau] + noise_scale * eps;
  }
  return SimulatedPath{SimModel::pseudo_periodic, params, 1.0, std::move(r), seed};
}

/// Maps a path to prices, with s = `scale` multiplying the simulated values. Log-path
/// models: P_i = p0 exp(s (x_i - x_0)). Returns model: P_0 = p0, P_i = P_{i-1} (1 + s R_i).
/// Any s > 0 leaves the sign of every increment unchanged.
inline PriceSeries to_price_series(const SimulatedPath& path, double p0, double scale = 1.0) {
  if (!(p0 > 0.0)) throw DomainError("initial price must be positive");
  if (!(scale > 0.0)) throw DomainError("scale must be positive");
  if (path.values.empty()) throw DataError("empty path");
  std::vector<double> prices;
  if (path.model == SimModel::pseudo_periodic) {
    prices.reserve(path.values.size() + 1);
    prices.push_back(p0);
    for (std::size_t i = 0; i < path.values.size(); ++i) {
      const double r = scale * path.values[i];
      if (r <= -1.0)
        throw DataError("price would become non-positive at step " + std::to_string(i + 1));
      prices.push_back(prices.back() * (1.0 + r));
    }
  } else {
    prices.reserve(path.values.size());
    for (double x : path.values) {
      const double p = p0 * std::exp(scale * (x - path.values.front()));
      if (!std::isfinite(p) || !(p > 0.0))
        throw DataError("price out of floating-point range; lower the scale");
      prices.push_back(p);
    }
  }
  return PriceSeries::indexed(std::move(prices));
}

}  // namespace mktinfo
