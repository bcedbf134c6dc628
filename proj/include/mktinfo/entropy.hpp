#pragma once

// Plug-in Shannon entropy of sign words, market information, partial market
// information, entropy-rate slope and gamma significance bounds over an (L, m) grid.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mktinfo/errors.hpp"
#include "mktinfo/gamma.hpp"
#include "mktinfo/series.hpp"

namespace mktinfo {

/// Dense row-major table whose cells may be absent.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::optional<T>& at(std::size_t r, std::size_t c) { return cells_.at(r * cols_ + c); }
  const std::optional<T>& at(std::size_t r, std::size_t c) const { return cells_.at(r * cols_ + c); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::optional<T>> cells_;
};

/// -sum p log2 p with 0 log2 0 = 0. Probabilities must sum to one.
inline double entropy_bits(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw DomainError("negative probability");
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

inline double shannon_entropy(const WordDistribution& dist) {
  if (dist.total == 0) throw DataError("no observations");
  const double total = static_cast<double>(dist.total);
  double h = 0.0;
  for (const auto& [word, count] : dist.counts) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / total;
    h -= p * std::log2(p);
  }
  return h;
}

/// Plug-in entropy of length-L words over all valid windows.
inline double empirical_entropy(const IndicatorSeries& j, int word_length) {
  return shannon_entropy(extract_words(j, word_length));
}

/// Market information carried by L lags: 1 + H^L - H^{L+1}, both entropies taken over
/// the start indices valid for words of length L+1 so the chain rule holds exactly.
inline double market_information(const IndicatorSeries& j, int lags) {
  if (lags < 1) throw DomainError("number of lags must be at least 1");
  const StartRange range{0, window_count(j.bits.size(), lags + 1, j.m)};
  const double h_short = shannon_entropy(extract_words(j, lags, range));
  const double h_long = shannon_entropy(extract_words(j, lags + 1, range));
  return 1.0 + h_short - h_long;
}

/// Upper confidence bound for the plug-in information of L lags under the efficient
/// null: quantile of Gamma(k = 2^{L-1}, scale = 1 / ((n - mL) ln 2)).
struct SignificanceBound {
  long shape = 1;
  double scale = 0.0;
  double quantile_level = 0.95;
  double value = 0.0;
};

/// `n` is the number of prices minus one.
inline SignificanceBound significance_bound(long n, int lags, int m, double confidence) {
  if (lags < 1 || lags > 62) throw DomainError("number of lags must lie in 1..62");
  if (m < 1) throw DomainError("horizon m must be a positive integer");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw DomainError("confidence must lie in (0, 1)");
  const long dof = n - static_cast<long>(m) * lags;
  if (dof <= 0) throw DataError("degrees of freedom exhausted");
  SignificanceBound b;
  b.shape = 1L << (lags - 1);
  b.scale = 1.0 / (static_cast<double>(dof) * std::log(2.0));
  b.quantile_level = confidence;
  b.value = gamma_quantile(b.shape, b.scale, confidence);
  return b;
}

/// Entropies H^L_m for word lengths L = 1..max_lags+1 (row L-1) and strides m (column).
///
/// Within one column every cell is computed over the same window start indices: those
/// valid for the longest computable word length. Cells whose word length admits no
/// window are absent.
struct EntropyProfile {
  std::vector<int> m_values;
  int max_lags = 0;
  Grid<double> entropy;
  Grid<std::size_t> n_obs;

  std::optional<double> H(int word_length, int m) const {
    const auto col = column(m);
    if (!col || word_length < 1 || word_length > max_lags + 1) return std::nullopt;
    return entropy.at(static_cast<std::size_t>(word_length - 1), *col);
  }

  std::optional<std::size_t> column(int m) const {
    for (std::size_t c = 0; c < m_values.size(); ++c)
      if (m_values[c] == m) return c;
    return std::nullopt;
  }
};

/// Market information I^{L+1}_m of L = 1..max_lags lags (row L-1), its first difference in
/// L (partial information; the first row is the information itself), and the matching
/// significance bounds.
struct InformationProfile {
  std::vector<int> m_values;
  int max_lags = 0;
  long n = 0;
  double confidence = 0.95;
  Grid<double> information;
  Grid<double> partial;
  Grid<double> bounds;
  Grid<double> partial_bounds;

  std::optional<double> I(int lags, int m) const { return cell(information, lags, m); }
  std::optional<double> partial_information(int lags, int m) const { return cell(partial, lags, m); }
  std::optional<double> bound(int lags, int m) const { return cell(bounds, lags, m); }
  std::optional<double> partial_bound(int lags, int m) const { return cell(partial_bounds, lags, m); }

 private:
  std::optional<double> cell(const Grid<double>& g, int lags, int m) const {
    if (lags < 1 || lags > max_lags) return std::nullopt;
    for (std::size_t c = 0; c < m_values.size(); ++c)
      if (m_values[c] == m) return g.at(static_cast<std::size_t>(lags - 1), c);
    return std::nullopt;
  }
};

struct MultiscaleProfile {
  EntropyProfile entropy;
  InformationProfile information;
};

/// Fills the entropy and information grids from one indicator series per stride. All
/// series must come from the same price series (equal n = number of prices - 1).
inline MultiscaleProfile information_profile(std::span<const IndicatorSeries> family, int max_lags,
                                             double confidence) {
  if (max_lags < 1 || max_lags > 62) throw DomainError("L_max must lie in 1..62");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw DomainError("confidence must lie in (0, 1)");
  if (family.empty()) throw DomainError("at least one stride m is required");

  const std::size_t rows = static_cast<std::size_t>(max_lags) + 1;
  const std::size_t cols = family.size();
  MultiscaleProfile out;
  auto& ep = out.entropy;
  auto& ip = out.information;
  ep.max_lags = ip.max_lags = max_lags;
  ep.entropy = Grid<double>(rows, cols);
  ep.n_obs = Grid<std::size_t>(rows, cols);
  ip.confidence = confidence;
  ip.information = Grid<double>(rows - 1, cols);
  ip.partial = Grid<double>(rows - 1, cols);
  ip.bounds = Grid<double>(rows - 1, cols);
  ip.partial_bounds = Grid<double>(rows - 1, cols);

  for (std::size_t c = 0; c < cols; ++c) {
    const auto& j = family[c];
    if (j.m < 1) throw DomainError("horizon m must be a positive integer");
    ep.m_values.push_back(j.m);
    ip.m_values.push_back(j.m);
    if (j.bits.empty()) continue;
    const long n = static_cast<long>(j.bits.size()) + j.m - 1;
    if (ip.n == 0)
      ip.n = n;
    else if (n != ip.n)
      throw DomainError("indicator series come from price series of different lengths");

    int longest = 0;
    for (int w = static_cast<int>(rows); w >= 1; --w) {
      if (window_count(j.bits.size(), w, j.m) > 0) {
        longest = w;
        break;
      }
    }
    if (longest == 0) continue;

    // Shorter words are prefixes of the longest one at the same start index, so their
    // counts over the shared range follow by marginalization.
    const StartRange range{0, window_count(j.bits.size(), longest, j.m)};
    const auto full = extract_words(j, longest, range);
    for (int w = 1; w <= longest; ++w) {
      WordDistribution dist{w, j.m, {}, range.count};
      for (const auto& [word, count] : full.counts) dist.counts[word >> (longest - w)] += count;
      ep.entropy.at(static_cast<std::size_t>(w - 1), c) = shannon_entropy(dist);
      ep.n_obs.at(static_cast<std::size_t>(w - 1), c) = range.count;
    }

    for (int lags = 1; lags <= max_lags && lags + 1 <= longest; ++lags) {
      const auto r = static_cast<std::size_t>(lags - 1);
      const double info = 1.0 + *ep.entropy.at(r, c) - *ep.entropy.at(r + 1, c);
      ip.information.at(r, c) = info;
      if (lags == 1) {
        ip.partial.at(r, c) = info;
      } else if (const auto& prev = ip.information.at(r - 1, c)) {
        ip.partial.at(r, c) = info - *prev;
      }
      if (n - static_cast<long>(j.m) * lags > 0) {
        const double b = significance_bound(n, lags, j.m, confidence).value;
        ip.bounds.at(r, c) = b;
        if (lags == 1) {
          ip.partial_bounds.at(r, c) = b;
        } else if (const auto& prev = ip.bounds.at(r - 1, c)) {
          ip.partial_bounds.at(r, c) = b - *prev;
        }
      }
    }
  }
  return out;
}

/// Builds indicators for each stride from a price series, then profiles them.
inline MultiscaleProfile information_profile(const PriceSeries& prices, std::span<const int> m_values,
                                             int max_lags, double confidence) {
  std::vector<IndicatorSeries> family;
  family.reserve(m_values.size());
  for (int m : m_values) {
    if (m < 1) throw DomainError("horizon m must be a positive integer");
    if (static_cast<std::size_t>(m) >= prices.size()) {
      // keep the column, with no indicators: every cell will be absent
      family.push_back(IndicatorSeries{m, {}});
      continue;
    }
    family.push_back(to_indicators(compute_returns(prices, m)));
  }
  auto profile = information_profile(family, max_lags, confidence);
  profile.information.n = static_cast<long>(prices.size()) - 1;
  return profile;
}

/// Least-squares slope of H^L_m against L over word lengths first..last (present cells only).
inline double entropy_rate_slope(const EntropyProfile& profile, int m, int first_word_length,
                                 int last_word_length) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (int w = first_word_length; w <= last_word_length; ++w) {
    const auto h = profile.H(w, m);
    if (!h) continue;
    const double x = static_cast<double>(w);
    sx += x;
    sy += *h;
    sxx += x * x;
    sxy += x * *h;
    ++count;
  }
  if (count < 2) throw DataError("insufficient range");
  const double k = static_cast<double>(count);
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace mktinfo
