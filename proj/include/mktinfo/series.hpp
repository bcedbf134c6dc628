#pragma once

// Price ingestion, m-horizon returns, sign indicators and binary word counts.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mktinfo/errors.hpp"

namespace mktinfo {

enum class PriceMode { close, midrange };

inline std::string to_string(PriceMode mode) {
  return mode == PriceMode::close ? "close" : "midrange";
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto piece = line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                                          : comma - start);
    fields.emplace_back(trim(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Timestamps are opaque labels. Two labels that both read as numbers are
// ordered numerically, anything else lexicographically (ISO dates sort correctly).
inline bool timestamp_less(const std::string& a, const std::string& b) {
  const auto na = parse_double(a);
  const auto nb = parse_double(b);
  if (na && nb) return *na < *nb;
  return a < b;
}

}  // namespace detail

/// Strictly positive prices with strictly increasing timestamps.
class PriceSeries {
 public:
  PriceSeries(std::vector<std::string> timestamps, std::vector<double> prices,
              PriceMode mode = PriceMode::close)
      : timestamps_(std::move(timestamps)), prices_(std::move(prices)), mode_(mode) {
    if (timestamps_.size() != prices_.size())
      throw DataError("timestamps and prices differ in length");
    if (prices_.size() < 2) throw DataError("a price series needs at least two prices");
    for (std::size_t i = 0; i < prices_.size(); ++i) {
      if (!(prices_[i] > 0.0))
        throw DataError("non-positive price at row " + std::to_string(i + 1));
      if (i > 0 && !detail::timestamp_less(timestamps_[i - 1], timestamps_[i]))
        throw DataError("timestamps not strictly increasing at row " + std::to_string(i + 1));
    }
  }

  // Integer-index timestamps 0..n-1.
  static PriceSeries indexed(std::vector<double> prices, PriceMode mode = PriceMode::close) {
    std::vector<std::string> ts(prices.size());
    for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = std::to_string(i);
    return PriceSeries(std::move(ts), std::move(prices), mode);
  }

  const std::vector<std::string>& timestamps() const { return timestamps_; }
  const std::vector<double>& prices() const { return prices_; }
  PriceMode mode() const { return mode_; }
  std::size_t size() const { return prices_.size(); }

 private:
  std::vector<std::string> timestamps_;
  std::vector<double> prices_;
  PriceMode mode_;
};

struct ReturnSeries {
  int m = 1;
  std::vector<double> values;  // values[k] = R_{m, k+m}
};

struct IndicatorSeries {
  int m = 1;
  std::vector<std::uint8_t> bits;
};

/// Half-open range of window start indices [first, first + count).
struct StartRange {
  std::size_t first = 0;
  std::size_t count = 0;
};

/// Counts of length-L binary words read at stride m. A word is encoded with its
/// first (oldest) indicator in the most significant bit.
struct WordDistribution {
  int word_length = 1;
  int stride = 1;
  std::map<std::uint64_t, std::size_t> counts;
  std::size_t total = 0;

  std::size_t count(std::uint64_t word) const {
    const auto it = counts.find(word);
    return it == counts.end() ? 0 : it->second;
  }
};

inline std::string word_to_string(std::uint64_t word, int length) {
  std::string s(static_cast<std::size_t>(length), '0');
  for (int k = 0; k < length; ++k)
    if ((word >> (length - 1 - k)) & 1U) s[static_cast<std::size_t>(k)] = '1';
  return s;
}

inline std::uint64_t word_from_string(std::string_view s) {
  std::uint64_t word = 0;
  for (char c : s) {
    if (c != '0' && c != '1') throw DomainError("word must be binary: " + std::string(s));
    word = (word << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return word;
}

/// Reads a comma-separated price table. The header names columns
/// case-insensitively (timestamp/date, open, high, low, close). Without a header
/// the layout is inferred from the column count: 2 = (timestamp, close),
/// 3 = (timestamp, high, low), 5 = (timestamp, open, high, low, close).
/// Blank lines and lines starting with '#' are skipped.
inline PriceSeries load_prices(std::istream& in, PriceMode mode) {
  std::optional<std::size_t> ts_col, open_col, high_col, low_col, close_col;
  bool have_layout = false;
  std::vector<std::string> timestamps;
  std::vector<double> prices;
  std::string line;
  std::size_t row = 0;

  auto require = [&](const std::optional<std::size_t>& col, const char* name) {
    if (!col)
      throw DataError(std::string("missing required column '") + name + "' for " +
                      to_string(mode) + " prices");
    return *col;
  };

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto fields = detail::split_csv_line(line);

    if (!have_layout) {
      have_layout = true;
      const bool headerless = fields.size() >= 2 && detail::parse_double(fields[1]).has_value();
      if (!headerless) {
        for (std::size_t c = 0; c < fields.size(); ++c) {
          const auto name = detail::lower(fields[c]);
          if (name == "timestamp" || name == "date" || name == "time" || name == "datetime")
            ts_col = c;
          else if (name == "open") open_col = c;
          else if (name == "high") high_col = c;
          else if (name == "low") low_col = c;
          else if (name == "close" || name == "price") close_col = c;
        }
        if (!ts_col) throw DataError("missing timestamp/date column in header");
        continue;
      }
      ts_col = 0;
      switch (fields.size()) {
        case 2: close_col = 1; break;
        case 3: high_col = 1; low_col = 2; break;
        case 5: open_col = 1; high_col = 2; low_col = 3; close_col = 4; break;
        default:
          throw DataError("cannot infer column layout from " + std::to_string(fields.size()) +
                          " unnamed columns");
      }
    }

    ++row;
    auto number = [&](std::size_t col, const char* name) {
      if (col >= fields.size())
        throw DataError(std::string("missing ") + name + " value at row " + std::to_string(row));
      const auto v = detail::parse_double(fields[col]);
      if (!v)
        throw DataError(std::string("invalid ") + name + " value '" + fields[col] + "' at row " +
                        std::to_string(row));
      return *v;
    };

    double price = 0.0;
    if (mode == PriceMode::close) {
      price = number(require(close_col, "close"), "close");
    } else {
      const auto hi = number(require(high_col, "high"), "high");
      const auto lo = number(require(low_col, "low"), "low");
      price = 0.5 * (hi + lo);
    }
    if (!(price > 0.0)) throw DataError("non-positive price at row " + std::to_string(row));
    if (*ts_col >= fields.size())
      throw DataError("missing timestamp at row " + std::to_string(row));
    timestamps.push_back(fields[*ts_col]);
    prices.push_back(price);
  }
  return PriceSeries(std::move(timestamps), std::move(prices), mode);
}

/// R_{m,i} = (P_i - P_{i-m}) / P_{i-m} for i = m..n.
inline ReturnSeries compute_returns(const PriceSeries& p, int m) {
  if (m < 1) throw DomainError("horizon m must be a positive integer");
  const auto& prices = p.prices();
  const auto horizon = static_cast<std::size_t>(m);
  if (horizon >= prices.size()) throw DataError("horizon exceeds series length");
  ReturnSeries r{m, {}};
  r.values.reserve(prices.size() - horizon);
  for (std::size_t i = horizon; i < prices.size(); ++i)
    r.values.push_back((prices[i] - prices[i - horizon]) / prices[i - horizon]);
  return r;
}

/// 1 for a strictly positive return, 0 otherwise (ties included).
inline IndicatorSeries to_indicators(const ReturnSeries& r) {
  IndicatorSeries j{r.m, {}};
  j.bits.reserve(r.values.size());
  for (double v : r.values) j.bits.push_back(v > 0.0 ? 1 : 0);
  return j;
}

/// Number of start indices admitting a window of `word_length` entries at stride m.
inline std::size_t window_count(std::size_t n_indicators, int word_length, int m) {
  const auto span = static_cast<std::size_t>(word_length - 1) * static_cast<std::size_t>(m);
  return n_indicators > span ? n_indicators - span : 0;
}

/// Word counts over an explicit start-index range.
inline WordDistribution extract_words(const IndicatorSeries& j, int word_length, StartRange range) {
  if (word_length < 1 || word_length > 63)
    throw DomainError("word length must lie in 1..63");
  if (j.m < 1) throw DomainError("stride m must be a positive integer");
  const auto available = window_count(j.bits.size(), word_length, j.m);
  if (range.count == 0 || range.first + range.count > available)
    throw DataError("series too short for (L, m) = (" + std::to_string(word_length) + ", " +
                    std::to_string(j.m) + ")");

  WordDistribution dist{word_length, j.m, {}, range.count};
  const auto stride = static_cast<std::size_t>(j.m);
  for (std::size_t i = range.first; i < range.first + range.count; ++i) {
    std::uint64_t word = 0;
    for (int k = 0; k < word_length; ++k)
      word = (word << 1) | j.bits[i + static_cast<std::size_t>(k) * stride];
    ++dist.counts[word];
  }
  return dist;
}

/// Word counts over every valid start index (step 1, maximal overlap).
inline WordDistribution extract_words(const IndicatorSeries& j, int word_length) {
  return extract_words(j, word_length,
                       StartRange{0, window_count(j.bits.size(), word_length, j.m)});
}

}  // namespace mktinfo
