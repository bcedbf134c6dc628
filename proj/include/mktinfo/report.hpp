#pragma once

// JSON and CSV encodings of profiles, theory curves, log-log curves and price series.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mktinfo/entropy.hpp"
#include "mktinfo/fractional_theory.hpp"
#include "mktinfo/scaling.hpp"
#include "mktinfo/series.hpp"

namespace mktinfo {

namespace detail {

inline std::string format_number(double v, int digits = 12) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

template <class T>
std::string format_cell(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>)
    return format_number(*v);
  else
    return std::to_string(*v);
}

template <class T>
nlohmann::json grid_to_json(const Grid<T>& g) {
  auto rows = nlohmann::json::array();
  for (std::size_t r = 0; r < g.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (std::size_t c = 0; c < g.cols(); ++c) {
      const auto& cell = g.at(r, c);
      row.push_back(cell ? nlohmann::json(*cell) : nlohmann::json(nullptr));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// {m_values, L_max, H, I, partial, bounds, partial_bounds, n_obs, confidence, n}.
/// H has L_max + 1 rows (word lengths 1..L_max+1); the information grids have L_max rows
/// (lags 1..L_max). Columns follow m_values; absent cells are null.
inline nlohmann::json profile_to_json(const MultiscaleProfile& p) {
  const auto& e = p.entropy;
  const auto& i = p.information;
  return nlohmann::json{
      {"m_values", e.m_values},
      {"L_max", e.max_lags},
      {"H", detail::grid_to_json(e.entropy)},
      {"I", detail::grid_to_json(i.information)},
      {"partial", detail::grid_to_json(i.partial)},
      {"bounds", detail::grid_to_json(i.bounds)},
      {"partial_bounds", detail::grid_to_json(i.partial_bounds)},
      {"n_obs", detail::grid_to_json(e.n_obs)},
      {"confidence", i.confidence},
      {"n", i.n},
  };
}

/// Long format, one row per (L, m) with L the number of lags: H is the entropy of
/// (L+1)-words, I, partial, bound and partial_bound refer to the information of L lags.
/// The L = 0 row carries the entropy of single indicators only.
inline void write_profile_csv(std::ostream& out, const MultiscaleProfile& p) {
  const auto& e = p.entropy;
  const auto& info = p.information;
  out << "L,m,H,I,partial,bound,partial_bound\n";
  for (int lags = 0; lags <= e.max_lags; ++lags) {
    for (int m : e.m_values) {
      out << lags << ',' << m << ',' << detail::format_cell(e.H(lags + 1, m)) << ','
          << detail::format_cell(info.I(lags, m)) << ','
          << detail::format_cell(info.partial_information(lags, m)) << ','
          << detail::format_cell(info.bound(lags, m)) << ','
          << detail::format_cell(info.partial_bound(lags, m)) << '\n';
    }
  }
}

inline nlohmann::json curve_to_json(const TheoryCurve& c) {
  nlohmann::json fixed = nlohmann::json::object();
  if (c.model == TheoryModel::delampertized) {
    if (c.abscissa_kind == TheoryAbscissa::hurst) {
      fixed["m"] = c.fixed.m;
      fixed["theta"] = c.fixed.theta;
    } else {
      fixed["hurst"] = c.fixed.hurst;
    }
  }
  return nlohmann::json{{"model", to_string(c.model)},
                        {"abscissa_name", to_string(c.abscissa_kind)},
                        {"fixed", fixed},
                        {"abscissa", c.abscissa},
                        {"I2", c.ordinate}};
}

inline std::string curve_label(const TheoryCurve& c) {
  if (c.model == TheoryModel::fbm) return "I2";
  if (c.abscissa_kind == TheoryAbscissa::hurst)
    return "I2[m=" + detail::format_number(c.fixed.m) +
           ";theta=" + detail::format_number(c.fixed.theta) + "]";
  return "I2[hurst=" + detail::format_number(c.fixed.hurst) + "]";
}

/// Wide CSV: the shared abscissa, then one I2 column per curve. A single curve gives the
/// two-column form (abscissa, I2).
inline void write_curves_csv(std::ostream& out, const std::vector<TheoryCurve>& curves) {
  if (curves.empty()) return;
  const auto& first = curves.front();
  for (const auto& c : curves)
    if (c.abscissa != first.abscissa) throw DomainError("curves do not share an abscissa grid");
  out << to_string(first.abscissa_kind);
  if (curves.size() == 1)
    out << ",I2";
  else
    for (const auto& c : curves) out << ',' << curve_label(c);
  out << '\n';
  for (std::size_t k = 0; k < first.abscissa.size(); ++k) {
    out << detail::format_number(first.abscissa[k]);
    for (const auto& c : curves) out << ',' << detail::format_number(c.ordinate[k]);
    out << '\n';
  }
}

inline nlohmann::json loglog_to_json(const LogLogCurve& c) {
  auto points = nlohmann::json::array();
  for (std::size_t k = 0; k < c.scales.size(); ++k) {
    const bool positive = c.moments[k] > 0.0;
    points.push_back({{"scale", c.scales[k]},
                      {"moment", c.moments[k]},
                      {"log2_scale", std::log2(static_cast<double>(c.scales[k]))},
                      {"log2_moment", positive ? nlohmann::json(std::log2(c.moments[k])) : nlohmann::json(nullptr)},
                      {"in_fit_range", c.in_fit_range(c.scales[k])}});
  }
  auto second = nlohmann::json::array();
  for (const auto& d : c.second_differences())
    second.push_back(d ? nlohmann::json(*d) : nlohmann::json(nullptr));
  return nlohmann::json{{"slope", c.slope},
                        {"intercept", c.intercept},
                        {"hurst", c.hurst_estimate},
                        {"fit_range", {c.fit_range.min_scale, c.fit_range.max_scale}},
                        {"points", points},
                        {"second_differences", second},
                        {"max_abs_second_difference", c.max_abs_second_difference()}};
}

inline void write_loglog_csv(std::ostream& out, const LogLogCurve& c) {
  out << "log2_scale,log2_moment,in_fit_range\n";
  for (std::size_t k = 0; k < c.scales.size(); ++k) {
    out << detail::format_number(std::log2(static_cast<double>(c.scales[k]))) << ',';
    if (c.moments[k] > 0.0) out << detail::format_number(std::log2(c.moments[k]));
    out << ',' << (c.in_fit_range(c.scales[k]) ? 1 : 0) << '\n';
  }
}

/// CSV readable by load_prices: '#'-prefixed comment lines, then "timestamp,close" rows.
/// Prices are written with 17 significant digits so they read back exactly.
inline void write_price_csv(std::ostream& out, const PriceSeries& p,
                            const std::vector<std::string>& comments = {}) {
  for (const auto& line : comments) out << "# " << line << '\n';
  out << "timestamp,close\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    out << p.timestamps()[i] << ',' << detail::format_number(p.prices()[i], 17) << '\n';
}

}  // namespace mktinfo
