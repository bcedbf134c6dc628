#pragma once

// Command-line front end: analyze, simulate, theory, hurst.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mktinfo/entropy.hpp"
#include "mktinfo/errors.hpp"
#include "mktinfo/fractional_theory.hpp"
#include "mktinfo/report.hpp"
#include "mktinfo/scaling.hpp"
#include "mktinfo/series.hpp"
#include "mktinfo/simulators.hpp"

namespace mktinfo::cli {

enum ExitCode : int { ok = 0, usage_error = 2, data_error = 3, numeric_error = 4 };

enum class Format { csv, json };

struct RunConfig {
  std::string input_path;
  std::string output_path;  // empty: standard output
  int max_lags = 7;
  std::vector<int> m_values{1, 2, 3};
  double confidence = 0.95;
  PriceMode price_mode = PriceMode::close;
  Format format = Format::json;

  // analyze / hurst
  bool with_loglog = false;
  int max_scale = 20;
  FitRange fit{1, 5};
  double linearity_tolerance = 0.5;

  // simulate
  std::string model = "fbm";
  double hurst = 0.5;
  double sigma = 1.0;
  std::string theta_spec = "1";
  double beta = 0.0;
  int tau = 1;
  std::size_t n = 3000;
  double dt = 1.0;
  std::uint64_t seed = 0;
  double p0 = 100.0;
  double scale = 0.01;

  // theory
  std::string hurst_grid = "0.05:0.95:0.05";
  std::string m_theta_grid = "0.1:5:0.1";
  std::string abscissa = "hurst";
  double m = 1.0;
};

/// Parses "a,b,c" or an inclusive range "start:stop:step".
inline std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  auto number = [&](const std::string& s) {
    const auto v = detail::parse_double(s);
    if (!v) throw DomainError("invalid number '" + s + "' in grid '" + spec + "'");
    return *v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string piece; std::getline(ss, piece, ':');) parts.push_back(piece);
    if (parts.size() != 3) throw DomainError("range grid must be start:stop:step");
    const double start = number(parts[0]), stop = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0) || stop < start) throw DomainError("invalid range grid '" + spec + "'");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(start + static_cast<double>(k) * step);
    return out;
  }
  std::stringstream ss(spec);
  for (std::string piece; std::getline(ss, piece, ',');)
    if (!detail::trim(piece).empty()) out.push_back(number(piece));
  if (out.empty()) throw DomainError("empty grid");
  return out;
}

namespace detail {

class OutputSink {
 public:
  OutputSink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw DataError("cannot open output file '" + path + "'");
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

inline PriceSeries read_prices(const RunConfig& cfg) {
  std::ifstream in(cfg.input_path);
  if (!in) throw DataError("cannot open input file '" + cfg.input_path + "'");
  return load_prices(in, cfg.price_mode);
}

inline std::vector<double> log_prices(const PriceSeries& p) {
  std::vector<double> out;
  out.reserve(p.size());
  for (double v : p.prices()) out.push_back(std::log(v));
  return out;
}

inline LogLogCurve loglog_for(const PriceSeries& p, const RunConfig& cfg, std::ostream& err) {
  if (cfg.max_scale < 1) throw DomainError("maximum scale must be at least 1");
  if (cfg.fit.min_scale < 1 || cfg.fit.max_scale < cfg.fit.min_scale)
    throw DomainError("invalid fit range");
  std::vector<int> scales;
  for (int d = 1; d <= cfg.max_scale; ++d) scales.push_back(d);
  const auto logp = log_prices(p);
  const auto sf = structure_function(logp, scales);
  std::string usable;
  for (int d : sf.scales) usable += (usable.empty() ? "" : ",") + std::to_string(d);
  if (usable.empty()) usable = "none";
  if (!sf.excluded.empty())
    err << "warning: " << sf.excluded.size()
        << " scale(s) exceed the series length and were excluded (usable scales: " << usable << ")\n";
  if (sf.scales.empty() || cfg.fit.max_scale > sf.scales.back())
    throw DataError("fit range " + std::to_string(cfg.fit.min_scale) + ".." +
                    std::to_string(cfg.fit.max_scale) + " exceeds the usable scales (" + usable + ")");
  return estimate_hurst(sf, cfg.fit);
}

inline nlohmann::json loglog_report(const LogLogCurve& curve, double tolerance) {
  auto j = loglog_to_json(curve);
  j["linearity_tolerance"] = tolerance;
  j["linear_within_tolerance"] = curve.max_abs_second_difference() <= tolerance;
  return j;
}

}  // namespace detail

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto prices = detail::read_prices(cfg);
  const auto profile = information_profile(prices, cfg.m_values, cfg.max_lags, cfg.confidence);
  detail::OutputSink sink(cfg.output_path, out);
  if (cfg.format == Format::csv) {
    write_profile_csv(*sink, profile);
    return ok;
  }
  auto j = profile_to_json(profile);
  j["price_mode"] = to_string(cfg.price_mode);
  if (cfg.with_loglog) j["loglog"] = detail::loglog_report(detail::loglog_for(prices, cfg, err),
                                                           cfg.linearity_tolerance);
  *sink << j.dump(2) << '\n';
  return ok;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  SimulatedPath path;
  std::vector<std::string> comments{"model=" + cfg.model};
  auto num = [](double v) { return mktinfo::detail::format_number(v, 17); };
  if (cfg.model == "fbm") {
    const FbmParams params{cfg.hurst, cfg.sigma};
    path = simulate_fbm(params, cfg.n, cfg.dt, cfg.seed);
    comments.push_back("hurst=" + num(params.hurst));
    comments.push_back("sigma=" + num(params.sigma));
  } else if (cfg.model == "delampertized") {
    const auto thetas = parse_grid(cfg.theta_spec);
    if (thetas.size() != 1) throw DomainError("simulate takes a single theta");
    const DelampertizedParams params{cfg.hurst, cfg.sigma, thetas.front()};
    path = simulate_delampertized(params, cfg.n, cfg.dt, cfg.seed);
    comments.push_back("hurst=" + num(params.hurst));
    comments.push_back("sigma=" + num(params.sigma));
    comments.push_back("theta=" + num(params.theta));
  } else if (cfg.model == "pseudo-periodic") {
    const PseudoPeriodicParams params{cfg.beta, cfg.tau};
    path = simulate_pseudo_periodic(params, cfg.n, cfg.seed);
    comments.push_back("beta=" + num(params.beta));
    comments.push_back("tau=" + std::to_string(params.tau));
  } else {
    throw DomainError("unknown model '" + cfg.model + "'");
  }
  comments.push_back("n=" + std::to_string(cfg.n));
  comments.push_back("dt=" + num(path.dt));
  comments.push_back("seed=" + std::to_string(cfg.seed));
  comments.push_back("p0=" + num(cfg.p0));
  comments.push_back("scale=" + num(cfg.scale));
  const auto prices = to_price_series(path, cfg.p0, cfg.scale);
  detail::OutputSink sink(cfg.output_path, out);
  write_price_csv(*sink, prices, comments);
  return ok;
}

inline int cmd_theory(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  std::vector<TheoryCurve> curves;
  if (cfg.model == "fbm") {
    curves.push_back(theory_curve(TheoryModel::fbm, parse_grid(cfg.hurst_grid)));
  } else if (cfg.model == "delampertized") {
    if (cfg.abscissa == "hurst") {
      for (double theta : parse_grid(cfg.theta_spec))
        curves.push_back(theory_curve(TheoryModel::delampertized, parse_grid(cfg.hurst_grid),
                                      TheoryFixed{0.5, cfg.m, theta}, TheoryAbscissa::hurst));
    } else if (cfg.abscissa == "m_theta") {
      curves.push_back(theory_curve(TheoryModel::delampertized, parse_grid(cfg.m_theta_grid),
                                    TheoryFixed{cfg.hurst, 1.0, 1.0}, TheoryAbscissa::m_theta));
    } else {
      throw DomainError("unknown abscissa '" + cfg.abscissa + "'");
    }
  } else {
    throw DomainError("unknown model '" + cfg.model + "'");
  }
  detail::OutputSink sink(cfg.output_path, out);
  if (cfg.format == Format::csv) {
    write_curves_csv(*sink, curves);
    return ok;
  }
  auto j = nlohmann::json::array();
  for (const auto& c : curves) j.push_back(curve_to_json(c));
  *sink << nlohmann::json{{"curves", j}}.dump(2) << '\n';
  return ok;
}

inline int cmd_hurst(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto prices = detail::read_prices(cfg);
  const auto curve = detail::loglog_for(prices, cfg, err);
  detail::OutputSink sink(cfg.output_path, out);
  if (cfg.format == Format::csv) {
    *sink << "# slope=" << mktinfo::detail::format_number(curve.slope)
          << " hurst=" << mktinfo::detail::format_number(curve.hurst_estimate) << '\n';
    write_loglog_csv(*sink, curve);
    return ok;
  }
  *sink << detail::loglog_report(curve, cfg.linearity_tolerance).dump(2) << '\n';
  return ok;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Multiscale market information of price series"};
  app.require_subcommand(1);

  const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};
  const std::map<std::string, PriceMode> modes{{"close", PriceMode::close},
                                               {"midrange", PriceMode::midrange}};

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", cfg.output_path, "Output file (default: standard output)");
    sub->add_option("--format", cfg.format, "Output format: csv or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->capture_default_str();
  };
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input,-i,--input", cfg.input_path, "Price CSV")->required();
    sub->add_option("--price-mode", cfg.price_mode, "close or midrange ((high + low) / 2)")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  };
  auto add_scales = [&](CLI::App* sub) {
    sub->add_option("--max-scale", cfg.max_scale, "Largest increment scale")->capture_default_str();
    sub->add_option("--fit-min", cfg.fit.min_scale, "Smallest scale of the fit")->capture_default_str();
    sub->add_option("--fit-max", cfg.fit.max_scale, "Largest scale of the fit")->capture_default_str();
    sub->add_option("--tolerance", cfg.linearity_tolerance,
                    "Largest |second difference| of the log-log curve still deemed linear")
        ->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "Entropy and market information profile of a price CSV");
  add_input(analyze);
  add_output(analyze);
  analyze->add_option("--lmax", cfg.max_lags, "Largest number of lags L")
      ->check(CLI::Range(1, 30))->capture_default_str();
  analyze->add_option("--m", cfg.m_values, "Return horizons, comma separated")
      ->delimiter(',')->check(CLI::PositiveNumber)->capture_default_str();
  analyze->add_option("--confidence", cfg.confidence, "Level of the significance bounds")
      ->check(CLI::Bound(0.0, 1.0))->capture_default_str();
  analyze->add_flag("--loglog", cfg.with_loglog, "Include the log-log structure function (json)");
  add_scales(analyze);

  auto* simulate = app.add_subcommand("simulate", "Write a simulated price CSV");
  simulate->add_option("model", cfg.model, "fbm, delampertized or pseudo-periodic")
      ->required()->check(CLI::IsMember({"fbm", "delampertized", "pseudo-periodic"}));
  simulate->add_option("-o,--output", cfg.output_path, "Output file (default: standard output)");
  simulate->add_option("--hurst", cfg.hurst)->capture_default_str();
  simulate->add_option("--sigma", cfg.sigma)->capture_default_str();
  simulate->add_option("--theta", cfg.theta_spec, "Mean-reversion strength")->capture_default_str();
  simulate->add_option("--beta", cfg.beta)->capture_default_str();
  simulate->add_option("--tau", cfg.tau)->capture_default_str();
  simulate->add_option("--n", cfg.n, "Path length")->capture_default_str();
  simulate->add_option("--dt", cfg.dt, "Time step")->capture_default_str();
  simulate->add_option("--seed", cfg.seed)->capture_default_str();
  simulate->add_option("--p0", cfg.p0, "Initial price")->capture_default_str();
  simulate->add_option("--scale", cfg.scale, "Multiplier on the log-path or the returns")
      ->capture_default_str();

  auto* theory = app.add_subcommand("theory", "Closed-form one-lag market information curves");
  theory->add_option("model", cfg.model, "fbm or delampertized")
      ->required()->check(CLI::IsMember({"fbm", "delampertized"}));
  add_output(theory);
  theory->add_option("--hurst-grid", cfg.hurst_grid, "start:stop:step or comma list")
      ->capture_default_str();
  theory->add_option("--theta", cfg.theta_spec, "One curve per value; start:stop:step or comma list")
      ->capture_default_str();
  theory->add_option("--m", cfg.m, "Return horizon")->capture_default_str();
  theory->add_option("--abscissa", cfg.abscissa, "hurst or m_theta")
      ->check(CLI::IsMember({"hurst", "m_theta"}))->capture_default_str();
  theory->add_option("--hurst", cfg.hurst, "Hurst exponent held fixed when the abscissa is m_theta")
      ->capture_default_str();
  theory->add_option("--m-theta-grid", cfg.m_theta_grid)->capture_default_str();

  auto* hurst = app.add_subcommand("hurst", "Log-log structure function and Hurst estimate");
  add_input(hurst);
  add_output(hurst);
  add_scales(hurst);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  try {
    if (*analyze) return cmd_analyze(cfg, out, err);
    if (*simulate) return cmd_simulate(cfg, out, err);
    if (*theory) return cmd_theory(cfg, out, err);
    if (*hurst) return cmd_hurst(cfg, out, err);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return data_error;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return numeric_error;
  }
  return usage_error;
}

}  // namespace mktinfo::cli
