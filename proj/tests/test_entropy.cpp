#include <gtest/gtest.h>

#include <cmath>

#include "mktinfo/entropy.hpp"
#include "mktinfo/random.hpp"
#include "oracles.hpp"

using namespace mktinfo;

namespace {

WordDistribution dist_of(std::map<std::uint64_t, std::size_t> counts, int length) {
  std::size_t total = 0;
  for (const auto& [w, c] : counts) total += c;
  return {length, 1, std::move(counts), total};
}

std::vector<std::uint8_t> alternating(std::size_t n) {
  std::vector<std::uint8_t> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<std::uint8_t>(i % 2 == 0);
  return b;
}

std::vector<std::uint8_t> random_bits(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint8_t> b(n);
  for (auto& x : b) x = rng.uniform() < p;
  return b;
}

// B(2, K) extended cyclically so that each K-word occurs exactly once among linear windows.
std::vector<std::uint8_t> exact_fair_coin(int K) {
  auto seq = oracle::de_bruijn(K);
  for (int i = 0; i < K - 1; ++i) seq.push_back(seq[static_cast<std::size_t>(i)]);
  return seq;
}

}  // namespace

TEST(ShannonEntropy, Examples) {
  EXPECT_DOUBLE_EQ(shannon_entropy(dist_of({{0, 1}, {1, 1}}, 1)), 1.0);
  EXPECT_DOUBLE_EQ(shannon_entropy(dist_of({{7, 5}}, 3)), 0.0);
  // mpmath: -(3/4 log2 3/4 + 1/4 log2 1/4)
  EXPECT_NEAR(shannon_entropy(dist_of({{0, 3}, {1, 1}}, 1)), 0.811278124459132864, 1e-15);
  EXPECT_THROW(shannon_entropy(WordDistribution{}), DataError);
}

TEST(ShannonEntropy, EntropyBitsOfProbabilities) {
  const std::vector<double> p{0.5, 0.25, 0.25, 0.0};
  EXPECT_DOUBLE_EQ(entropy_bits(p), 1.5);
  const std::vector<double> bad{1.5, -0.5};
  EXPECT_THROW(entropy_bits(bad), DomainError);
}

TEST(EmpiricalEntropy, Examples) {
  EXPECT_DOUBLE_EQ(empirical_entropy({1, alternating(51)}, 2), 1.0);
  EXPECT_DOUBLE_EQ(empirical_entropy({1, std::vector<std::uint8_t>(40, 1)}, 4), 0.0);
  const IndicatorSeries fair{1, exact_fair_coin(8)};
  for (int L = 1; L <= 8; ++L)
    EXPECT_NEAR(shannon_entropy(extract_words(fair, L, {0, 256})), L, 1e-12);
}

TEST(EmpiricalEntropy, BoundedByWordLength) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const IndicatorSeries j{1 + static_cast<int>(seed % 3), random_bits(500, 0.3 + 0.1 * seed, seed)};
    for (int L = 1; L <= 8; ++L) {
      const double h = empirical_entropy(j, L);
      EXPECT_GE(h, 0.0);
      EXPECT_LE(h, L + 1e-12);
      EXPECT_NEAR(h, oracle::entropy_of_counts(oracle::string_word_counts(
                         j.bits, L, j.m, 0, window_count(j.bits.size(), L, j.m))),
                  1e-12);
    }
  }
}

TEST(MarketInformation, Examples) {
  EXPECT_DOUBLE_EQ(market_information({1, std::vector<std::uint8_t>(30, 0)}, 1), 1.0);
  EXPECT_DOUBLE_EQ(market_information({1, alternating(30)}, 1), 1.0);
  const IndicatorSeries fair{1, exact_fair_coin(6)};
  // Over the 64 starts of the 6-word range every shorter prefix is uniform as well.
  for (int L = 1; L <= 5; ++L) {
    const StartRange range{0, 64};
    const double h_short = shannon_entropy(extract_words(fair, L, range));
    const double h_long = shannon_entropy(extract_words(fair, L + 1, range));
    EXPECT_NEAR(1.0 + h_short - h_long, 0.0, 1e-12);
  }
  EXPECT_THROW(market_information(fair, 0), DomainError);
}

TEST(MarketInformation, ChainRuleAgainstConditionalEntropy) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const int m = 1 + static_cast<int>(seed % 3);
    const IndicatorSeries j{m, random_bits(700, 0.45, 100 + seed)};
    for (int L = 1; L <= 7; ++L) {
      const auto count = window_count(j.bits.size(), L + 1, m);
      const double cond = oracle::conditional_entropy(oracle::string_word_counts(j.bits, L + 1, m, 0, count));
      const double info = market_information(j, L);
      EXPECT_NEAR(info, 1.0 - cond, 1e-12);
      EXPECT_LE(info, 1.0 + 1e-12);
      EXPECT_GE(info, -1.0 - 1e-12);
    }
  }
}

TEST(SignificanceBound, Examples) {
  // mpmath: -ln(0.05) / (2999 ln 2)
  const auto b1 = significance_bound(3000, 1, 1, 0.95);
  EXPECT_EQ(b1.shape, 1);
  EXPECT_NEAR(b1.value, 0.00144112307265333856, 1e-17);
  EXPECT_NEAR(b1.scale, 1.0 / (2999.0 * std::log(2.0)), 1e-18);

  // mpmath: Gamma(2, 1/(2998 ln 2)) 95% quantile
  const auto b2 = significance_bound(3000, 2, 1, 0.95);
  EXPECT_EQ(b2.shape, 2);
  EXPECT_NEAR(b2.value, 0.00228283849744202741, 1e-14);
  EXPECT_NEAR(oracle::gamma_cdf_quadrature(2.0, b2.scale, b2.value), 0.95, 1e-9);

  EXPECT_LT(significance_bound(3000, 1, 1, 1e-9).value, 1e-12);
}

TEST(SignificanceBound, MonotoneInLagsAndConfidence) {
  double prev = 0.0;
  for (int L = 1; L <= 10; ++L) {
    const double v = significance_bound(3000, L, 2, 0.95).value;
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_LT(significance_bound(3000, 3, 1, 0.9).value, significance_bound(3000, 3, 1, 0.99).value);
}

TEST(SignificanceBound, Errors) {
  EXPECT_THROW(significance_bound(10, 5, 2, 0.95), DataError);
  EXPECT_THROW(significance_bound(3000, 0, 1, 0.95), DomainError);
  EXPECT_THROW(significance_bound(3000, 1, 1, 1.0), DomainError);
  EXPECT_THROW(significance_bound(3000, 1, 0, 0.95), DomainError);
}

TEST(InformationProfile, AlternatingBitsCarryOneBit) {
  const std::vector<IndicatorSeries> family{{1, alternating(201)}};
  const auto p = information_profile(family, 7, 0.95);
  for (int L = 1; L <= 7; ++L) {
    EXPECT_NEAR(*p.information.I(L, 1), 1.0, 1e-12);
    EXPECT_NEAR(*p.entropy.H(L, 1), 1.0, 1e-12);
  }
  EXPECT_NEAR(*p.information.partial_information(1, 1), 1.0, 1e-12);
  for (int L = 2; L <= 7; ++L) EXPECT_NEAR(*p.information.partial_information(L, 1), 0.0, 1e-12);
}

TEST(InformationProfile, ExactFairCoin) {
  const std::vector<IndicatorSeries> family{{1, exact_fair_coin(8)}};
  const auto p = information_profile(family, 7, 0.95);
  for (int w = 1; w <= 8; ++w) {
    EXPECT_NEAR(*p.entropy.H(w, 1), w, 1e-12);
    EXPECT_EQ(*p.entropy.n_obs.at(static_cast<std::size_t>(w - 1), 0), 256u);
  }
  for (int L = 1; L <= 7; ++L) EXPECT_NEAR(*p.information.I(L, 1), 0.0, 1e-12);
}

TEST(InformationProfile, ChainRuleAndPartialSums) {
  const auto bits = random_bits(3000, 0.5, 9);
  std::vector<IndicatorSeries> family;
  for (int m : {1, 2, 3}) {
    // Indicators of one price series have n - m + 1 entries; emulate by truncation.
    family.push_back({m, std::vector<std::uint8_t>(bits.begin(), bits.end() - (m - 1))});
  }
  const auto p = information_profile(family, 7, 0.95);
  for (int m : {1, 2, 3}) {
    double cumulative = 0.0;
    for (int L = 1; L <= 7; ++L) {
      const double info = *p.information.I(L, m);
      EXPECT_NEAR(info, 1.0 + *p.entropy.H(L, m) - *p.entropy.H(L + 1, m), 1e-12);
      EXPECT_LE(info, 1.0 + 1e-12);
      cumulative += *p.information.partial_information(L, m);
      EXPECT_NEAR(cumulative, info, 1e-12);
      EXPECT_NEAR(*p.information.bound(L, m), significance_bound(3000, L, m, 0.95).value, 1e-15);
    }
    for (int w = 1; w <= 8; ++w) {
      EXPECT_GE(*p.entropy.H(w, m), 0.0);
      EXPECT_LE(*p.entropy.H(w, m), w + 1e-12);
    }
    // every cell of the column uses the same windows
    const auto n_obs = *p.entropy.n_obs.at(0, *p.entropy.column(m));
    EXPECT_EQ(n_obs, window_count(family[static_cast<std::size_t>(m - 1)].bits.size(), 8, m));
  }
  EXPECT_EQ(p.information.n, 3000);
}

TEST(InformationProfile, AbsentCellsWhenSeriesShort) {
  const auto prices = PriceSeries::indexed({1, 2, 1.5, 3, 2.5, 4});
  const std::vector<int> ms{1, 2, 10};
  const auto p = information_profile(prices, ms, 6, 0.95);
  EXPECT_TRUE(p.entropy.H(5, 1).has_value());
  EXPECT_FALSE(p.entropy.H(6, 1).has_value());
  EXPECT_TRUE(p.information.I(4, 1).has_value());
  EXPECT_FALSE(p.information.I(5, 1).has_value());
  EXPECT_FALSE(p.entropy.H(1, 10).has_value());
  EXPECT_FALSE(p.information.I(1, 10).has_value());
  EXPECT_FALSE(p.information.I(0, 1).has_value());
  EXPECT_EQ(p.information.n, 5);
}

TEST(InformationProfile, ConstantPrices) {
  const auto prices = PriceSeries::indexed(std::vector<double>(50, 42.0));
  const std::vector<int> ms{1, 3};
  const auto p = information_profile(prices, ms, 5, 0.95);
  for (int m : ms) {
    for (int w = 1; w <= 6; ++w) EXPECT_EQ(*p.entropy.H(w, m), 0.0);
    for (int L = 1; L <= 5; ++L) EXPECT_EQ(*p.information.I(L, m), 1.0);
  }
}

TEST(InformationProfile, Errors) {
  const std::vector<IndicatorSeries> family{{1, alternating(20)}};
  EXPECT_THROW(information_profile(family, 0, 0.95), DomainError);
  EXPECT_THROW(information_profile(family, 3, 1.5), DomainError);
  const std::vector<IndicatorSeries> mismatch{{1, alternating(20)}, {2, alternating(30)}};
  EXPECT_THROW(information_profile(mismatch, 3, 0.95), DomainError);
}

TEST(Theorem3, MarkovEntropyConcaveNondecreasing) {
  for (int order = 1; order <= 3; ++order) {
    Rng rng(static_cast<std::uint64_t>(order));
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<double> p_one(std::size_t{1} << order);
      for (auto& p : p_one) p = 0.05 + 0.9 * rng.uniform();
      std::vector<double> h;
      for (int L = 1; L <= 8; ++L)
        h.push_back(oracle::entropy_of_probabilities(oracle::markov_word_probabilities(order, p_one, L)));
      for (std::size_t k = 1; k < h.size(); ++k) EXPECT_GE(h[k] - h[k - 1], -1e-12);
      for (std::size_t k = 2; k < h.size(); ++k) EXPECT_LE(h[k] - 2 * h[k - 1] + h[k - 2], 1e-12);
      // Beyond the order the increments are constant (the conditional entropy rate).
      for (std::size_t k = static_cast<std::size_t>(order) + 1; k < h.size(); ++k)
        EXPECT_NEAR(h[k] - h[k - 1], h[static_cast<std::size_t>(order)] - h[static_cast<std::size_t>(order) - 1], 1e-10);
    }
  }
}

TEST(EntropyRateSlope, Examples) {
  EntropyProfile p;
  p.m_values = {1};
  p.max_lags = 6;
  p.entropy = Grid<double>(7, 1);
  for (int w = 1; w <= 7; ++w) p.entropy.at(static_cast<std::size_t>(w - 1), 0) = static_cast<double>(w);
  EXPECT_NEAR(entropy_rate_slope(p, 1, 1, 7), 1.0, 1e-12);
  for (int w = 1; w <= 7; ++w) p.entropy.at(static_cast<std::size_t>(w - 1), 0) = 0.7;
  EXPECT_NEAR(entropy_rate_slope(p, 1, 1, 7), 0.0, 1e-12);
  EXPECT_THROW(entropy_rate_slope(p, 1, 3, 3), DataError);
  EXPECT_THROW(entropy_rate_slope(p, 2, 1, 7), DataError);
}
