#include "magnifier/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

namespace magnifier {
namespace {

ValueMultiset of(std::initializer_list<double> values) {
  ValueMultiset s;
  for (double v : values) s.insert(ExtendedValue::finite(v));
  return s;
}

ExtendedValue fin(double v) { return ExtendedValue::finite(v); }

// Enumerates every position holding x and returns the smallest, normalized.
double brute_force_rank(std::vector<double> values, double x) {
  std::sort(values.begin(), values.end());
  std::size_t best = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == x) best = std::min(best, i);
  }
  if (values.size() == 1) return 0.5;
  return static_cast<double>(best) / static_cast<double>(values.size() - 1);
}

TEST(ExtendedValue, TotalOrderWithSentinels) {
  EXPECT_LT(ExtendedValue::neg_inf(), fin(-1e300));
  EXPECT_LT(fin(1e300), ExtendedValue::pos_inf());
  EXPECT_LT(fin(1.0), fin(2.0));
  EXPECT_TRUE(ExtendedValue::neg_inf().is_neg_inf());
  EXPECT_FALSE(ExtendedValue::pos_inf().is_finite());
}

TEST(ExtendedValue, RejectsNaNAndInfinity) {
  EXPECT_THROW(fin(std::numeric_limits<double>::quiet_NaN()), Error);
  EXPECT_THROW(fin(std::numeric_limits<double>::infinity()), Error);
}

TEST(QuantileLevel, Bounds) {
  EXPECT_NO_THROW(Quantile(0.0));
  EXPECT_NO_THROW(Quantile(1.0));
  EXPECT_THROW(Quantile(-0.01), Error);
  EXPECT_THROW(Quantile(1.01), Error);
  EXPECT_THROW(Quantile(std::nan("")), Error);
}

TEST(ExactQuantile, Examples) {
  EXPECT_EQ(exact_quantile(of({10, 20, 30, 40, 50}), Quantile(0.5)), fin(30));
  for (double w : {0.0, 0.3, 1.0}) EXPECT_EQ(exact_quantile(of({7}), Quantile(w)), fin(7));
  EXPECT_EQ(exact_quantile(of({3, 1, 2}), Quantile(0.0)), fin(1));
  EXPECT_EQ(exact_quantile(of({3, 1, 2}), Quantile(1.0)), fin(3));
}

TEST(ExactQuantile, EmptyIsAnError) {
  try {
    exact_quantile(ValueMultiset{}, Quantile(0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmpty);
  }
}

TEST(ExactQuantile, SentinelsParticipate) {
  ValueMultiset s;
  s.insert(ExtendedValue::pos_inf());
  s.insert(fin(1));
  s.insert(ExtendedValue::neg_inf());
  EXPECT_EQ(exact_quantile(s, Quantile(0.5)), fin(1));
  EXPECT_TRUE(exact_quantile(s, Quantile(1.0)).is_pos_inf());
}

TEST(RankOf, Examples) {
  EXPECT_DOUBLE_EQ(rank_of(of({10, 20, 30, 40, 50}), fin(30)), 0.5);
  EXPECT_DOUBLE_EQ(rank_of(of({10, 20}), fin(20)), 1.0);
  EXPECT_DOUBLE_EQ(rank_of(of({5, 5, 5}), fin(5)), brute_force_rank({5, 5, 5}, 5));
  EXPECT_DOUBLE_EQ(rank_of(of({5, 5, 5}), fin(5)), 0.0);
  EXPECT_DOUBLE_EQ(rank_of(of({4}), fin(4)), 0.5);
}

TEST(RankOf, MatchesBruteForceWithTies) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> small(0, 9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> values(2 + trial % 17);
    for (auto& v : values) v = small(rng);
    ValueMultiset s;
    for (double v : values) s.insert(fin(v));
    for (double v : values) EXPECT_DOUBLE_EQ(rank_of(s, fin(v)), brute_force_rank(values, v));
  }
}

TEST(RankOf, AbsentValue) {
  try {
    rank_of(of({1, 2, 3}), fin(2.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAbsent);
  }
}

TEST(NearestPresent, TiesGoToSmaller) {
  const auto s = of({1, 3, 10});
  EXPECT_EQ(nearest_present(s, fin(2)), fin(1));
  EXPECT_EQ(nearest_present(s, fin(2.1)), fin(3));
  EXPECT_EQ(nearest_present(s, fin(-5)), fin(1));
  EXPECT_EQ(nearest_present(s, fin(50)), fin(10));
  EXPECT_EQ(nearest_present(s, fin(3)), fin(3));
}

TEST(AverageError, Examples) {
  ExactOracle oracle;
  for (int v = 1; v <= 101; ++v) oracle.insert(1, fin(v));
  const Quantile half(0.5);

  std::vector<KeyEstimate> perfect{{1, oracle.query(1, half)}};
  EXPECT_DOUBLE_EQ(average_error(perfect, oracle, half), 0.0);

  std::vector<KeyEstimate> off{{1, fin(61)}};
  EXPECT_NEAR(average_error(off, oracle, half), 0.1, 1e-12);

  // Ranks 0.45 and 0.65 on two keys.
  for (int v = 1; v <= 21; ++v) oracle.insert(2, fin(v));
  std::vector<KeyEstimate> two{{1, fin(46)}, {2, fin(14)}};
  EXPECT_NEAR(average_error(two, oracle, half), 0.1, 1e-12);
}

TEST(AverageError, SnapsAbsentEstimates) {
  ExactOracle oracle;
  for (int v = 1; v <= 101; ++v) oracle.insert(1, fin(v));
  std::vector<KeyEstimate> between{{1, fin(60.5)}};  // tie -> 60, rank 0.59
  EXPECT_NEAR(average_error(between, oracle, Quantile(0.5)), 0.09, 1e-12);
}

TEST(AverageError, Errors) {
  ExactOracle oracle;
  oracle.insert(1, fin(1));
  try {
    average_error({}, oracle, Quantile(0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoQueries);
  }
  std::vector<KeyEstimate> unknown{{9, fin(1)}};
  EXPECT_THROW(average_error(unknown, oracle, Quantile(0.5)), Error);
}

TEST(ExactOracle, InsertAndQuery) {
  ExactOracle oracle;
  for (int v : {1, 2, 3}) oracle.insert(7, fin(v));
  EXPECT_EQ(oracle.query(7, Quantile(0.5)), fin(2));
  EXPECT_EQ(oracle.frequency(7), 3u);
  try {
    oracle.query(8, Quantile(0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAbsentKey);
  }
  EXPECT_THROW(oracle.insert(7, ExtendedValue::pos_inf()), Error);
}

TEST(ExactOracle, MatchesSortThenIndex) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 10.0);
  ExactOracle oracle;
  std::vector<double> reference;
  for (int i = 0; i < 10000; ++i) {
    const double v = normal(rng);
    reference.push_back(v);
    oracle.insert(42, fin(v));
  }
  std::sort(reference.begin(), reference.end());
  for (double w : {0.0, 0.01, 0.25, 0.5, 0.9, 0.99, 1.0}) {
    const auto index = static_cast<std::size_t>(std::floor(w * 9999.0));
    EXPECT_EQ(oracle.query(42, Quantile(w)).value(), reference[index]) << "w=" << w;
  }
}

TEST(QuantileProperties, RankOfQuantileIsWithinOneStep) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 50;
    ValueMultiset s;
    for (int i = 0; i < n; ++i) s.insert(fin(unit(rng)));
    const double w = unit(rng);
    const double rank = rank_of(s, exact_quantile(s, Quantile(w)));
    EXPECT_LE(std::abs(rank - w), 1.0 / (n - 1) + 1e-12);
  }
}

TEST(QuantileProperties, MonotoneInW) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ValueMultiset s;
  for (int i = 0; i < 257; ++i) s.insert(fin(std::round(unit(rng) * 50)));
  ExtendedValue previous = ExtendedValue::neg_inf();
  for (int i = 0; i <= 1000; ++i) {
    const auto q = exact_quantile(s, Quantile(i / 1000.0));
    EXPECT_LE(previous, q);
    previous = q;
  }
}

TEST(QuantileProperties, AverageErrorIsRankBased) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 4.0);
  auto transform = [](double x) { return x * x * x + 2.0 * x - 7.0; };
  ExactOracle raw;
  ExactOracle mapped;
  std::vector<KeyEstimate> raw_estimates;
  std::vector<KeyEstimate> mapped_estimates;
  for (std::uint64_t key = 1; key <= 20; ++key) {
    std::vector<double> values;
    for (int i = 0; i < 40; ++i) values.push_back(unit(rng));
    for (double v : values) {
      raw.insert(key, fin(v));
      mapped.insert(key, fin(transform(v)));
    }
    const double pick = values[key % values.size()];
    raw_estimates.push_back({key, fin(pick)});
    mapped_estimates.push_back({key, fin(transform(pick))});
  }
  for (double w : {0.1, 0.5, 0.95}) {
    EXPECT_DOUBLE_EQ(average_error(raw_estimates, raw, Quantile(w)),
                     average_error(mapped_estimates, mapped, Quantile(w)));
  }
}

}  // namespace
}  // namespace magnifier
