#include "magnifier/magnifier_sketch.hpp"

#include <cmath>
#include <random>
#include <unordered_map>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "magnifier/datagen.hpp"

namespace magnifier {
namespace {

ExtendedValue fin(double v) { return ExtendedValue::finite(v); }

MagnifierParams small_params(std::uint32_t threshold) {
  MagnifierParams p;
  p.total_memory_bytes = 64 * 1024;
  p.threshold = threshold;
  p.seed = 3;
  return p;
}

TEST(MagnifierSketch, GateAdmitsAfterThreshold) {
  MagnifierSketch sketch(small_params(40));
  for (int i = 1; i <= 40; ++i) {
    EXPECT_FALSE(sketch.insert(7, fin(i))) << i;
  }
  EXPECT_FALSE(sketch.values().tracks(7));
  EXPECT_TRUE(sketch.insert(7, fin(41)));
  EXPECT_EQ(sketch.query(7), fin(41));
  EXPECT_EQ(sketch.screened_items(), 40u);
  EXPECT_EQ(sketch.admitted_items(), 1u);
}

TEST(MagnifierSketch, ThresholdOneAdmitsSecondItem) {
  MagnifierSketch sketch(small_params(1));
  EXPECT_FALSE(sketch.insert(1, fin(5)));
  EXPECT_TRUE(sketch.insert(1, fin(6)));
  EXPECT_EQ(sketch.query(1), fin(6));
}

TEST(MagnifierSketch, ColdKeyIsNotTracked) {
  MagnifierSketch sketch(small_params(40));
  for (int i = 0; i < 10; ++i) sketch.insert(99, fin(i));
  try {
    (void)sketch.query(99);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotTracked);
  }
}

TEST(MagnifierSketch, ConstantStreamReturnsConstant) {
  MagnifierSketch sketch(small_params(40));
  for (int i = 0; i < 41; ++i) sketch.insert(5, fin(12.5));
  EXPECT_EQ(sketch.query(5), fin(12.5));
}

TEST(MagnifierSketch, RejectsNonFiniteValues) {
  MagnifierSketch sketch(small_params(40));
  EXPECT_THROW(sketch.insert(1, ExtendedValue::pos_inf()), Error);
  EXPECT_EQ(sketch.screened_items(), 0u);
}

TEST(MagnifierSketch, ZipfScreeningKeepsMassButDropsKeys) {
  StreamSpec spec;
  spec.n_items = 200'000;
  spec.n_keys = 10'000;
  spec.seed = 4;
  const auto stream = generate(spec);
  MagnifierParams params;
  params.seed = 4;
  MagnifierSketch sketch(params);
  std::unordered_map<std::uint64_t, bool> admitted_key;
  for (const auto& item : stream) {
    const bool admitted = sketch.insert(item.key, fin(item.value));
    auto& flag = admitted_key[item.key];
    flag = flag || admitted;
  }
  std::size_t keys_admitted = 0;
  for (const auto& [key, flag] : admitted_key) keys_admitted += flag;
  const double key_fraction = static_cast<double>(keys_admitted) / admitted_key.size();
  const double item_fraction =
      static_cast<double>(sketch.admitted_items()) / static_cast<double>(stream.size());
  EXPECT_LT(key_fraction, 0.1);
  EXPECT_GT(item_fraction, 0.5);
}

TEST(MagnifierSketch, HeavyKeyRankStaysNearMedian) {
  constexpr int kTrials = 100;
  int good = 0;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < kTrials; ++trial) {
    MagnifierParams p = small_params(40);
    p.seed = rng();
    MagnifierSketch sketch(p);
    ExactOracle oracle;
    for (int i = 0; i < 10'000; ++i) {
      const auto v = fin(unit(rng));
      sketch.insert(1, v);
      oracle.insert(1, v);
    }
    const auto& values = oracle.values(1);
    const auto estimate = nearest_present(values, sketch.query(1));
    good += std::abs(rank_of(values, estimate) - 0.5) <= 0.2;
  }
  EXPECT_GE(good, 98);
}

// Property: an item reaches the value sketch exactly when the tower already
// counted at least T items for its key before it.
TEST(MagnifierSketch, GateMatchesTowerEstimate) {
  MagnifierParams p;
  p.total_memory_bytes = 16 * 1024;
  p.threshold = 5;
  p.q = 0.02;
  MagnifierSketch sketch(p);
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::uint64_t> keys(1, 3000);
  for (int i = 0; i < 50'000; ++i) {
    const auto key = keys(rng);
    const auto slots = sketch.tower().locate(key);
    const auto before = sketch.tower().query(slots);
    const bool admitted = sketch.insert(key, fin(i));
    ASSERT_EQ(admitted, before >= p.threshold);
    if (admitted) ASSERT_EQ(sketch.tower().query(slots), before);
  }
}

TEST(CollisionProbability, EdgeCasesAndMonotonicity) {
  EXPECT_EQ(collision_probability(0, 100, 4), 0.0);
  double previous = 0.0;
  for (std::uint64_t h = 100; h <= 5000; h += 100) {
    const double p = collision_probability(h, 500, 4);
    EXPECT_GE(p, previous);
    EXPECT_LE(p, 1.0);
    previous = p;
  }
  EXPECT_GT(collision_probability(1000, 500, 4), collision_probability(1000, 500, 7));
  EXPECT_THROW(collision_probability(10, 0, 4), Error);
}

TEST(CollisionProbability, AgreesWithRegularizedGamma) {
  // P(Poisson(m) > d) = P(d + 1, m), the regularized lower incomplete gamma.
  for (std::uint64_t d : {1u, 4u, 7u, 20u}) {
    for (std::uint64_t h : {1u, 50u, 1000u, 4000u, 100000u}) {
      const double load = static_cast<double>(h) / 500.0;
      const double expected = boost::math::gamma_p(static_cast<double>(d + 1), load);
      const double got = collision_probability(h, 500, d);
      EXPECT_NEAR(got, expected, 1e-12 + 1e-9 * expected) << "d=" << d << " h=" << h;
    }
  }
}

TEST(PlanCapacity, DefaultLayout) {
  const auto plan = plan_capacity(MagnifierParams{});
  EXPECT_EQ(plan.bucket_bytes, 1726u);
  EXPECT_EQ(plan.buckets, 266u);
  EXPECT_EQ(plan.tower_arrays, 3u);
  EXPECT_EQ(plan.tower_bytes_per_array, 17066u);
  EXPECT_LE(plan.value_sketch_bytes + plan.tower_bytes, 500u * 1024u);
  EXPECT_FALSE(plan.distinct_keys.has_value());
}

TEST(PlanCapacity, ReportsPredictedCollisions) {
  const auto plan = plan_capacity(MagnifierParams{}, 2000);
  ASSERT_TRUE(plan.predicted_collision_probability.has_value());
  EXPECT_DOUBLE_EQ(*plan.predicted_collision_probability, collision_probability(2000, 266, 7));
}

TEST(PlanCapacity, MemoryScalesBuckets) {
  MagnifierParams p;
  p.total_memory_bytes = 1'000'000;
  const auto a = plan_capacity(p);
  p.total_memory_bytes = 2'000'000;
  const auto b = plan_capacity(p);
  EXPECT_NEAR(static_cast<double>(b.buckets), 2.0 * static_cast<double>(a.buckets), 1.0);
  for (std::size_t m : {4096u, 100'000u, 777'777u}) {
    p.total_memory_bytes = m;
    const auto plan = plan_capacity(p);
    EXPECT_LE(plan.value_sketch_bytes + plan.tower_bytes, m);
  }
}

TEST(PlanCapacity, RejectsBadParameters) {
  MagnifierParams p;
  p.q = 0.0;
  EXPECT_THROW(plan_capacity(p), Error);
  p.q = 1.0;
  EXPECT_THROW(plan_capacity(p), Error);
  p = MagnifierParams{};
  p.threshold = 70000;
  EXPECT_THROW(plan_capacity(p), Error);
  p = MagnifierParams{};
  p.r = 15;
  EXPECT_THROW(plan_capacity(p), Error);
  p = MagnifierParams{};
  p.total_memory_bytes = 1000;
  try {
    (void)plan_capacity(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleLayout);
  }
}

}  // namespace
}  // namespace magnifier
