#include "magnifier/magnifier_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "magnifier/hash.hpp"

namespace magnifier {

void MagnifierParams::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); };
  if (!(q > 0.0 && q < 1.0)) fail("q must lie strictly between 0 and 1");
  if (total_memory_bytes == 0) fail("memory budget must be positive");
  if (threshold == 0) fail("threshold T must be positive");
  // The gate compares against the widest tower counter.
  if (threshold > (std::uint64_t{1} << TowerFilter::kDefaultWidths.back()) - 1) {
    fail("threshold T exceeds the tower filter's counter range");
  }
  if (d == 0) fail("d must be positive");
  if (!(lambda > 0.0)) fail("lambda must be positive");
  if (r == 0 || r % 2 != 0) fail("r must be positive and even");
  if (s == 0 || s % 2 != 0) fail("s must be positive and even");
}

CapacityPlan plan_capacity(const MagnifierParams& params,
                           std::optional<std::uint64_t> distinct_keys) {
  params.validate();
  const auto memory = static_cast<double>(params.total_memory_bytes);
  const auto& widths = TowerFilter::kDefaultWidths;

  CapacityPlan plan{};
  plan.bucket_bytes = bucket_bytes(params.d, params.r, params.s);
  plan.buckets = static_cast<std::size_t>(std::floor((1.0 - params.q) * memory /
                                                     static_cast<double>(plan.bucket_bytes)));
  plan.value_sketch_bytes = plan.buckets * plan.bucket_bytes;

  const auto tower_budget = static_cast<std::size_t>(std::floor(params.q * memory));
  const std::size_t granule = std::max<std::size_t>(1, widths.back() / 8);
  plan.tower_arrays = widths.size();
  plan.tower_bytes_per_array = tower_budget / plan.tower_arrays / granule * granule;
  plan.tower_bytes = plan.tower_bytes_per_array * plan.tower_arrays;

  if (plan.buckets == 0) {
    throw Error(ErrorCode::kInfeasibleLayout,
                "infeasible layout: " + std::to_string(params.total_memory_bytes) +
                    " bytes cannot hold one value-sketch bucket of " +
                    std::to_string(plan.bucket_bytes) + " bytes");
  }
  if (plan.tower_bytes_per_array == 0) {
    throw Error(ErrorCode::kInfeasibleLayout,
                "infeasible layout: tower filter share is too small for one counter per array");
  }
  if (distinct_keys) {
    plan.distinct_keys = distinct_keys;
    plan.predicted_collision_probability =
        collision_probability(*distinct_keys, plan.buckets, params.d);
  }
  return plan;
}

double collision_probability(std::uint64_t distinct_keys, std::uint64_t buckets,
                             std::uint64_t cells_per_bucket) {
  if (buckets == 0) throw Error(ErrorCode::kInvalidArgument, "buckets must be positive");
  if (cells_per_bucket == 0) {
    throw Error(ErrorCode::kInvalidArgument, "cells per bucket must be positive");
  }
  const double load = static_cast<double>(distinct_keys) / static_cast<double>(buckets);
  if (load == 0.0) return 0.0;
  const auto d = static_cast<double>(cells_per_bucket);

  // Poisson terms in log space: log P(W = i) = -load + i ln(load) - ln(i!).
  auto log_term = [&](double i) { return -load + i * std::log(load) - std::lgamma(i + 1.0); };

  if (load < d + 1.0) {
    // Mass sits at or below d: sum the upper tail directly; terms shrink
    // geometrically once i > load.
    double tail = 0.0;
    double term = std::exp(log_term(d + 1.0));
    for (double i = d + 1.0; term > 0.0; ++i) {
      tail += term;
      if (term < tail * 1e-17) break;
      term *= load / (i + 1.0);
    }
    return std::clamp(tail, 0.0, 1.0);
  }
  // Mass sits above d: 1 - lower sum, accumulated from the largest term down.
  double lower = 0.0;
  double term = std::exp(log_term(d));
  for (double i = d; i >= 0.0; --i) {
    lower += term;
    if (term < lower * 1e-17) break;
    term *= i / load;
  }
  return std::clamp(1.0 - lower, 0.0, 1.0);
}

MagnifierSketch::MagnifierSketch(const MagnifierParams& params)
    : params_(params),
      plan_(plan_capacity(params)),
      tower_(plan_.tower_bytes_per_array, TowerFilter::kDefaultWidths,
             derive_seed(params.seed, 0x7043)),
      values_(ValueSketchConfig{
          .buckets = plan_.buckets,
          .cells_per_bucket = params.d,
          .lambda = params.lambda,
          .candidate_size = params.r,
          .representative_size = params.s,
          .w = params.w,
          .seed = derive_seed(params.seed, 0x7a15),
      }) {}

bool MagnifierSketch::insert(std::uint64_t key, ExtendedValue v) {
  if (!v.is_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "sketch accepts finite values only");
  }
  const auto slots = tower_.locate(key);
  if (tower_.query(slots) < params_.threshold) {
    tower_.insert(slots);
    ++screened_;
    return false;
  }
  values_.insert(key, v);
  ++admitted_;
  return true;
}

}  // namespace magnifier
