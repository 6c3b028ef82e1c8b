#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "magnifier/extended_value.hpp"
#include "magnifier/quantile.hpp"
#include "magnifier/tower_filter.hpp"
#include "magnifier/value_sketch.hpp"

namespace magnifier {

struct MagnifierParams {
  Quantile w{0.5};
  std::size_t total_memory_bytes = 500 * 1024;
  double q = 0.1;              // fraction of memory given to the tower filter
  std::uint32_t threshold = 40;
  std::uint32_t d = 7;
  double lambda = 4.0;
  std::uint32_t r = 16;
  std::uint32_t s = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

// Accounted size of one value-sketch bucket:
//   d * (8 B key + 4 B vote+ + (r + s) * 9 B estimator slots) + 4 B vote-
// where a slot is an 8-byte value plus a 1-byte sentinel tag.
constexpr std::size_t bucket_bytes(std::uint32_t d, std::uint32_t r, std::uint32_t s) noexcept {
  return std::size_t{d} * (8 + 4 + (std::size_t{r} + s) * 9) + 4;
}

struct CapacityPlan {
  std::size_t buckets;                // u
  std::size_t bucket_bytes;
  std::size_t value_sketch_bytes;     // u * bucket_bytes
  std::size_t tower_arrays;
  std::size_t tower_bytes_per_array;
  std::size_t tower_bytes;
  std::optional<std::uint64_t> distinct_keys;         // caller-supplied H
  std::optional<double> predicted_collision_probability;
};

// Deterministic memory layout for `params`. u = floor((1 - q) M / bucket_bytes);
// each tower array gets floor(floor(q M) / A) bytes, rounded down to whole
// counters of the widest width. Throws kInfeasibleLayout if u == 0 or a tower
// array cannot hold one counter.
CapacityPlan plan_capacity(const MagnifierParams& params,
                           std::optional<std::uint64_t> distinct_keys = std::nullopt);

// Poisson approximation of the chance that a bucket of d cells receives more
// than d of H distinct keys hashed over u buckets:
//   1 - e^{-H/u} * sum_{i=0..d} (H/u)^i / i!
double collision_probability(std::uint64_t distinct_keys, std::uint64_t buckets,
                             std::uint64_t cells_per_bucket);

// Two-stage per-key quantile sketch. A key's items are counted by the tower
// filter until its estimate reaches T; only later items reach the value
// sketch. Items stopped by the filter are not recorded anywhere.
class MagnifierSketch {
 public:
  explicit MagnifierSketch(const MagnifierParams& params);

  // Returns true when the item reached the value sketch.
  bool insert(std::uint64_t key, ExtendedValue v);
  ExtendedValue query(std::uint64_t key) const { return values_.query(key); }

  const MagnifierParams& params() const noexcept { return params_; }
  const CapacityPlan& plan() const noexcept { return plan_; }
  const TowerFilter& tower() const noexcept { return tower_; }
  const ValueSketch& values() const noexcept { return values_; }

  std::uint64_t screened_items() const noexcept { return screened_; }
  std::uint64_t admitted_items() const noexcept { return admitted_; }

 private:
  MagnifierParams params_;
  CapacityPlan plan_;
  TowerFilter tower_;
  ValueSketch values_;
  std::uint64_t screened_ = 0;
  std::uint64_t admitted_ = 0;
};

}  // namespace magnifier
