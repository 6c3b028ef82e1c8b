#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "magnifier/calibration.hpp"
#include "magnifier/extended_value.hpp"
#include "magnifier/quantile.hpp"

namespace magnifier {

// Single-key w-quantile estimator.
//
// Calibrated samples are batched in a Candidate buffer of capacity r. When it
// fills, its two middle elements (sorted ranks r/2 and r/2 + 1) move to the
// Representative (capacity s) and the Candidate is cleared. When the
// Representative would exceed s, the minimum and maximum of the s + 2 values
// are dropped. The answer is the lower median of the Representative.
//
// Both buffers live in one flat slab. The Representative is kept sorted, so
// dropping the extremes is removing the two ends and a query is one lookup.
class PointEstimator {
 public:
  // r and s must be positive and even.
  PointEstimator(std::uint32_t r, std::uint32_t s, Quantile w, std::uint64_t seed);

  // v must be finite.
  void insert(ExtendedValue v);

  // Appends one already-calibrated sample (sentinels allowed) without
  // consulting the calibrator.
  void push_sample(ExtendedValue sample);

  // Lower median of the Representative, moved to the nearest finite neighbour
  // if it is a sentinel. Before the first flush the finite Candidate contents
  // are used instead.
  ExtendedValue query() const;

  // Drops all samples and restarts the calibration stream from `seed`.
  void reset(std::uint64_t seed) noexcept;

  std::uint32_t candidate_capacity() const noexcept { return r_; }
  std::uint32_t representative_capacity() const noexcept { return s_; }

  // Arrival order.
  std::span<const ExtendedValue> candidate() const noexcept {
    return {slots_.data(), candidate_size_};
  }
  // Ascending order.
  std::span<const ExtendedValue> representative() const noexcept {
    return {slots_.data() + r_, representative_size_};
  }

  std::uint64_t finite_inserted() const noexcept { return finite_inserted_; }
  // Element comparisons spent in flushes since construction (telemetry).
  std::uint64_t comparisons() const noexcept { return comparisons_; }

  const Calibrator& calibrator() const noexcept { return calibrator_; }

 private:
  void append(ExtendedValue v);
  void flush();
  void admit(ExtendedValue low, ExtendedValue high);

  std::uint32_t r_;
  std::uint32_t s_;
  std::uint32_t candidate_size_ = 0;
  std::uint32_t representative_size_ = 0;
  std::uint64_t finite_inserted_ = 0;
  std::uint64_t comparisons_ = 0;
  Calibrator calibrator_;
  // [0, r): Candidate. [r, r + s + 2): Representative plus room for one
  // incoming pair before eviction.
  std::vector<ExtendedValue> slots_;
};

}  // namespace magnifier
