#pragma once

#include <cstdint>
#include <vector>

#include "magnifier/extended_value.hpp"
#include "magnifier/hash.hpp"
#include "magnifier/quantile.hpp"

namespace magnifier {

enum class SentinelSide : std::uint8_t { kNone, kNegative, kPositive };

// Turns a w-quantile query into a median query: each value is preceded by
// Z - 1 sentinels on the far side of w, with Z ~ Geometric(p),
// p = 1/(2w) for w > 0.5 and p = 1/(2 - 2w) for w < 0.5.
class Calibrator {
 public:
  Calibrator(Quantile w, std::uint64_t seed) noexcept;

  double w() const noexcept { return w_; }
  double success_probability() const noexcept { return p_; }
  SentinelSide side() const noexcept { return side_; }

  ExtendedValue sentinel() const noexcept {
    return side_ == SentinelSide::kNegative ? ExtendedValue::neg_inf()
                                            : ExtendedValue::pos_inf();
  }

  // Z >= 1 by inverse CDF on one uniform draw. p == 1 consumes no randomness.
  std::uint64_t sample_geometric() noexcept;

  // Number of sentinels to emit ahead of the next value (Z - 1, or 0 at w=0.5).
  std::uint64_t next_sentinel_count() noexcept {
    return side_ == SentinelSide::kNone ? 0 : sample_geometric() - 1;
  }

  // Sentinels first, then the value.
  template <typename Sink>
  void calibrate(ExtendedValue v, Sink&& emit) {
    for (auto n = next_sentinel_count(); n > 0; --n) emit(sentinel());
    emit(v);
  }

  std::vector<ExtendedValue> calibrate(ExtendedValue v);

  void reseed(std::uint64_t seed) noexcept { rng_ = SplitMix64(seed); }

 private:
  double w_;
  double p_;
  double log_failure_;  // ln(1 - p); unused when p == 1
  SentinelSide side_;
  SplitMix64 rng_;
};

}  // namespace magnifier
