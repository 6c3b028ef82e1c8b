#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>

#include "magnifier/error.hpp"

namespace magnifier {

// A finite 64-bit real, or one of the -inf / +inf sentinels used by
// calibration. Stored as a single IEEE double: the sentinels are the IEEE
// infinities and NaN is never admitted, so the native comparison is a total
// order with NegInf < every finite value < PosInf.
class ExtendedValue {
 public:
  constexpr ExtendedValue() noexcept = default;

  static ExtendedValue finite(double v) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::isnan(v) ? "NaN is not an ordered value"
                                : "finite value expected");
    }
    return ExtendedValue(v);
  }

  static constexpr ExtendedValue neg_inf() noexcept {
    return ExtendedValue(-std::numeric_limits<double>::infinity());
  }
  static constexpr ExtendedValue pos_inf() noexcept {
    return ExtendedValue(std::numeric_limits<double>::infinity());
  }

  bool is_finite() const noexcept { return std::isfinite(raw_); }
  constexpr bool is_neg_inf() const noexcept {
    return raw_ == -std::numeric_limits<double>::infinity();
  }
  constexpr bool is_pos_inf() const noexcept {
    return raw_ == std::numeric_limits<double>::infinity();
  }

  // The finite payload; for sentinels this is +/-infinity.
  constexpr double value() const noexcept { return raw_; }

  friend constexpr bool operator==(ExtendedValue a, ExtendedValue b) noexcept {
    return a.raw_ == b.raw_;
  }
  friend constexpr std::strong_ordering operator<=>(ExtendedValue a,
                                                    ExtendedValue b) noexcept {
    if (a.raw_ < b.raw_) return std::strong_ordering::less;
    if (b.raw_ < a.raw_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, ExtendedValue v) {
    if (v.is_neg_inf()) return os << "-inf";
    if (v.is_pos_inf()) return os << "+inf";
    return os << v.raw_;
  }

 private:
  explicit constexpr ExtendedValue(double raw) noexcept : raw_(raw) {}

  double raw_ = 0.0;
};

}  // namespace magnifier
