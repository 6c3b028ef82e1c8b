#include "magnifier/calibration.hpp"

#include <cmath>

namespace magnifier {

Calibrator::Calibrator(Quantile w, std::uint64_t seed) noexcept
    : w_(w.value()), p_(1.0), log_failure_(0.0), side_(SentinelSide::kNone), rng_(seed) {
  if (w_ > 0.5) {
    p_ = 1.0 / (2.0 * w_);
    side_ = SentinelSide::kPositive;
  } else if (w_ < 0.5) {
    p_ = 1.0 / (2.0 - 2.0 * w_);
    side_ = SentinelSide::kNegative;
  }
  if (p_ < 1.0) log_failure_ = std::log1p(-p_);
}

std::uint64_t Calibrator::sample_geometric() noexcept {
  if (p_ >= 1.0) return 1;
  const double u = to_open_unit(rng_());
  // ceil(ln u / ln(1-p)) is 1 exactly when u >= 1 - p; skip the log there.
  if (u >= 1.0 - p_) return 1;
  const double z = std::ceil(std::log(u) / log_failure_);
  return z < 1.0 ? 1 : static_cast<std::uint64_t>(z);
}

std::vector<ExtendedValue> Calibrator::calibrate(ExtendedValue v) {
  std::vector<ExtendedValue> out;
  calibrate(v, [&out](ExtendedValue e) { out.push_back(e); });
  return out;
}

}  // namespace magnifier
