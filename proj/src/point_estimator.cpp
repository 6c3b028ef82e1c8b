#include "magnifier/point_estimator.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace magnifier {

PointEstimator::PointEstimator(std::uint32_t r, std::uint32_t s, Quantile w,
                               std::uint64_t seed)
    : r_(r), s_(s), calibrator_(w, seed) {
  if (r == 0 || r % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "candidate size r must be positive and even, got " + std::to_string(r));
  }
  if (s == 0 || s % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "representative size s must be positive and even, got " +
                    std::to_string(s));
  }
  slots_.resize(std::size_t{r} + s + 2);
}

void PointEstimator::insert(ExtendedValue v) {
  if (!v.is_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "estimator accepts finite values only");
  }
  for (auto n = calibrator_.next_sentinel_count(); n > 0; --n) {
    append(calibrator_.sentinel());
  }
  append(v);
  ++finite_inserted_;
}

void PointEstimator::push_sample(ExtendedValue sample) {
  append(sample);
  if (sample.is_finite()) ++finite_inserted_;
}

void PointEstimator::append(ExtendedValue v) {
  slots_[candidate_size_++] = v;
  if (candidate_size_ == r_) flush();
}

void PointEstimator::flush() {
  std::uint64_t compared = 0;
  auto less = [&compared](ExtendedValue a, ExtendedValue b) {
    ++compared;
    return a < b;
  };
  auto begin = slots_.begin();
  auto lower = begin + (r_ / 2 - 1);
  auto end = begin + r_;
  std::nth_element(begin, lower, end, less);
  // Everything after the lower median is >= it; the upper median is their min.
  auto upper = std::min_element(lower + 1, end, less);
  const ExtendedValue low = *lower;
  const ExtendedValue high = *upper;
  candidate_size_ = 0;
  comparisons_ += compared;
  admit(low, high);
}

void PointEstimator::admit(ExtendedValue low, ExtendedValue high) {
  auto* rep = slots_.data() + r_;
  std::uint64_t compared = 0;
  // Insertion-sort both values into the sorted Representative.
  for (ExtendedValue v : {low, high}) {
    std::uint32_t i = representative_size_;
    while (i > 0) {
      ++compared;
      if (!(v < rep[i - 1])) break;
      rep[i] = rep[i - 1];
      --i;
    }
    rep[i] = v;
    ++representative_size_;
  }
  if (representative_size_ > s_) {
    // Drop the smallest and the largest of the s + 2 values.
    std::copy(rep + 1, rep + representative_size_ - 1, rep);
    representative_size_ -= 2;
  }
  comparisons_ += compared;
}

namespace {

std::optional<ExtendedValue> finite_lower_median(std::span<const ExtendedValue> values) {
  std::vector<ExtendedValue> finite;
  finite.reserve(values.size());
  for (auto v : values) {
    if (v.is_finite()) finite.push_back(v);
  }
  if (finite.empty()) return std::nullopt;
  auto mid = finite.begin() + static_cast<std::ptrdiff_t>((finite.size() - 1) / 2);
  std::nth_element(finite.begin(), mid, finite.end());
  return *mid;
}

}  // namespace

ExtendedValue PointEstimator::query() const {
  if (finite_inserted_ == 0) {
    throw Error(ErrorCode::kInsufficientData, "insufficient data");
  }
  auto rep = representative();
  if (!rep.empty()) {
    std::size_t i = (rep.size() - 1) / 2;
    if (rep[i].is_neg_inf()) {
      while (i + 1 < rep.size() && !rep[i].is_finite()) ++i;
    } else if (rep[i].is_pos_inf()) {
      while (i > 0 && !rep[i].is_finite()) --i;
    }
    if (rep[i].is_finite()) return rep[i];
  }
  if (auto fallback = finite_lower_median(candidate())) return *fallback;
  throw Error(ErrorCode::kDegenerateEstimate, "degenerate estimate");
}

void PointEstimator::reset(std::uint64_t seed) noexcept {
  candidate_size_ = 0;
  representative_size_ = 0;
  finite_inserted_ = 0;
  comparisons_ = 0;
  calibrator_.reseed(seed);
}

}  // namespace magnifier
