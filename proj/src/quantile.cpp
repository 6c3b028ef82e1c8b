#include "magnifier/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace magnifier {

Quantile::Quantile(double w) : w_(w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "quantile must lie in [0, 1], got " + std::to_string(w));
  }
}

ValueMultiset::ValueMultiset(std::vector<ExtendedValue> values)
    : values_(std::move(values)), sorted_(false) {}

void ValueMultiset::insert(ExtendedValue v) {
  if (sorted_ && !values_.empty() && v < values_.back()) sorted_ = false;
  values_.push_back(v);
}

std::span<const ExtendedValue> ValueMultiset::sorted() const {
  if (!sorted_) {
    std::sort(values_.begin(), values_.end());
    sorted_ = true;
  }
  return values_;
}

ExtendedValue exact_quantile(const ValueMultiset& s, Quantile w) {
  if (s.empty()) throw Error(ErrorCode::kEmpty, "quantile of an empty multiset");
  auto sorted = s.sorted();
  const auto n = sorted.size();
  const auto index = static_cast<std::size_t>(
      std::floor(w.value() * static_cast<double>(n - 1)));
  return sorted[std::min(index, n - 1)];
}

double rank_of(const ValueMultiset& s, ExtendedValue x) {
  if (s.empty()) throw Error(ErrorCode::kEmpty, "rank in an empty multiset");
  auto sorted = s.sorted();
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it == sorted.end() || *it != x) {
    throw Error(ErrorCode::kAbsent, "value is not present in the multiset");
  }
  if (sorted.size() == 1) return 0.5;
  const auto k0 = static_cast<double>(it - sorted.begin());
  return k0 / static_cast<double>(sorted.size() - 1);
}

ExtendedValue nearest_present(const ValueMultiset& s, ExtendedValue x) {
  if (s.empty()) throw Error(ErrorCode::kEmpty, "nearest value in an empty multiset");
  auto sorted = s.sorted();
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it == sorted.end()) return sorted.back();
  if (*it == x || it == sorted.begin()) return *it;
  const ExtendedValue above = *it;
  const ExtendedValue below = *(it - 1);
  if (x.is_finite() && above.is_finite() && below.is_finite()) {
    return (above.value() - x.value() < x.value() - below.value()) ? above : below;
  }
  // Only reachable with sentinels in the multiset: prefer the finite side.
  return below.is_finite() || !above.is_finite() ? below : above;
}

void ExactOracle::insert(std::uint64_t key, ExtendedValue v) {
  if (!v.is_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "oracle accepts finite values only");
  }
  keys_[key].insert(v);
}

const ValueMultiset& ExactOracle::values(std::uint64_t key) const {
  auto it = keys_.find(key);
  if (it == keys_.end()) {
    throw Error(ErrorCode::kAbsentKey, "absent key " + std::to_string(key));
  }
  return it->second;
}

ExtendedValue ExactOracle::query(std::uint64_t key, Quantile w) const {
  return exact_quantile(values(key), w);
}

std::uint64_t ExactOracle::frequency(std::uint64_t key) const {
  auto it = keys_.find(key);
  return it == keys_.end() ? 0 : it->second.size();
}

double average_error(std::span<const KeyEstimate> estimates,
                     const ExactOracle& oracle, Quantile w) {
  if (estimates.empty()) throw Error(ErrorCode::kNoQueries, "no queries");
  double total = 0.0;
  for (const auto& e : estimates) {
    if (!e.value.is_finite()) {
      throw Error(ErrorCode::kInvalidArgument, "estimates must be finite");
    }
    const auto& truth = oracle.values(e.key);
    total += std::abs(rank_of(truth, nearest_present(truth, e.value)) - w.value());
  }
  return total / static_cast<double>(estimates.size());
}

}  // namespace magnifier
