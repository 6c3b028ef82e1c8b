#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "magnifier/extended_value.hpp"

namespace magnifier {

// A quantile level w in [0, 1].
class Quantile {
 public:
  explicit Quantile(double w);

  double value() const noexcept { return w_; }

 private:
  double w_;
};

// Multiset of extended values. Sorting is deferred until the first read.
class ValueMultiset {
 public:
  ValueMultiset() = default;
  explicit ValueMultiset(std::vector<ExtendedValue> values);

  void insert(ExtendedValue v);
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::span<const ExtendedValue> sorted() const;

 private:
  mutable std::vector<ExtendedValue> values_;
  mutable bool sorted_ = true;
};

// Element of 1-indexed sorted rank floor(w (n-1)) + 1.
ExtendedValue exact_quantile(const ValueMultiset& s, Quantile w);

// Normalized rank (k-1)/(n-1) of x, with k the lowest rank x occupies.
// A singleton multiset reports 0.5.
double rank_of(const ValueMultiset& s, ExtendedValue x);

// The element of s closest to x by absolute difference; ties go to the
// smaller element.
ExtendedValue nearest_present(const ValueMultiset& s, ExtendedValue x);

// Exact per-key ground truth.
class ExactOracle {
 public:
  void insert(std::uint64_t key, ExtendedValue v);
  ExtendedValue query(std::uint64_t key, Quantile w) const;

  const ValueMultiset& values(std::uint64_t key) const;
  bool contains(std::uint64_t key) const { return keys_.contains(key); }
  std::uint64_t frequency(std::uint64_t key) const;
  std::size_t key_count() const noexcept { return keys_.size(); }

  template <typename F>
  void for_each_key(F&& f) const {
    for (const auto& [key, values] : keys_) f(key, values);
  }

 private:
  std::unordered_map<std::uint64_t, ValueMultiset> keys_;
};

struct KeyEstimate {
  std::uint64_t key;
  ExtendedValue value;
};

// Mean of |rank - w| over the estimates. Estimates that are not literally
// present in the key's multiset are first snapped with nearest_present.
double average_error(std::span<const KeyEstimate> estimates,
                     const ExactOracle& oracle, Quantile w);

}  // namespace magnifier
