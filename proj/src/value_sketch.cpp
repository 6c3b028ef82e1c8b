#include "magnifier/value_sketch.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "magnifier/hash.hpp"

namespace magnifier {

namespace {

constexpr double kLambdaScale = 65536.0;
constexpr double kMaxLambda = 32768.0;

}  // namespace

ValueSketch::ValueSketch(const ValueSketchConfig& config)
    : d_(config.cells_per_bucket),
      seed_(config.seed),
      hash_seed_(derive_seed(config.seed, 0xb0c4e7)) {
  if (config.buckets == 0) {
    throw Error(ErrorCode::kInvalidArgument, "value sketch needs at least one bucket");
  }
  if (d_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "value sketch needs at least one cell per bucket");
  }
  // Bounded so lambda_fixed_ * vote+ fits in 64 bits.
  if (!(config.lambda > 0.0) || config.lambda > kMaxLambda) {
    throw Error(ErrorCode::kInvalidArgument,
                "lambda must lie in (0, 32768], got " + std::to_string(config.lambda));
  }
  lambda_fixed_ = static_cast<std::uint64_t>(std::llround(config.lambda * kLambdaScale));
  if (lambda_fixed_ == 0) lambda_fixed_ = 1;

  const std::size_t cells = config.buckets * d_;
  keys_.assign(cells, 0);
  vote_plus_.assign(cells, 0);
  vote_minus_.assign(config.buckets, 0);
  estimators_.reserve(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    estimators_.emplace_back(config.candidate_size, config.representative_size, config.w, 0);
  }
}

std::size_t ValueSketch::bucket_of(std::uint64_t key) const noexcept {
  return hash_key(key, hash_seed_) % vote_minus_.size();
}

std::uint64_t ValueSketch::cell_seed(std::size_t cell) noexcept {
  return mix64(seed_ ^ mix64(cell) ^ mix64(~generation_++));
}

void ValueSketch::claim(std::size_t cell, std::uint64_t key, ExtendedValue v) {
  keys_[cell] = key;
  vote_plus_[cell] = 1;
  estimators_[cell].reset(cell_seed(cell));
  estimators_[cell].insert(v);
}

InsertResult ValueSketch::insert(std::uint64_t key, ExtendedValue v) {
  if (!v.is_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "value sketch accepts finite values only");
  }
  const std::size_t bucket = bucket_of(key);
  const std::size_t first = bucket * d_;
  const std::size_t last = first + d_;

  std::size_t empty = last;
  for (std::size_t c = first; c < last; ++c) {
    if (vote_plus_[c] == 0) {
      if (empty == last) empty = c;
    } else if (keys_[c] == key) {
      if (vote_plus_[c] != std::numeric_limits<std::uint32_t>::max()) ++vote_plus_[c];
      estimators_[c].insert(v);
      return {InsertOutcome::kMatched};
    }
  }
  if (empty != last) {
    claim(empty, key, v);
    return {InsertOutcome::kPlaced};
  }

  auto& votes_against = vote_minus_[bucket];
  if (votes_against != std::numeric_limits<std::uint32_t>::max()) ++votes_against;
  std::size_t weakest = first;
  for (std::size_t c = first + 1; c < last; ++c) {
    if (vote_plus_[c] < vote_plus_[weakest]) weakest = c;
  }
  // vote- >= lambda * vote+, scaled by 2^16 on both sides.
  if ((std::uint64_t{votes_against} << 16) >= lambda_fixed_ * vote_plus_[weakest]) {
    const std::uint64_t evicted = keys_[weakest];
    claim(weakest, key, v);
    votes_against = 0;
    return {InsertOutcome::kEvicted, evicted};
  }
  return {InsertOutcome::kRejected};
}

bool ValueSketch::tracks(std::uint64_t key) const noexcept {
  const std::size_t first = bucket_of(key) * d_;
  for (std::size_t c = first; c < first + d_; ++c) {
    if (vote_plus_[c] != 0 && keys_[c] == key) return true;
  }
  return false;
}

ExtendedValue ValueSketch::query(std::uint64_t key) const {
  const std::size_t first = bucket_of(key) * d_;
  for (std::size_t c = first; c < first + d_; ++c) {
    if (vote_plus_[c] != 0 && keys_[c] == key) return estimators_[c].query();
  }
  throw Error(ErrorCode::kNotTracked, "key " + std::to_string(key) + " is not tracked");
}

ValueSketch::CellView ValueSketch::cell(std::size_t bucket, std::uint32_t index) const {
  if (bucket >= vote_minus_.size() || index >= d_) {
    throw Error(ErrorCode::kInvalidArgument, "cell coordinates out of range");
  }
  const std::size_t c = bucket * d_ + index;
  if (vote_plus_[c] == 0) return {std::nullopt, 0, nullptr};
  return {keys_[c], vote_plus_[c], &estimators_[c]};
}

std::vector<std::uint64_t> ValueSketch::tracked_keys() const {
  std::vector<std::uint64_t> keys;
  for (std::size_t c = 0; c < keys_.size(); ++c) {
    if (vote_plus_[c] != 0) keys.push_back(keys_[c]);
  }
  return keys;
}

}  // namespace magnifier
