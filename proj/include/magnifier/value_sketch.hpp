#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "magnifier/extended_value.hpp"
#include "magnifier/point_estimator.hpp"
#include "magnifier/quantile.hpp"

namespace magnifier {

struct ValueSketchConfig {
  std::size_t buckets = 1;
  std::uint32_t cells_per_bucket = 7;
  double lambda = 4.0;
  std::uint32_t candidate_size = 16;
  std::uint32_t representative_size = 10;
  Quantile w{0.5};
  std::uint64_t seed = 0;
};

enum class InsertOutcome { kMatched, kPlaced, kEvicted, kRejected };

struct InsertResult {
  InsertOutcome outcome;
  std::uint64_t evicted_key = 0;  // meaningful for kEvicted only
};

// u buckets of d cells. A cell holds (key, vote+, estimator); a bucket holds
// vote-. A key that finds no cell in a full bucket votes against the
// incumbents, and once vote- >= lambda * (smallest vote+) the weakest cell is
// cleared and handed to the newcomer.
class ValueSketch {
 public:
  explicit ValueSketch(const ValueSketchConfig& config);

  InsertResult insert(std::uint64_t key, ExtendedValue v);

  // Throws kNotTracked when the key holds no cell.
  ExtendedValue query(std::uint64_t key) const;
  bool tracks(std::uint64_t key) const noexcept;

  std::size_t bucket_of(std::uint64_t key) const noexcept;
  std::size_t bucket_count() const noexcept { return vote_minus_.size(); }
  std::uint32_t cells_per_bucket() const noexcept { return d_; }
  std::uint64_t hash_seed() const noexcept { return hash_seed_; }

  struct CellView {
    std::optional<std::uint64_t> key;  // empty cell when nullopt
    std::uint32_t vote_plus;
    const PointEstimator* estimator;   // null for empty cells
  };
  CellView cell(std::size_t bucket, std::uint32_t index) const;
  std::uint32_t vote_minus(std::size_t bucket) const { return vote_minus_.at(bucket); }

  // Keys of currently occupied cells, in bucket/cell order.
  std::vector<std::uint64_t> tracked_keys() const;

 private:
  std::uint64_t cell_seed(std::size_t cell) noexcept;
  void claim(std::size_t cell, std::uint64_t key, ExtendedValue v);

  std::uint32_t d_;
  // lambda in 1/65536 units so the eviction test stays in integers.
  std::uint64_t lambda_fixed_;
  std::uint64_t seed_;
  std::uint64_t hash_seed_;
  std::uint64_t generation_ = 0;
  std::vector<std::uint64_t> keys_;        // u * d
  std::vector<std::uint32_t> vote_plus_;   // u * d; 0 marks an empty cell
  std::vector<std::uint32_t> vote_minus_;  // u
  std::vector<PointEstimator> estimators_; // u * d
};

}  // namespace magnifier
