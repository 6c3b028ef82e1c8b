#include "magnifier/tower_filter.hpp"

#include <limits>
#include <string>

#include "magnifier/error.hpp"
#include "magnifier/hash.hpp"

namespace magnifier {

TowerFilter::TowerFilter(std::size_t bytes_per_array, std::vector<unsigned> widths,
                         std::uint64_t seed)
    : bytes_per_array_(bytes_per_array) {
  if (widths.empty() || widths.size() > kMaxArrays) {
    throw Error(ErrorCode::kInvalidArgument, "tower filter needs 1 to 8 arrays");
  }
  for (std::size_t i = 0; i < widths.size(); ++i) {
    const unsigned width = widths[i];
    if (width == 0 || width > 32 || 64 % width != 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "counter width must divide 64 and be at most 32, got " +
                      std::to_string(width));
    }
    if (i > 0 && width <= widths[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "counter widths must strictly increase");
    }
    if ((bytes_per_array * 8) % width != 0 || bytes_per_array * 8 < width) {
      throw Error(ErrorCode::kInfeasibleLayout,
                  std::to_string(bytes_per_array) + " bytes cannot hold whole " +
                      std::to_string(width) + "-bit counters");
    }
    PackedArray array;
    array.width = width;
    array.limit = (std::uint64_t{1} << width) - 1;
    array.count = bytes_per_array * 8 / width;
    array.seed = derive_seed(seed, 0x70e7 + i);
    array.words.assign((bytes_per_array * 8 + 63) / 64, 0);
    arrays_.push_back(std::move(array));
  }
}

TowerFilter::Slots TowerFilter::locate(std::uint64_t key) const noexcept {
  Slots slots{};
  for (std::size_t i = 0; i < arrays_.size(); ++i) {
    slots[i] = hash_key(key, arrays_[i].seed) % arrays_[i].count;
  }
  return slots;
}

void TowerFilter::insert(const Slots& slots) noexcept {
  for (std::size_t i = 0; i < arrays_.size(); ++i) arrays_[i].bump(slots[i]);
}

std::uint64_t TowerFilter::query(const Slots& slots) const noexcept {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i < arrays_.size(); ++i) {
    const auto& array = arrays_[i];
    const std::uint64_t c = array.get(slots[i]);
    if (c != array.limit && c < best) best = c;
  }
  return best == std::numeric_limits<std::uint64_t>::max() ? arrays_.back().limit : best;
}

std::uint64_t TowerFilter::counter(std::size_t array, std::size_t index) const {
  const auto& a = arrays_.at(array);
  if (index >= a.count) throw Error(ErrorCode::kInvalidArgument, "counter index out of range");
  return a.get(index);
}

}  // namespace magnifier
