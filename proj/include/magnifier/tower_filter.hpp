#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace magnifier {

// Count-min style frequency filter whose arrays share one byte budget but use
// progressively wider saturating counters: many narrow counters for the
// long tail, few wide ones for heavy keys. Saturated counters are skipped by
// query, so estimates never undercount.
class TowerFilter {
 public:
  static constexpr std::size_t kMaxArrays = 8;
  static inline const std::vector<unsigned> kDefaultWidths{4, 8, 16};

  // Per-array counter positions of one key.
  using Slots = std::array<std::size_t, kMaxArrays>;

  // widths: strictly increasing, each dividing 64; bytes_per_array * 8 must be
  // a multiple of every width.
  TowerFilter(std::size_t bytes_per_array, std::vector<unsigned> widths,
              std::uint64_t seed);
  TowerFilter(std::size_t bytes_per_array, std::uint64_t seed)
      : TowerFilter(bytes_per_array, kDefaultWidths, seed) {}

  void insert(std::uint64_t key) { insert(locate(key)); }
  std::uint64_t query(std::uint64_t key) const { return query(locate(key)); }

  Slots locate(std::uint64_t key) const noexcept;
  void insert(const Slots& slots) noexcept;
  std::uint64_t query(const Slots& slots) const noexcept;

  std::size_t array_count() const noexcept { return arrays_.size(); }
  std::size_t bytes_per_array() const noexcept { return bytes_per_array_; }
  std::size_t memory_bytes() const noexcept { return bytes_per_array_ * arrays_.size(); }
  unsigned width(std::size_t array) const { return arrays_.at(array).width; }
  std::size_t counter_count(std::size_t array) const { return arrays_.at(array).count; }
  std::uint64_t seed(std::size_t array) const { return arrays_.at(array).seed; }
  std::uint64_t counter(std::size_t array, std::size_t index) const;

 private:
  struct PackedArray {
    unsigned width;
    std::uint64_t limit;  // saturation value 2^width - 1
    std::size_t count;
    std::uint64_t seed;
    std::vector<std::uint64_t> words;

    std::uint64_t get(std::size_t i) const noexcept {
      const std::size_t bit = i * width;
      return (words[bit >> 6] >> (bit & 63)) & limit;
    }
    void bump(std::size_t i) noexcept {
      const std::size_t bit = i * width;
      auto& word = words[bit >> 6];
      if (((word >> (bit & 63)) & limit) != limit) word += std::uint64_t{1} << (bit & 63);
    }
  };

  std::size_t bytes_per_array_;
  std::vector<PackedArray> arrays_;
};

}  // namespace magnifier
