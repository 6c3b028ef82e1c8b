#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace magnifier {

struct ZipfKeys { double alpha = 1.0; };
struct UniformKeys {};
using KeyDistribution = std::variant<ZipfKeys, UniformKeys>;

struct ParetoValues { double alpha = 1.0; double x_min = 1.0; };
struct ExponentialValues { double rate = 1.0; };
struct UniformValues { double lo = 0.0; double hi = 1.0; };
using ValueDistribution = std::variant<ParetoValues, ExponentialValues, UniformValues>;

struct StreamSpec {
  std::uint64_t n_items = 1'000'000;
  std::uint64_t n_keys = 10'000;
  KeyDistribution keys = ZipfKeys{1.0};
  ValueDistribution values = ParetoValues{1.0, 1.0};
  std::uint64_t seed = 0;

  void validate() const;

  // Comma-separated `name=value` fields, all optional:
  //   items=N, keys=N, key_dist=zipf:ALPHA|uniform,
  //   value_dist=pareto:ALPHA:XMIN|exp:RATE|uniform:LO:HI
  static StreamSpec parse(std::string_view text, std::uint64_t seed);
  std::string to_string() const;
};

struct StreamItem {
  std::uint64_t key;
  double value;

  friend bool operator==(const StreamItem&, const StreamItem&) = default;
};

using Stream = std::vector<StreamItem>;

// Keys are drawn from {1..n_keys}; deterministic for a fixed spec.
Stream generate(const StreamSpec& spec);

// One `key,value` per line; `#` lines and blank lines are skipped. Values are
// written in shortest round-trip form.
void write_csv(std::span<const StreamItem> stream, std::ostream& out);
void write_csv(std::span<const StreamItem> stream, const std::filesystem::path& path);
Stream read_csv(std::istream& in);
Stream read_csv(const std::filesystem::path& path);

}  // namespace magnifier
