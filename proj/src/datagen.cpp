#include "magnifier/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "magnifier/error.hpp"
#include "magnifier/hash.hpp"

namespace magnifier {

namespace {

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorCode::kInvalidArgument, msg);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

double spec_number(std::string_view text, std::string_view field) {
  double v = 0;
  if (!parse_number(text, v) || !std::isfinite(v)) {
    invalid("bad number '" + std::string(text) + "' in " + std::string(field));
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

class ZipfTable {
 public:
  ZipfTable(std::uint64_t n, double alpha) : cumulative_(n) {
    double total = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      total += std::pow(static_cast<double>(i + 1), -alpha);
      cumulative_[i] = total;
    }
  }

  std::uint64_t draw(double u) const {
    const double target = u * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.end()) --it;
    return static_cast<std::uint64_t>(it - cumulative_.begin()) + 1;
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace

void StreamSpec::validate() const {
  if (n_items == 0) invalid("stream needs at least one item");
  if (n_keys == 0) invalid("stream needs at least one key");
  if (n_keys > n_items) invalid("n_keys may not exceed n_items");
  if (const auto* z = std::get_if<ZipfKeys>(&keys); z && !(z->alpha > 0.0)) {
    invalid("zipf alpha must be positive");
  }
  std::visit(
      [](const auto& dist) {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, ParetoValues>) {
          if (!(dist.alpha > 0.0) || !(dist.x_min > 0.0)) {
            invalid("pareto needs alpha > 0 and x_min > 0");
          }
        } else if constexpr (std::is_same_v<T, ExponentialValues>) {
          if (!(dist.rate > 0.0)) invalid("exponential rate must be positive");
        } else {
          if (!(dist.lo < dist.hi)) invalid("uniform values need lo < hi");
        }
      },
      values);
}

StreamSpec StreamSpec::parse(std::string_view text, std::uint64_t seed) {
  StreamSpec spec;
  spec.seed = seed;
  for (auto field : split(text, ',')) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) invalid("expected name=value, got '" + std::string(field) + "'");
    const auto name = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    const auto args = split(value, ':');
    if (name == "items" || name == "keys") {
      std::uint64_t n = 0;
      if (!parse_number(value, n)) invalid("bad integer '" + std::string(value) + "'");
      (name == "items" ? spec.n_items : spec.n_keys) = n;
    } else if (name == "key_dist") {
      if (args[0] == "zipf" && args.size() == 2) {
        spec.keys = ZipfKeys{spec_number(args[1], name)};
      } else if (args[0] == "uniform" && args.size() == 1) {
        spec.keys = UniformKeys{};
      } else {
        invalid("key_dist must be zipf:ALPHA or uniform");
      }
    } else if (name == "value_dist") {
      if (args[0] == "pareto" && args.size() == 3) {
        spec.values = ParetoValues{spec_number(args[1], name), spec_number(args[2], name)};
      } else if (args[0] == "exp" && args.size() == 2) {
        spec.values = ExponentialValues{spec_number(args[1], name)};
      } else if (args[0] == "uniform" && args.size() == 3) {
        spec.values = UniformValues{spec_number(args[1], name), spec_number(args[2], name)};
      } else {
        invalid("value_dist must be pareto:ALPHA:XMIN, exp:RATE or uniform:LO:HI");
      }
    } else {
      invalid("unknown stream field '" + std::string(name) + "'");
    }
  }
  spec.validate();
  return spec;
}

std::string StreamSpec::to_string() const {
  std::ostringstream os;
  os << "items=" << n_items << ",keys=" << n_keys << ",key_dist=";
  if (const auto* z = std::get_if<ZipfKeys>(&keys)) {
    os << "zipf:" << format_double(z->alpha);
  } else {
    os << "uniform";
  }
  os << ",value_dist=";
  std::visit(
      [&os](const auto& dist) {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, ParetoValues>) {
          os << "pareto:" << format_double(dist.alpha) << ':' << format_double(dist.x_min);
        } else if constexpr (std::is_same_v<T, ExponentialValues>) {
          os << "exp:" << format_double(dist.rate);
        } else {
          os << "uniform:" << format_double(dist.lo) << ':' << format_double(dist.hi);
        }
      },
      values);
  return os.str();
}

Stream generate(const StreamSpec& spec) {
  spec.validate();
  // mt19937_64 output is fixed by the standard; distributions are hand-rolled
  // from raw bits so streams match across standard libraries.
  std::mt19937_64 key_rng(derive_seed(spec.seed, 0xda7a1));
  std::mt19937_64 value_rng(derive_seed(spec.seed, 0xda7a2));

  std::optional<ZipfTable> zipf;
  if (const auto* z = std::get_if<ZipfKeys>(&spec.keys)) zipf.emplace(spec.n_keys, z->alpha);

  auto draw_value = [&]() {
    const double u = to_open_unit(value_rng());
    return std::visit(
        [u](const auto& dist) -> double {
          using T = std::decay_t<decltype(dist)>;
          if constexpr (std::is_same_v<T, ParetoValues>) {
            return dist.x_min * std::pow(u, -1.0 / dist.alpha);
          } else if constexpr (std::is_same_v<T, ExponentialValues>) {
            return -std::log(u) / dist.rate;
          } else {
            return dist.lo + (dist.hi - dist.lo) * u;
          }
        },
        spec.values);
  };

  Stream stream;
  stream.reserve(spec.n_items);
  for (std::uint64_t i = 0; i < spec.n_items; ++i) {
    const double u = to_open_unit(key_rng());
    const std::uint64_t key =
        zipf ? zipf->draw(u)
             : std::min<std::uint64_t>(spec.n_keys,
                                       1 + static_cast<std::uint64_t>(
                                               u * static_cast<double>(spec.n_keys)));
    stream.push_back({key, draw_value()});
  }
  return stream;
}

void write_csv(std::span<const StreamItem> stream, std::ostream& out) {
  std::string line;
  char buf[64];
  for (const auto& item : stream) {
    line.clear();
    auto k = std::to_chars(buf, buf + sizeof(buf), item.key);
    line.append(buf, k.ptr);
    line.push_back(',');
    auto v = std::to_chars(buf, buf + sizeof(buf), item.value);
    line.append(buf, v.ptr);
    line.push_back('\n');
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
  if (!out) throw Error(ErrorCode::kIo, "failed to write CSV stream");
}

void write_csv(std::span<const StreamItem> stream, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  write_csv(stream, out);
}

Stream read_csv(std::istream& in) {
  Stream stream;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + why);
    };
    const auto comma = view.find(',');
    if (comma == std::string_view::npos) fail("expected key,value");
    StreamItem item{};
    if (!parse_number(view.substr(0, comma), item.key)) fail("key must be an unsigned integer");
    if (!parse_number(view.substr(comma + 1), item.value) || !std::isfinite(item.value)) {
      fail("value must be a finite number");
    }
    stream.push_back(item);
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "failed to read CSV stream");
  return stream;
}

Stream read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_csv(in);
}

}  // namespace magnifier
