#include "magnifier/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "magnifier/hash.hpp"
#include "magnifier/point_estimator.hpp"
#include "magnifier/quantile.hpp"

namespace magnifier {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs body(i) for i in [0, n), on worker threads when n > 1.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
  if (n == 1) {
    body(0);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) workers.emplace_back([&body, i] { body(i); });
}

struct Shard {
  MagnifierParams params;
  Stream items;
  std::unique_ptr<MagnifierSketch> sketch;
  std::vector<std::uint64_t> tracked;
  std::vector<std::optional<ExtendedValue>> answers;
};

std::size_t shard_of(std::uint64_t key, std::size_t shards) {
  return shards == 1 ? 0 : hash_key(key, 0x5a4d) % shards;
}

std::uint64_t count_distinct(const Stream& items) {
  std::unordered_set<std::uint64_t> keys;
  for (const auto& item : items) keys.insert(item.key);
  return keys.size();
}

void check_options(const BenchOptions& options) {
  options.params.validate();
  if (options.repeat == 0) throw Error(ErrorCode::kInvalidArgument, "repeat must be positive");
  if (options.shards == 0) throw Error(ErrorCode::kInvalidArgument, "shards must be positive");
}

// Per-key error row for an estimate against the true multiset.
KeyReport score(std::uint64_t key, const ValueMultiset& truth, ExtendedValue estimate,
                Quantile w) {
  const double rank = rank_of(truth, nearest_present(truth, estimate));
  return {key, truth.size(), estimate.value(), rank, std::abs(rank - w.value())};
}

double mean_of(const std::vector<KeyReport>& rows) {
  double total = 0.0;
  for (const auto& row : rows) total += row.abs_error;
  return total / static_cast<double>(rows.size());
}

}  // namespace

Dataset load_csv_dataset(const std::filesystem::path& path) {
  return {"csv:" + path.string(), std::nullopt, read_csv(path)};
}

Dataset synthesize_dataset(const StreamSpec& spec) {
  return {"synthetic:" + spec.to_string(), spec, generate(spec)};
}

StreamReport run_benchmark(const Dataset& data, const BenchOptions& options) {
  check_options(options);
  const auto wall_start = Clock::now();
  const Quantile w = options.params.w;
  const std::size_t n_shards = options.shards;

  std::vector<Shard> shards(n_shards);
  for (std::size_t i = 0; i < n_shards; ++i) {
    shards[i].params = options.params;
    if (n_shards > 1) {
      shards[i].params.total_memory_bytes = options.params.total_memory_bytes / n_shards;
      shards[i].params.seed = derive_seed(options.params.seed, 0x5a4d0000 + i);
    }
  }
  for (const auto& item : data.items) shards[shard_of(item.key, n_shards)].items.push_back(item);

  StreamReport report;
  report.mode = "per-key";
  report.options = options;
  report.dataset_source = data.source;
  report.dataset_spec = data.spec;
  report.items = data.items.size();
  report.distinct_keys = count_distinct(data.items);

  // Validate the layout and surface infeasibility before any timing.
  for (auto& shard : shards) shard.sketch = std::make_unique<MagnifierSketch>(shard.params);

  double insert_seconds = 0.0;
  double query_seconds = 0.0;
  std::uint64_t queries = 0;
  for (std::uint32_t rep = 0; rep < options.repeat; ++rep) {
    if (rep > 0) {
      for (auto& shard : shards) shard.sketch = std::make_unique<MagnifierSketch>(shard.params);
    }
    auto start = Clock::now();
    parallel_for(n_shards, [&shards](std::size_t i) {
      auto& shard = shards[i];
      for (const auto& item : shard.items) {
        shard.sketch->insert(item.key, ExtendedValue::finite(item.value));
      }
    });
    insert_seconds += seconds_since(start);

    queries = 0;
    for (auto& shard : shards) {
      shard.tracked = shard.sketch->values().tracked_keys();
      shard.answers.assign(shard.tracked.size(), std::nullopt);
      queries += shard.tracked.size();
    }
    start = Clock::now();
    parallel_for(n_shards, [&shards](std::size_t i) {
      auto& shard = shards[i];
      for (std::size_t k = 0; k < shard.tracked.size(); ++k) {
        try {
          shard.answers[k] = shard.sketch->query(shard.tracked[k]);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kDegenerateEstimate) throw;
        }
      }
    });
    query_seconds += seconds_since(start);
  }

  // Ground truth, outside the timed region.
  ExactOracle oracle;
  for (const auto& item : data.items) {
    oracle.insert(item.key, ExtendedValue::finite(item.value));
  }
  const std::uint64_t f_eval = options.eval_threshold();
  oracle.for_each_key([&](std::uint64_t, const ValueMultiset& values) {
    if (values.size() >= f_eval) ++report.eligible_keys;
  });

  for (const auto& shard : shards) {
    report.layouts.push_back(shard.sketch->plan());
    report.value_sketch_hash_seeds.push_back(shard.sketch->values().hash_seed());
    std::vector<std::uint64_t> tower_seeds;
    const auto& tower = shard.sketch->tower();
    for (std::size_t a = 0; a < tower.array_count(); ++a) tower_seeds.push_back(tower.seed(a));
    report.tower_hash_seeds.push_back(std::move(tower_seeds));
    report.screened_items += shard.sketch->screened_items();
    report.admitted_items += shard.sketch->admitted_items();
    report.tracked_keys += shard.tracked.size();

    for (std::size_t k = 0; k < shard.tracked.size(); ++k) {
      const std::uint64_t key = shard.tracked[k];
      const auto& truth = oracle.values(key);
      if (truth.size() < f_eval) continue;
      if (!shard.answers[k]) {
        ++report.degenerate_keys;
        continue;
      }
      report.per_key.push_back(score(key, truth, *shard.answers[k], w));
    }
  }
  std::sort(report.per_key.begin(), report.per_key.end(),
            [](const KeyReport& a, const KeyReport& b) { return a.key < b.key; });

  report.evaluated_keys = report.per_key.size();
  if (report.per_key.empty()) {
    throw Error(ErrorCode::kNoQueries,
                "no keys to evaluate: no tracked key has frequency >= " + std::to_string(f_eval));
  }
  report.ae = mean_of(report.per_key);
  report.coverage = report.eligible_keys == 0
                        ? 0.0
                        : static_cast<double>(report.evaluated_keys + report.degenerate_keys) /
                              static_cast<double>(report.eligible_keys);
  report.queries_per_repetition = queries;

  const double reps = options.repeat;
  report.insert_throughput_mops =
      static_cast<double>(data.items.size()) / (insert_seconds / reps) / 1e6;
  report.query_throughput_mops =
      query_seconds > 0.0 ? static_cast<double>(queries) / (query_seconds / reps) / 1e6 : 0.0;
  report.wall_time_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - wall_start).count());
  return report;
}

StreamReport run_single_key(const Dataset& data, const BenchOptions& options) {
  check_options(options);
  if (data.items.empty()) throw Error(ErrorCode::kNoQueries, "no keys to evaluate: empty stream");
  const auto wall_start = Clock::now();
  const auto& params = options.params;
  const std::uint64_t seed = derive_seed(params.seed, 0x51e);

  StreamReport report;
  report.mode = "single-key";
  report.options = options;
  report.dataset_source = data.source;
  report.dataset_spec = data.spec;
  report.items = data.items.size();
  report.distinct_keys = count_distinct(data.items);

  double insert_seconds = 0.0;
  double query_seconds = 0.0;
  std::optional<ExtendedValue> answer;
  for (std::uint32_t rep = 0; rep < options.repeat; ++rep) {
    PointEstimator estimator(params.r, params.s, params.w, seed);
    auto start = Clock::now();
    for (const auto& item : data.items) estimator.insert(ExtendedValue::finite(item.value));
    insert_seconds += seconds_since(start);

    start = Clock::now();
    answer = estimator.query();
    query_seconds += seconds_since(start);
  }

  ValueMultiset truth;
  for (const auto& item : data.items) truth.insert(ExtendedValue::finite(item.value));

  report.tracked_keys = 1;
  report.eligible_keys = 1;
  report.evaluated_keys = 1;
  report.coverage = 1.0;
  report.admitted_items = data.items.size();
  report.queries_per_repetition = 1;
  report.per_key.push_back(score(0, truth, *answer, params.w));
  report.ae = report.per_key.front().abs_error;

  const double reps = options.repeat;
  report.insert_throughput_mops =
      static_cast<double>(data.items.size()) / (insert_seconds / reps) / 1e6;
  report.query_throughput_mops = query_seconds > 0.0 ? 1.0 / (query_seconds / reps) / 1e6 : 0.0;
  report.wall_time_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - wall_start).count());
  return report;
}

std::string report_json(const StreamReport& report) {
  using json = nlohmann::ordered_json;
  const auto& p = report.options.params;

  json layouts = json::array();
  for (std::size_t i = 0; i < report.layouts.size(); ++i) {
    const auto& plan = report.layouts[i];
    layouts.push_back({
        {"shard", i},
        {"buckets", plan.buckets},
        {"bucket_bytes", plan.bucket_bytes},
        {"value_sketch_bytes", plan.value_sketch_bytes},
        {"tower_arrays", plan.tower_arrays},
        {"tower_bytes_per_array", plan.tower_bytes_per_array},
        {"tower_bytes", plan.tower_bytes},
        {"value_sketch_hash_seed", report.value_sketch_hash_seeds.at(i)},
        {"tower_hash_seeds", report.tower_hash_seeds.at(i)},
    });
  }

  json dataset = {
      {"source", report.dataset_source},
      {"items", report.items},
      {"distinct_keys", report.distinct_keys},
  };
  if (report.dataset_spec) dataset["spec"] = report.dataset_spec->to_string();

  json config = {
      {"mode", report.mode},
      {"w", p.w.value()},
      {"memory_bytes", p.total_memory_bytes},
      {"q", p.q},
      {"T", p.threshold},
      {"d", p.d},
      {"lambda", p.lambda},
      {"r", p.r},
      {"s", p.s},
      {"seed", p.seed},
      {"f_eval", report.options.eval_threshold()},
      {"repeat", report.options.repeat},
      {"shards", report.options.shards},
      {"dataset", dataset},
      {"layout", layouts},
      {"query_workload", report.mode == "single-key"
                             ? "one query of the single estimator per repetition"
                             : "every tracked key queried once per repetition"},
      {"cold_start", report.mode == "single-key"
                         ? "none"
                         : "items seen while a key's filter estimate is below T are dropped"},
  };

  json per_key = json::array();
  for (const auto& row : report.per_key) {
    per_key.push_back({
        {"key", row.key},
        {"true_freq", row.true_freq},
        {"estimated_value", row.estimated_value},
        {"true_rank", row.true_rank},
        {"abs_error", row.abs_error},
    });
  }

  json doc = {
      {"config", config},
      {"ae", report.ae},
      {"per_key", per_key},
      {"tracked_keys", report.tracked_keys},
      {"eligible_keys", report.eligible_keys},
      {"evaluated_keys", report.evaluated_keys},
      {"degenerate_keys", report.degenerate_keys},
      {"coverage", report.coverage},
      {"screened_items", report.screened_items},
      {"admitted_items", report.admitted_items},
      {"queries_per_repetition", report.queries_per_repetition},
      {"insert_throughput_mops", report.insert_throughput_mops},
      {"query_throughput_mops", report.query_throughput_mops},
      {"wall_time_ms", report.wall_time_ms},
  };
  return doc.dump(2);
}

}  // namespace magnifier
