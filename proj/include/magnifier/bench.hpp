#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "magnifier/datagen.hpp"
#include "magnifier/magnifier_sketch.hpp"

namespace magnifier {

struct Dataset {
  std::string source;               // "csv:<path>" or "synthetic:<spec>"
  std::optional<StreamSpec> spec;   // set for synthetic data
  Stream items;
};

Dataset load_csv_dataset(const std::filesystem::path& path);
Dataset synthesize_dataset(const StreamSpec& spec);

struct BenchOptions {
  MagnifierParams params;
  std::optional<std::uint64_t> f_eval;  // defaults to params.threshold
  std::uint32_t repeat = 3;
  std::uint32_t shards = 1;             // >1: one sketch per worker thread

  std::uint64_t eval_threshold() const { return f_eval.value_or(params.threshold); }
};

struct KeyReport {
  std::uint64_t key;
  std::uint64_t true_freq;
  double estimated_value;
  double true_rank;
  double abs_error;
};

struct StreamReport {
  std::string mode;  // "per-key" or "single-key"
  BenchOptions options;
  std::string dataset_source;
  std::optional<StreamSpec> dataset_spec;
  std::uint64_t items = 0;
  std::uint64_t distinct_keys = 0;
  std::vector<CapacityPlan> layouts;  // one per shard; empty in single-key mode
  std::vector<std::uint64_t> value_sketch_hash_seeds;
  std::vector<std::vector<std::uint64_t>> tower_hash_seeds;

  double ae = 0.0;
  std::vector<KeyReport> per_key;  // evaluated keys, ascending by key
  std::uint64_t tracked_keys = 0;
  std::uint64_t eligible_keys = 0;
  std::uint64_t evaluated_keys = 0;
  std::uint64_t degenerate_keys = 0;  // tracked but no finite estimate
  double coverage = 0.0;
  std::uint64_t screened_items = 0;
  std::uint64_t admitted_items = 0;
  std::uint64_t queries_per_repetition = 0;

  double insert_throughput_mops = 0.0;
  double query_throughput_mops = 0.0;
  std::uint64_t wall_time_ms = 0;
};

// Feeds the stream to the sketch (timed, `repeat` times, mean reported) and to
// an exact oracle (untimed), then scores every tracked key whose true
// frequency is at least the evaluation threshold.
StreamReport run_benchmark(const Dataset& data, const BenchOptions& options);

// Ignores keys: every value goes to one point estimator.
StreamReport run_single_key(const Dataset& data, const BenchOptions& options);

// Fields that vary between identical runs.
inline const std::vector<std::string> kTimingFields{
    "insert_throughput_mops", "query_throughput_mops", "wall_time_ms"};

// One JSON document.
std::string report_json(const StreamReport& report);

}  // namespace magnifier
