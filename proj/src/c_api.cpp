#include "magnifier/magnifier.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "magnifier/bench.hpp"
#include "magnifier/datagen.hpp"
#include "magnifier/magnifier_sketch.hpp"
#include "magnifier/point_estimator.hpp"

struct mq_sketch {
  magnifier::MagnifierSketch impl;
};

struct mq_estimator {
  magnifier::PointEstimator impl;
};

namespace {

thread_local std::string last_error;

mq_status to_status(magnifier::ErrorCode code) {
  using magnifier::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return MQ_ERR_INVALID_ARGUMENT;
    case ErrorCode::kEmpty: return MQ_ERR_EMPTY;
    case ErrorCode::kAbsent: return MQ_ERR_ABSENT;
    case ErrorCode::kAbsentKey: return MQ_ERR_ABSENT_KEY;
    case ErrorCode::kNoQueries: return MQ_ERR_NO_QUERIES;
    case ErrorCode::kInsufficientData: return MQ_ERR_INSUFFICIENT_DATA;
    case ErrorCode::kDegenerateEstimate: return MQ_ERR_DEGENERATE_ESTIMATE;
    case ErrorCode::kNotTracked: return MQ_ERR_NOT_TRACKED;
    case ErrorCode::kInfeasibleLayout: return MQ_ERR_INFEASIBLE_LAYOUT;
    case ErrorCode::kParse: return MQ_ERR_PARSE;
    case ErrorCode::kIo: return MQ_ERR_IO;
  }
  return MQ_ERR_INTERNAL;
}

mq_status fail(mq_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs f, translating exceptions into status codes.
template <typename F>
mq_status guarded(F&& f) noexcept {
  try {
    f();
    last_error.clear();
    return MQ_OK;
  } catch (const magnifier::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MQ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MQ_ERR_INTERNAL, e.what());
  }
}

magnifier::MagnifierParams from_c(const mq_params& p) {
  magnifier::MagnifierParams params;
  params.w = magnifier::Quantile(p.w);
  params.total_memory_bytes = p.total_memory_bytes;
  params.q = p.q;
  params.threshold = p.threshold;
  params.d = p.d;
  params.lambda = p.lambda;
  params.r = p.r;
  params.s = p.s;
  params.seed = p.seed;
  return params;
}

#define MQ_REQUIRE(cond, what) \
  if (!(cond)) return fail(MQ_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* mq_status_string(mq_status status) {
  switch (status) {
    case MQ_OK: return "ok";
    case MQ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MQ_ERR_EMPTY: return "empty";
    case MQ_ERR_ABSENT: return "absent";
    case MQ_ERR_ABSENT_KEY: return "absent key";
    case MQ_ERR_NO_QUERIES: return "no queries";
    case MQ_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case MQ_ERR_DEGENERATE_ESTIMATE: return "degenerate estimate";
    case MQ_ERR_NOT_TRACKED: return "not tracked";
    case MQ_ERR_INFEASIBLE_LAYOUT: return "infeasible layout";
    case MQ_ERR_PARSE: return "parse error";
    case MQ_ERR_IO: return "i/o error";
    case MQ_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mq_last_error(void) { return last_error.c_str(); }

void mq_params_default(mq_params* params) {
  if (params == nullptr) return;
  const magnifier::MagnifierParams defaults;
  params->w = defaults.w.value();
  params->total_memory_bytes = defaults.total_memory_bytes;
  params->q = defaults.q;
  params->threshold = defaults.threshold;
  params->d = defaults.d;
  params->lambda = defaults.lambda;
  params->r = defaults.r;
  params->s = defaults.s;
  params->seed = defaults.seed;
}

mq_status mq_plan_capacity(const mq_params* params, uint64_t distinct_keys, mq_layout* out) {
  MQ_REQUIRE(params != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    const auto plan = magnifier::plan_capacity(from_c(*params), distinct_keys);
    out->buckets = plan.buckets;
    out->bucket_bytes = plan.bucket_bytes;
    out->value_sketch_bytes = plan.value_sketch_bytes;
    out->tower_arrays = plan.tower_arrays;
    out->tower_bytes_per_array = plan.tower_bytes_per_array;
    out->tower_bytes = plan.tower_bytes;
    out->predicted_collision_probability = plan.predicted_collision_probability.value_or(0.0);
  });
}

mq_status mq_collision_probability(uint64_t distinct_keys, uint64_t buckets,
                                   uint64_t cells_per_bucket, double* out) {
  MQ_REQUIRE(out != nullptr, "null argument");
  return guarded([&] {
    *out = magnifier::collision_probability(distinct_keys, buckets, cells_per_bucket);
  });
}

mq_status mq_sketch_create(const mq_params* params, mq_sketch** out) {
  MQ_REQUIRE(params != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new mq_sketch{magnifier::MagnifierSketch(from_c(*params))}; });
}

void mq_sketch_destroy(mq_sketch* sketch) { delete sketch; }

mq_status mq_sketch_insert(mq_sketch* sketch, uint64_t key, double value) {
  MQ_REQUIRE(sketch != nullptr, "null sketch");
  return guarded([&] { sketch->impl.insert(key, magnifier::ExtendedValue::finite(value)); });
}

mq_status mq_sketch_query(const mq_sketch* sketch, uint64_t key, double* out) {
  MQ_REQUIRE(sketch != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = sketch->impl.query(key).value(); });
}

mq_status mq_sketch_tracked_keys(const mq_sketch* sketch, uint64_t* out, uint64_t capacity,
                                 uint64_t* count) {
  MQ_REQUIRE(sketch != nullptr && count != nullptr, "null argument");
  return guarded([&] {
    const auto keys = sketch->impl.values().tracked_keys();
    *count = keys.size();
    if (out != nullptr) {
      const auto n = std::min<uint64_t>(capacity, keys.size());
      std::memcpy(out, keys.data(), n * sizeof(uint64_t));
    }
  });
}

mq_status mq_estimator_create(uint32_t r, uint32_t s, double w, uint64_t seed,
                              mq_estimator** out) {
  MQ_REQUIRE(out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new mq_estimator{magnifier::PointEstimator(r, s, magnifier::Quantile(w), seed)};
  });
}

void mq_estimator_destroy(mq_estimator* estimator) { delete estimator; }

mq_status mq_estimator_insert(mq_estimator* estimator, double value) {
  MQ_REQUIRE(estimator != nullptr, "null estimator");
  return guarded([&] { estimator->impl.insert(magnifier::ExtendedValue::finite(value)); });
}

mq_status mq_estimator_query(const mq_estimator* estimator, double* out) {
  MQ_REQUIRE(estimator != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = estimator->impl.query().value(); });
}

mq_status mq_generate_csv(const char* synthetic_spec, uint64_t seed, const char* path) {
  MQ_REQUIRE(synthetic_spec != nullptr && path != nullptr, "null argument");
  return guarded([&] {
    const auto stream = magnifier::generate(magnifier::StreamSpec::parse(synthetic_spec, seed));
    magnifier::write_csv(stream, std::filesystem::path(path));
  });
}

void mq_bench_options_default(mq_bench_options* options) {
  if (options == nullptr) return;
  mq_params_default(&options->params);
  options->input_csv = nullptr;
  options->synthetic_spec = nullptr;
  options->f_eval = 0;
  options->repeat = 3;
  options->shards = 1;
  options->single_key = 0;
}

mq_status mq_bench_run(const mq_bench_options* options, char** report_json) {
  MQ_REQUIRE(options != nullptr && report_json != nullptr, "null argument");
  MQ_REQUIRE((options->input_csv == nullptr) != (options->synthetic_spec == nullptr),
             "exactly one of input_csv and synthetic_spec must be set");
  *report_json = nullptr;
  return guarded([&] {
    magnifier::BenchOptions bench;
    bench.params = from_c(options->params);
    if (options->f_eval != 0) bench.f_eval = options->f_eval;
    bench.repeat = options->repeat;
    bench.shards = options->shards;

    const auto data =
        options->input_csv != nullptr
            ? magnifier::load_csv_dataset(options->input_csv)
            : magnifier::synthesize_dataset(
                  magnifier::StreamSpec::parse(options->synthetic_spec, options->params.seed));
    const auto report = options->single_key ? magnifier::run_single_key(data, bench)
                                            : magnifier::run_benchmark(data, bench);
    const std::string json = magnifier::report_json(report);
    char* buffer = static_cast<char*>(std::malloc(json.size() + 1));
    if (buffer == nullptr) throw std::bad_alloc();
    std::memcpy(buffer, json.c_str(), json.size() + 1);
    *report_json = buffer;
  });
}

void mq_string_free(char* str) { std::free(str); }

}  // extern "C"
