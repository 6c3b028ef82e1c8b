/* C interface to the per-key point-quantile sketch library.
 *
 * Every fallible call returns an mq_status. On failure a message describing
 * the last error on the calling thread is available from mq_last_error().
 * Handles are opaque and owned by the caller; release them with the matching
 * *_destroy function. A handle must not be used from two threads at once. */
#ifndef MAGNIFIER_MAGNIFIER_H
#define MAGNIFIER_MAGNIFIER_H

#include <stdint.h>

#if defined(MAGNIFIER_BUILDING_LIBRARY)
#define MQ_API __attribute__((visibility("default")))
#else
#define MQ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mq_status {
  MQ_OK = 0,
  MQ_ERR_INVALID_ARGUMENT = 1,
  MQ_ERR_EMPTY = 2,
  MQ_ERR_ABSENT = 3,
  MQ_ERR_ABSENT_KEY = 4,
  MQ_ERR_NO_QUERIES = 5,
  MQ_ERR_INSUFFICIENT_DATA = 6,
  MQ_ERR_DEGENERATE_ESTIMATE = 7,
  MQ_ERR_NOT_TRACKED = 8,
  MQ_ERR_INFEASIBLE_LAYOUT = 9,
  MQ_ERR_PARSE = 10,
  MQ_ERR_IO = 11,
  MQ_ERR_INTERNAL = 12
} mq_status;

typedef struct mq_params {
  double w;                    /* target quantile in [0, 1] */
  uint64_t total_memory_bytes;
  double q;                    /* tower filter share of memory, in (0, 1) */
  uint32_t threshold;          /* T: filter estimate needed for admission */
  uint32_t d;                  /* cells per bucket */
  double lambda;               /* eviction ratio */
  uint32_t r;                  /* candidate size, even */
  uint32_t s;                  /* representative size, even */
  uint64_t seed;
} mq_params;

typedef struct mq_layout {
  uint64_t buckets;
  uint64_t bucket_bytes;
  uint64_t value_sketch_bytes;
  uint64_t tower_arrays;
  uint64_t tower_bytes_per_array;
  uint64_t tower_bytes;
  double predicted_collision_probability; /* for the supplied key count */
} mq_layout;

typedef struct mq_bench_options {
  mq_params params;
  const char* input_csv;       /* exactly one of input_csv / synthetic_spec */
  const char* synthetic_spec;
  uint64_t f_eval;             /* 0 selects params.threshold */
  uint32_t repeat;
  uint32_t shards;
  int single_key;
} mq_bench_options;

typedef struct mq_sketch mq_sketch;
typedef struct mq_estimator mq_estimator;

MQ_API const char* mq_status_string(mq_status status);
MQ_API const char* mq_last_error(void);

/* Fills in the tuned defaults: w=0.5, 500 KiB, q=0.1, T=40, d=7, lambda=4,
 * r=16, s=10, seed=0. */
MQ_API void mq_params_default(mq_params* params);

MQ_API mq_status mq_plan_capacity(const mq_params* params, uint64_t distinct_keys,
                                  mq_layout* out);
MQ_API mq_status mq_collision_probability(uint64_t distinct_keys, uint64_t buckets,
                                          uint64_t cells_per_bucket, double* out);

/* Per-key sketch. */
MQ_API mq_status mq_sketch_create(const mq_params* params, mq_sketch** out);
MQ_API void mq_sketch_destroy(mq_sketch* sketch);
MQ_API mq_status mq_sketch_insert(mq_sketch* sketch, uint64_t key, double value);
MQ_API mq_status mq_sketch_query(const mq_sketch* sketch, uint64_t key, double* out);
/* Keys currently holding a cell. With out == NULL only *count is written;
 * otherwise up to capacity keys are copied and *count receives the total. */
MQ_API mq_status mq_sketch_tracked_keys(const mq_sketch* sketch, uint64_t* out,
                                        uint64_t capacity, uint64_t* count);

/* Single-key estimator. */
MQ_API mq_status mq_estimator_create(uint32_t r, uint32_t s, double w, uint64_t seed,
                                     mq_estimator** out);
MQ_API void mq_estimator_destroy(mq_estimator* estimator);
MQ_API mq_status mq_estimator_insert(mq_estimator* estimator, double value);
MQ_API mq_status mq_estimator_query(const mq_estimator* estimator, double* out);

/* Synthetic stream to CSV. */
MQ_API mq_status mq_generate_csv(const char* synthetic_spec, uint64_t seed, const char* path);

/* Benchmark harness. On success *report_json receives a NUL-terminated JSON
 * document to be released with mq_string_free. */
MQ_API void mq_bench_options_default(mq_bench_options* options);
MQ_API mq_status mq_bench_run(const mq_bench_options* options, char** report_json);
MQ_API void mq_string_free(char* str);

#ifdef __cplusplus
}
#endif

#endif /* MAGNIFIER_MAGNIFIER_H */
