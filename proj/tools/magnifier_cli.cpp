// Command-line front end over the C library interface.
//
//   magnifier bench (--input FILE.csv | --synthetic SPEC) [options] [--report OUT.json]
//   magnifier generate --synthetic SPEC --seed N --output FILE.csv

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "magnifier/magnifier.h"

namespace {

int report_failure(mq_status status) {
  std::cerr << "error: " << mq_status_string(status);
  const std::string detail = mq_last_error();
  if (!detail.empty()) std::cerr << ": " << detail;
  std::cerr << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-key point-quantile sketch: accuracy and throughput benchmark"};
  app.require_subcommand(1);

  mq_bench_options options;
  mq_bench_options_default(&options);
  std::string input_csv;
  std::string synthetic;
  std::string report_path;
  uint64_t memory_kb = options.params.total_memory_bytes / 1024;
  bool single_key = false;

  auto* bench = app.add_subcommand("bench", "Run the sketch against an exact oracle");
  auto* input_opt = bench->add_option("--input", input_csv, "CSV stream of key,value lines");
  auto* synth_opt = bench->add_option(
      "--synthetic", synthetic,
      "Synthetic stream, e.g. items=1000000,keys=10000,key_dist=zipf:1,value_dist=pareto:1:1");
  input_opt->excludes(synth_opt);
  bench->add_option("--memory-kb", memory_kb, "Memory budget in KiB")->capture_default_str();
  bench->add_option("--w", options.params.w, "Target quantile")->capture_default_str();
  bench->add_option("--d", options.params.d, "Cells per bucket")->capture_default_str();
  bench->add_option("--q", options.params.q, "Tower filter memory share")->capture_default_str();
  bench->add_option("--T", options.params.threshold, "Admission threshold")->capture_default_str();
  bench->add_option("--lambda", options.params.lambda, "Eviction ratio")->capture_default_str();
  bench->add_option("--r", options.params.r, "Candidate size (even)")->capture_default_str();
  bench->add_option("--s", options.params.s, "Representative size (even)")->capture_default_str();
  bench->add_option("--seed", options.params.seed, "Seed for every random choice")
      ->capture_default_str();
  bench->add_option("--f-eval", options.f_eval,
                    "Minimum true frequency of evaluated keys (default: T)");
  bench->add_option("--repeat", options.repeat, "Timing repetitions")->capture_default_str();
  bench->add_option("--shards", options.shards, "Independent sketches, one per worker thread")
      ->capture_default_str();
  bench->add_flag("--single-key", single_key, "Ignore keys and feed one estimator");
  bench->add_option("--report", report_path, "Write the JSON report here instead of stdout");

  std::string gen_spec;
  std::string gen_output;
  uint64_t gen_seed = 0;
  auto* generate = app.add_subcommand("generate", "Write a synthetic stream as CSV");
  generate->add_option("--synthetic", gen_spec, "Stream spec")->required();
  generate->add_option("--seed", gen_seed, "Seed")->capture_default_str();
  generate->add_option("--output", gen_output, "CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  if (*generate) {
    const mq_status status = mq_generate_csv(gen_spec.c_str(), gen_seed, gen_output.c_str());
    return status == MQ_OK ? 0 : report_failure(status);
  }

  if (input_csv.empty() == synthetic.empty()) {
    std::cerr << "error: bench needs exactly one of --input or --synthetic\n";
    return 2;
  }
  options.params.total_memory_bytes = memory_kb * 1024;
  options.single_key = single_key ? 1 : 0;
  options.input_csv = input_csv.empty() ? nullptr : input_csv.c_str();
  options.synthetic_spec = synthetic.empty() ? nullptr : synthetic.c_str();

  char* json = nullptr;
  const mq_status status = mq_bench_run(&options, &json);
  if (status != MQ_OK) return report_failure(status);

  int rc = 0;
  if (report_path.empty()) {
    std::cout << json << '\n';
  } else {
    std::ofstream out(report_path, std::ios::binary);
    out << json << '\n';
    if (!out) {
      std::cerr << "error: cannot write report to " << report_path << '\n';
      rc = 1;
    }
  }
  mq_string_free(json);
  return rc;
}
