#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "proco/datasets.hpp"
#include "proco/domain.hpp"
#include "proco/engine.hpp"

namespace proco {

struct ProviderSettings {
  std::string kind = "scripted";  // scripted | http
  std::string model_name;
  std::string fixtures_path;
  std::string retriever_dir;
  int max_tokens = 0;
  std::int64_t token_budget = 0;  // 0 = unlimited
};

struct RunOptions {
  EngineConfig engine;
  ProviderSettings provider;
  Strategy strategy = Strategy::ProCo;
  TaskType task_type = TaskType::Arithmetic;  // default for records without one
  int workers = 4;
  int max_failures = 0;
  std::string prompt_catalog_path;  // empty = built-in catalog
  std::string cache_path;           // empty = no cache
};

struct RunStats {
  std::int64_t cache_hits = 0;
  std::int64_t cache_misses = 0;
  int failures = 0;
  double wall_ms = 0.0;
};

struct RunOutput {
  std::vector<IterationTrace> traces;  // dataset order
  RunStats stats;
};

/// Key=value run configuration (one pair per line, '#' comments).
RunOptions load_run_config(const std::string& path);

/// Executes the strategy over all records with up to `workers` concurrent
/// questions. Per-question failures are recorded in the trace's error field;
/// the batch always completes.
RunOutput run_batch(const std::vector<QARecord>& records, const RunOptions& options);

/// Acquisition-time view of the exchanges for trace files: live cache/lookup
/// metadata is reset so reruns serve byte-identical bytes.
IterationTrace canonicalize_for_file(IterationTrace trace);

}  // namespace proco
