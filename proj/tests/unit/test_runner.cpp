#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "proco/errors.hpp"
#include "proco/report.hpp"
#include "proco/runner.hpp"
#include "proco/serialization.hpp"

using namespace proco;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path);
  file << content;
}

// Three small word problems with per-question fixtures: q1 corrects once,
// q2 verifies immediately, q3 repeats its answer.
void write_batch_inputs(const fs::path& dir) {
  write_file(dir / "dataset.jsonl",
             R"({"question_id": "q1", "question": "A box holds 4 pens. How many pens in two boxes?", "answers": ["8"]})"
             "\n"
             R"({"question_id": "q2", "question": "There are 7 cats. How many cats?", "answers": ["7"]})"
             "\n"
             R"({"question_id": "q3", "question": "A bag has 9 marbles. How many marbles?", "answers": ["9"]})"
             "\n");

  std::string fixtures;
  // q1: initial 6 (wrong), verification X=2 (key 4 -> incorrect), corrected 8,
  // verification X=4 (correct).
  fixtures +=
      R"({"question_id": "q1", "pattern": "The answer (arabic numerals) is:", "responses": ["6", "2", "8", "4"]})"
      "\n"
      R"({"question_id": "q1", "pattern": "boxes?\nA: Let's think step by step.", "responses": ["Maybe 3 pens each, so 6."]})"
      "\n"
      R"({"question_id": "q1", "pattern": "Suppose the answer is 6", "responses": ["Then each box holds 3, X = 2... actually X = 2."]})"
      "\n"
      R"({"question_id": "q1", "pattern": "Suppose the answer is 8", "responses": ["Each box holds 4, X = 4."]})"
      "\n"
      R"({"question_id": "q1", "pattern": "the answer is likely not in", "responses": ["Two boxes of 4 make 8."]})"
      "\n";
  // q2: initial 7, immediately verified.
  fixtures +=
      R"({"question_id": "q2", "pattern": "The answer (arabic numerals) is:", "responses": ["7", "7"]})"
      "\n"
      R"({"question_id": "q2", "pattern": "cats?\nA: Let's think step by step.", "responses": ["Seven cats are listed, so 7."]})"
      "\n"
      R"({"question_id": "q2", "pattern": "Suppose the answer is 7", "responses": ["X must be 7."]})"
      "\n";
  // q3: initial 5, verification wrong, correction repeats 5.
  fixtures +=
      R"({"question_id": "q3", "pattern": "The answer (arabic numerals) is:", "responses": ["5", "1", "5"]})"
      "\n"
      R"({"question_id": "q3", "pattern": "marbles?\nA: Let's think step by step.", "responses": ["I estimate 5."]})"
      "\n"
      R"({"question_id": "q3", "pattern": "Suppose the answer is 5", "responses": ["X would be 1."]})"
      "\n"
      R"({"question_id": "q3", "pattern": "the answer is likely not in", "responses": ["I still estimate 5."]})"
      "\n";
  write_file(dir / "fixtures.jsonl", fixtures);
}

RunOptions batch_options(const fs::path& dir) {
  RunOptions options;
  options.provider.kind = "scripted";
  options.provider.fixtures_path = (dir / "fixtures.jsonl").string();
  options.task_type = TaskType::Arithmetic;
  options.workers = 3;
  return options;
}

}  // namespace

TEST_CASE("run_batch executes all questions and keeps dataset order") {
  TempDir dir("proco_runner_batch");
  write_batch_inputs(dir.path);
  auto records = load_jsonl((dir.path / "dataset.jsonl").string(),
                            TaskType::Arithmetic);
  RunOutput output = run_batch(records, batch_options(dir.path));

  REQUIRE(output.traces.size() == 3);
  CHECK(output.traces[0].question_id == "q1");
  CHECK(output.traces[0].final_answer == "8");
  CHECK(output.traces[0].stop_reason == StopReason::VerifiedCorrect);
  CHECK(output.traces[1].question_id == "q2");
  CHECK(output.traces[1].final_answer == "7");
  CHECK(output.traces[1].incorrect_set.empty());
  CHECK(output.traces[2].question_id == "q3");
  CHECK(output.traces[2].stop_reason == StopReason::AnswerRepeated);
  CHECK(output.stats.failures == 0);
}

TEST_CASE("run_batch is deterministic across worker counts") {
  TempDir dir("proco_runner_det");
  write_batch_inputs(dir.path);
  auto records = load_jsonl((dir.path / "dataset.jsonl").string(),
                            TaskType::Arithmetic);

  RunOptions serial = batch_options(dir.path);
  serial.workers = 1;
  RunOptions parallel = batch_options(dir.path);
  parallel.workers = 8;

  RunOutput a = run_batch(records, serial);
  RunOutput b = run_batch(records, parallel);
  REQUIRE(a.traces.size() == b.traces.size());
  for (std::size_t i = 0; i < a.traces.size(); ++i) {
    CHECK(trace_to_json_line(a.traces[i]) == trace_to_json_line(b.traces[i]));
  }
}

TEST_CASE("per-question failures never abort the batch") {
  TempDir dir("proco_runner_fail");
  write_batch_inputs(dir.path);
  // Add a record with no fixtures at all.
  {
    std::ofstream file(dir.path / "dataset.jsonl", std::ios::app);
    file << R"({"question_id": "q4", "question": "Unmatched 3 things?", "answers": ["3"]})"
         << "\n";
  }
  auto records = load_jsonl((dir.path / "dataset.jsonl").string(),
                            TaskType::Arithmetic);
  RunOutput output = run_batch(records, batch_options(dir.path));
  REQUIRE(output.traces.size() == 4);
  CHECK(output.stats.failures == 1);
  CHECK_FALSE(output.traces[3].error.empty());
  CHECK(output.traces[0].error.empty());
}

TEST_CASE("the response cache is shared across a rerun") {
  TempDir dir("proco_runner_cache");
  write_batch_inputs(dir.path);
  auto records = load_jsonl((dir.path / "dataset.jsonl").string(),
                            TaskType::Arithmetic);
  RunOptions options = batch_options(dir.path);
  options.cache_path = (dir.path / "cache.jsonl").string();

  RunOutput first = run_batch(records, options);
  CHECK(first.stats.cache_hits == 0);
  CHECK(first.stats.cache_misses > 0);

  RunOutput second = run_batch(records, options);
  CHECK(second.stats.cache_misses == 0);
  CHECK(second.stats.cache_hits == first.stats.cache_misses);

  // Canonical file form strips live cache metadata, so both runs serialize
  // identically.
  for (std::size_t i = 0; i < first.traces.size(); ++i) {
    CHECK(trace_to_json_line(canonicalize_for_file(first.traces[i])) ==
          trace_to_json_line(canonicalize_for_file(second.traces[i])));
  }
}

TEST_CASE("report built from batch traces recomputes its aggregates") {
  TempDir dir("proco_runner_report");
  write_batch_inputs(dir.path);
  auto records = load_jsonl((dir.path / "dataset.jsonl").string(),
                            TaskType::Arithmetic);
  RunOutput output = run_batch(records, batch_options(dir.path));
  RunReport report = build_report(output.traces, records, 1e-4);

  REQUIRE(report.per_question.size() == 3);
  // Independent fold over the rows.
  double em = 0, f1 = 0, acc = 0;
  for (const auto& row : report.per_question) {
    em += row.em;
    f1 += row.f1;
    acc += row.correct ? 1 : 0;
  }
  CHECK(report.em_mean == doctest::Approx(em / 3.0));
  CHECK(report.f1_mean == doctest::Approx(f1 / 3.0));
  CHECK(report.accuracy == doctest::Approx(acc / 3.0));

  // q1 and q2 are right, q3 is wrong.
  CHECK(report.accuracy == doctest::Approx(2.0 / 3.0));

  // Token totals equal the per-exchange sum.
  std::int64_t expected_tokens = 0;
  for (const auto& trace : output.traces)
    for (const auto& ex : trace.exchanges)
      expected_tokens += ex.prompt_tokens + ex.completion_tokens;
  std::int64_t reported = 0;
  for (const auto& row : report.per_iteration) reported += row.total_tokens;
  CHECK(reported == expected_tokens);
  CHECK(report.total_tokens == expected_tokens);

  // Transition matrix: q1 flipped to correct, q2 unchanged correct, q3
  // unchanged incorrect.
  REQUIRE(report.transitions.has_value());
  CHECK(report.transitions->incorrect_to_correct == 1);
  CHECK(report.transitions->unchanged_correct == 1);
  CHECK(report.transitions->unchanged_incorrect == 1);
  CHECK(report.transitions->correct_to_incorrect == 0);

  // Emission round-trip through the JSON form.
  fs::path report_path = dir.path / "run_report.json";
  write_file(report_path, emit_report(report, ReportFormat::JSON));
  RunReport loaded = load_report_json(report_path.string());
  CHECK(loaded.em_mean == doctest::Approx(report.em_mean));
  CHECK(loaded.per_question.size() == report.per_question.size());
  CHECK(loaded.per_iteration.size() == report.per_iteration.size());
  REQUIRE(loaded.transitions.has_value());
  CHECK(loaded.transitions->incorrect_to_correct == 1);

  // CSV and Markdown emit without error and carry the iteration rows.
  std::string csv = emit_report(report, ReportFormat::CSV);
  CHECK(csv.find("iteration,em_or_acc,avg_tokens,avg_time_ms,total_tokens") == 0);
  std::string md = emit_report(report, ReportFormat::Markdown);
  CHECK(md.find("Iter-0") != std::string::npos);
  CHECK(md.find("Avg.# Token") != std::string::npos);
}

TEST_CASE("run config files parse key=value pairs") {
  TempDir dir("proco_runner_config");
  write_file(dir.path / "run.conf",
             "# comment\n"
             "strategy = self_correct\n"
             "max_iterations = 2\n"
             "temperature = 0.1\n"
             "numeric_tolerance = 1e-6\n"
             "rng_seed = 99\n"
             "initializer = genread\n"
             "documents_m = 5\n"
             "provider = scripted\n"
             "model_name = test-model\n"
             "fixtures = fx.jsonl\n"
             "workers = 2\n"
             "task_type = commonsense\n");
  RunOptions options = load_run_config((dir.path / "run.conf").string());
  CHECK(options.strategy == Strategy::SelfCorrect);
  CHECK(options.engine.max_iterations == 2);
  CHECK(options.engine.temperature == doctest::Approx(0.1));
  CHECK(options.engine.numeric_tolerance == doctest::Approx(1e-6));
  CHECK(options.engine.rng_seed == 99);
  CHECK(options.engine.initializer == InitializerKind::GenRead);
  CHECK(options.engine.documents_m == 5);
  CHECK(options.provider.kind == "scripted");
  CHECK(options.provider.model_name == "test-model");
  CHECK(options.provider.fixtures_path == "fx.jsonl");
  CHECK(options.workers == 2);
  CHECK(options.task_type == TaskType::Commonsense);

  write_file(dir.path / "bad.conf", "not a pair\n");
  CHECK_THROWS_WITH_AS(load_run_config((dir.path / "bad.conf").string()),
                       doctest::Contains("MalformedLine"), Error);
}
