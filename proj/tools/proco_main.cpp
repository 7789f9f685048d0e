#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "proco/datasets.hpp"
#include "proco/engine.hpp"
#include "proco/errors.hpp"
#include "proco/report.hpp"
#include "proco/runner.hpp"
#include "proco/serialization.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitUsage = 2;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw proco::Error(proco::ErrorCode::NotFound,
                                "not writable: " + path.string());
  file << content;
}

int cmd_run(const std::string& dataset_path, const std::string& strategy,
            const std::string& config_path, const std::string& out_dir,
            int workers, int max_iterations, const std::string& provider,
            const std::string& fixtures, const std::string& task,
            const std::string& retriever_dir, bool no_cache) {
  proco::RunOptions options;
  if (!config_path.empty()) options = proco::load_run_config(config_path);

  // Flags override the config file.
  if (!strategy.empty()) options.strategy = proco::strategy_from_string(strategy);
  if (workers > 0) options.workers = workers;
  if (max_iterations > 0) options.engine.max_iterations = max_iterations;
  if (!provider.empty()) options.provider.kind = provider;
  if (!fixtures.empty()) options.provider.fixtures_path = fixtures;
  if (!task.empty()) options.task_type = proco::task_type_from_string(task);
  if (!retriever_dir.empty()) options.provider.retriever_dir = retriever_dir;

  fs::create_directories(out_dir);
  if (!no_cache && options.cache_path.empty())
    options.cache_path = (fs::path(out_dir) / "cache.jsonl").string();

  std::vector<proco::QARecord> records =
      proco::load_jsonl(dataset_path, options.task_type);
  if (records.empty()) {
    std::cerr << "dataset is empty: " << dataset_path << "\n";
    return kExitRunFailure;
  }

  proco::RunOutput output = proco::run_batch(records, options);

  std::vector<proco::IterationTrace> file_traces;
  file_traces.reserve(output.traces.size());
  for (const auto& trace : output.traces)
    file_traces.push_back(proco::canonicalize_for_file(trace));
  proco::write_traces_jsonl((fs::path(out_dir) / "traces.jsonl").string(),
                            file_traces);

  proco::RunReport report =
      proco::build_report(file_traces, records, options.engine.numeric_tolerance);
  write_file(fs::path(out_dir) / "run_report.json",
             proco::emit_report(report, proco::ReportFormat::JSON));
  write_file(fs::path(out_dir) / "run_report.csv",
             proco::emit_report(report, proco::ReportFormat::CSV));
  write_file(fs::path(out_dir) / "run_report.md",
             proco::emit_report(report, proco::ReportFormat::Markdown));

  std::int64_t lookups = output.stats.cache_hits + output.stats.cache_misses;
  json stats{{"cache_hits", output.stats.cache_hits},
             {"cache_misses", output.stats.cache_misses},
             {"cache_hit_rate", lookups > 0 ? static_cast<double>(output.stats.cache_hits) /
                                                  static_cast<double>(lookups)
                                            : 0.0},
             {"failures", output.stats.failures},
             {"questions", records.size()},
             {"wall_ms", output.stats.wall_ms}};
  write_file(fs::path(out_dir) / "run_stats.json", stats.dump(2) + "\n");

  for (const auto& trace : output.traces) {
    if (!trace.error.empty())
      std::cerr << "question " << trace.question_id << " failed: " << trace.error
                << "\n";
  }
  std::cerr << "ran " << records.size() << " questions, " << output.stats.failures
            << " failures, cache " << output.stats.cache_hits << "/" << lookups
            << " hits\n";
  std::cout << proco::emit_report(report, proco::ReportFormat::Markdown);

  return output.stats.failures > options.max_failures ? kExitRunFailure : kExitOk;
}

int cmd_compare(const std::string& report_a, const std::string& report_b) {
  proco::RunReport a = proco::load_report_json(report_a);
  proco::RunReport b = proco::load_report_json(report_b);

  auto row = [](const std::string& name, double va, double vb) {
    std::cout << "| " << name << " | " << va << " | " << vb << " | "
              << (vb - va) << " |\n";
  };
  std::cout << "| Metric | A | B | B-A |\n|---|---|---|---|\n";
  row("EM", a.em_mean, b.em_mean);
  row("F1", a.f1_mean, b.f1_mean);
  row("accuracy", a.accuracy, b.accuracy);
  row("total_tokens", static_cast<double>(a.total_tokens),
      static_cast<double>(b.total_tokens));
  return kExitOk;
}

int cmd_inspect(const std::string& trace_file, const std::string& question_id) {
  std::vector<proco::IterationTrace> traces = proco::read_traces_jsonl(trace_file);
  for (const auto& trace : traces) {
    if (trace.question_id != question_id) continue;

    std::cout << "question " << trace.question_id << "\n";
    if (trace.key_condition) {
      std::cout << "key condition: \"" << trace.key_condition->condition.surface
                << "\" (sentence " << trace.key_condition->condition.sentence_index
                << ", " << proco::to_string(trace.key_condition->selection_method)
                << ")\n";
    } else {
      std::cout << "key condition: none\n";
    }
    for (const auto& answer : trace.answers) {
      std::cout << "answer[" << answer.iteration_born << "]: " << answer.surface
                << "\n";
    }
    for (std::size_t i = 0; i < trace.verifications.size(); ++i) {
      const auto& v = trace.verifications[i];
      std::cout << "verification " << i + 1 << " (" << proco::to_string(v.method)
                << "): " << proco::to_string(v.verdict) << "\n  question: "
                << v.verification_question << "\n  recovered: " << v.verified_answer
                << "\n";
      if (v.judge_raw) std::cout << "  judgment: " << *v.judge_raw << "\n";
    }
    std::cout << "incorrect set:";
    for (const auto& s : trace.incorrect_set) std::cout << " " << s;
    std::cout << "\nfinal answer: " << trace.final_answer << " ("
              << proco::to_string(trace.stop_reason) << ")\n";
    if (!trace.error.empty()) std::cout << "error: " << trace.error << "\n";
    std::cout << "exchanges: " << trace.exchanges.size() << "\n";
    for (const auto& ex : trace.exchanges) {
      std::cout << "--- iteration " << ex.iteration << " [" << ex.provider << ", "
                << ex.prompt_tokens << "+" << ex.completion_tokens << " tok]\n"
                << ex.prompt << "\n>>> " << ex.completion << "\n";
    }
    return kExitOk;
  }
  throw proco::Error(proco::ErrorCode::NotFound,
                     question_id + " not in " + trace_file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Progressive-correction pipeline runner"};
  app.require_subcommand(1);

  // run
  std::string dataset, strategy, config, out_dir = "out", provider, fixtures,
              task, retriever_dir;
  int workers = 0, max_iterations = 0;
  bool no_cache = false;
  CLI::App* run = app.add_subcommand("run", "Run a strategy over a dataset");
  run->add_option("--dataset", dataset, "JSONL dataset")->required();
  run->add_option("--strategy", strategy, "proco | cot | self_correct");
  run->add_option("--config", config, "key=value run configuration");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--workers", workers, "concurrent questions");
  run->add_option("--max-iterations", max_iterations, "override max iterations");
  run->add_option("--provider", provider, "scripted | http");
  run->add_option("--fixtures", fixtures, "scripted-provider fixture JSONL");
  run->add_option("--task", task, "arithmetic | open_domain | commonsense");
  run->add_option("--retriever-dir", retriever_dir, "fixture retriever directory");
  run->add_flag("--no-cache", no_cache, "disable the response cache");

  // compare
  std::string report_a, report_b;
  CLI::App* compare = app.add_subcommand("compare", "Diff two run reports");
  compare->add_option("report_a", report_a)->required();
  compare->add_option("report_b", report_b)->required();

  // inspect
  std::string trace_file, question_id;
  CLI::App* inspect = app.add_subcommand("inspect", "Print one question's history");
  inspect->add_option("trace_file", trace_file)->required();
  inspect->add_option("question_id", question_id)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed())
      return cmd_run(dataset, strategy, config, out_dir, workers, max_iterations,
                     provider, fixtures, task, retriever_dir, no_cache);
    if (compare->parsed()) return cmd_compare(report_a, report_b);
    if (inspect->parsed()) return cmd_inspect(trace_file, question_id);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRunFailure;
  }
  return kExitUsage;
}
