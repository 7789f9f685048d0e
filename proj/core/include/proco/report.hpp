#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "proco/datasets.hpp"
#include "proco/domain.hpp"
#include "proco/metrics.hpp"

namespace proco {

enum class ReportFormat { JSON, CSV, Markdown };

struct PerQuestionRow {
  std::string question_id;
  std::string final_answer;
  int em = 0;
  double f1 = 0.0;
  bool correct = false;
};

struct PerIterationRow {
  int iteration = 0;
  double em_or_acc = 0.0;
  double avg_tokens = 0.0;
  double avg_time_ms = 0.0;
  std::int64_t total_tokens = 0;
};

struct RunReport {
  std::vector<PerQuestionRow> per_question;
  double em_mean = 0.0;
  double f1_mean = 0.0;
  double accuracy = 0.0;
  std::int64_t total_tokens = 0;
  std::vector<PerIterationRow> per_iteration;
  std::optional<TransitionMatrix> transitions;
};

/// Joins traces with their dataset records: per-question metrics, Table-7
/// style per-iteration cost columns, and the initial-vs-final transition
/// matrix when gold answers are available.
RunReport build_report(const std::vector<IterationTrace>& traces,
                       const std::vector<QARecord>& records, double tolerance);

std::string emit_report(const RunReport& report, ReportFormat format);

RunReport load_report_json(const std::string& path);

}  // namespace proco
