#include "proco/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "proco/errors.hpp"

namespace proco {

namespace {

using nlohmann::json;

const Answer* answer_as_of(const IterationTrace& trace, int iteration) {
  const Answer* latest = nullptr;
  for (const auto& answer : trace.answers) {
    if (answer.iteration_born <= iteration) latest = &answer;
  }
  return latest;
}

json transitions_to_json(const TransitionMatrix& m) {
  return json{{"correct_to_incorrect", m.correct_to_incorrect},
              {"incorrect_to_correct", m.incorrect_to_correct},
              {"unchanged_correct", m.unchanged_correct},
              {"unchanged_incorrect", m.unchanged_incorrect},
              {"correct_to_incorrect_fraction", m.correct_to_incorrect_fraction},
              {"incorrect_to_correct_fraction", m.incorrect_to_correct_fraction}};
}

TransitionMatrix transitions_from_json(const json& j) {
  TransitionMatrix m;
  m.correct_to_incorrect = j.at("correct_to_incorrect").get<std::int64_t>();
  m.incorrect_to_correct = j.at("incorrect_to_correct").get<std::int64_t>();
  m.unchanged_correct = j.at("unchanged_correct").get<std::int64_t>();
  m.unchanged_incorrect = j.at("unchanged_incorrect").get<std::int64_t>();
  m.correct_to_incorrect_fraction = j.at("correct_to_incorrect_fraction").get<double>();
  m.incorrect_to_correct_fraction = j.at("incorrect_to_correct_fraction").get<double>();
  return m;
}

std::string format_cell(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

}  // namespace

RunReport build_report(const std::vector<IterationTrace>& traces,
                       const std::vector<QARecord>& records, double tolerance) {
  std::map<std::string, const QARecord*> record_by_id;
  for (const auto& record : records) record_by_id[record.question_id] = &record;

  RunReport report;
  bool all_golds = !traces.empty();
  int max_iteration = 0;

  for (const auto& trace : traces) {
    auto it = record_by_id.find(trace.question_id);
    const QARecord* record = it == record_by_id.end() ? nullptr : it->second;

    PerQuestionRow row;
    row.question_id = trace.question_id;
    row.final_answer = trace.final_answer;
    if (record && !record->gold_answers.empty()) {
      row.em = exact_match(trace.final_answer, record->gold_answers);
      row.f1 = f1_score(trace.final_answer, record->gold_answers);
      row.correct =
          prediction_correct(trace.final_answer, record->gold_answers, tolerance);
    } else {
      all_golds = false;
    }
    report.per_question.push_back(std::move(row));

    for (const auto& ex : trace.exchanges)
      max_iteration = std::max(max_iteration, ex.iteration);
    for (const auto& answer : trace.answers)
      max_iteration = std::max(max_iteration, answer.iteration_born);
  }

  if (!report.per_question.empty()) {
    double em_sum = 0.0, f1_sum = 0.0, acc_sum = 0.0;
    for (const auto& row : report.per_question) {
      em_sum += row.em;
      f1_sum += row.f1;
      acc_sum += row.correct ? 1.0 : 0.0;
    }
    double n = static_cast<double>(report.per_question.size());
    report.em_mean = em_sum / n;
    report.f1_mean = f1_sum / n;
    report.accuracy = acc_sum / n;
  }

  const double n_questions = static_cast<double>(traces.size());
  for (int iteration = 0; iteration <= max_iteration && !traces.empty(); ++iteration) {
    PerIterationRow row;
    row.iteration = iteration;
    std::int64_t tokens = 0, time_ms = 0;
    double correct_sum = 0.0;
    std::int64_t scored = 0;
    for (const auto& trace : traces) {
      for (const auto& ex : trace.exchanges) {
        if (ex.iteration == iteration) {
          tokens += ex.prompt_tokens + ex.completion_tokens;
          time_ms += ex.latency_ms;
        }
      }
      auto it = record_by_id.find(trace.question_id);
      if (it != record_by_id.end() && !it->second->gold_answers.empty()) {
        if (const Answer* answer = answer_as_of(trace, iteration)) {
          ++scored;
          if (prediction_correct(answer->surface, it->second->gold_answers, tolerance))
            correct_sum += 1.0;
        }
      }
    }
    row.total_tokens = tokens;
    row.avg_tokens = static_cast<double>(tokens) / n_questions;
    row.avg_time_ms = static_cast<double>(time_ms) / n_questions;
    row.em_or_acc = scored > 0 ? correct_sum / static_cast<double>(scored) : 0.0;
    report.total_tokens += tokens;
    report.per_iteration.push_back(row);
  }

  if (all_golds) {
    std::vector<std::pair<std::string, std::string>> before, after;
    std::map<std::string, std::vector<std::string>> golds;
    bool complete = true;
    for (const auto& trace : traces) {
      const Answer* initial = answer_as_of(trace, 0);
      if (!initial) {
        complete = false;
        break;
      }
      before.emplace_back(trace.question_id, initial->surface);
      after.emplace_back(trace.question_id, trace.final_answer);
      golds[trace.question_id] = record_by_id.at(trace.question_id)->gold_answers;
    }
    if (complete && !before.empty())
      report.transitions = transition_analysis(before, after, golds, tolerance);
  }

  return report;
}

std::string emit_report(const RunReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::JSON: {
      json j;
      j["aggregates"] = json{{"em_mean", report.em_mean},
                             {"f1_mean", report.f1_mean},
                             {"accuracy", report.accuracy},
                             {"total_tokens", report.total_tokens}};
      j["per_question"] = json::array();
      for (const auto& row : report.per_question) {
        j["per_question"].push_back(json{{"question_id", row.question_id},
                                         {"final_answer", row.final_answer},
                                         {"em", row.em},
                                         {"f1", row.f1},
                                         {"correct", row.correct}});
      }
      j["per_iteration"] = json::array();
      for (const auto& row : report.per_iteration) {
        j["per_iteration"].push_back(json{{"iteration", row.iteration},
                                          {"em_or_acc", row.em_or_acc},
                                          {"avg_tokens", row.avg_tokens},
                                          {"avg_time_ms", row.avg_time_ms},
                                          {"total_tokens", row.total_tokens}});
      }
      if (report.transitions)
        j["transitions"] = transitions_to_json(*report.transitions);
      return j.dump(2) + "\n";
    }
    case ReportFormat::CSV: {
      std::ostringstream out;
      out << "iteration,em_or_acc,avg_tokens,avg_time_ms,total_tokens\n";
      for (const auto& row : report.per_iteration) {
        out << row.iteration << ',' << row.em_or_acc << ',' << row.avg_tokens
            << ',' << row.avg_time_ms << ',' << row.total_tokens << '\n';
      }
      return out.str();
    }
    case ReportFormat::Markdown: {
      std::ostringstream out;
      out << "| Metrics |";
      for (const auto& row : report.per_iteration) out << " Iter-" << row.iteration << " |";
      out << " Overall |\n|---|";
      for (std::size_t i = 0; i < report.per_iteration.size(); ++i) out << "---|";
      out << "---|\n";

      out << "| EM/Acc |";
      for (const auto& row : report.per_iteration)
        out << ' ' << format_cell(row.em_or_acc) << " |";
      out << ' ' << format_cell(report.accuracy) << " |\n";

      out << "| Avg.# Token |";
      double token_sum = 0.0;
      for (const auto& row : report.per_iteration) {
        out << ' ' << format_cell(row.avg_tokens) << " |";
        token_sum += row.avg_tokens;
      }
      out << ' ' << format_cell(token_sum) << " |\n";

      out << "| Avg.# Time (ms) |";
      double time_sum = 0.0;
      for (const auto& row : report.per_iteration) {
        out << ' ' << format_cell(row.avg_time_ms) << " |";
        time_sum += row.avg_time_ms;
      }
      out << ' ' << format_cell(time_sum) << " |\n";

      out << "\nEM " << format_cell(report.em_mean) << ", F1 "
          << format_cell(report.f1_mean) << ", accuracy "
          << format_cell(report.accuracy) << " over "
          << report.per_question.size() << " questions.\n";
      if (report.transitions) {
        const TransitionMatrix& m = *report.transitions;
        out << "Transitions: correct->incorrect "
            << format_cell(m.correct_to_incorrect_fraction)
            << ", incorrect->correct "
            << format_cell(m.incorrect_to_correct_fraction) << " (of "
            << m.total() << ").\n";
      }
      return out.str();
    }
  }
  throw Error(ErrorCode::ParseFailure, "unknown report format");
}

RunReport load_report_json(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::NotFound, "report not readable: " + path);
  json j;
  try {
    file >> j;
    RunReport report;
    const json& aggregates = j.at("aggregates");
    report.em_mean = aggregates.at("em_mean").get<double>();
    report.f1_mean = aggregates.at("f1_mean").get<double>();
    report.accuracy = aggregates.at("accuracy").get<double>();
    report.total_tokens = aggregates.at("total_tokens").get<std::int64_t>();
    for (const auto& row : j.at("per_question")) {
      report.per_question.push_back(PerQuestionRow{
          row.at("question_id").get<std::string>(),
          row.at("final_answer").get<std::string>(), row.at("em").get<int>(),
          row.at("f1").get<double>(), row.at("correct").get<bool>()});
    }
    for (const auto& row : j.at("per_iteration")) {
      report.per_iteration.push_back(PerIterationRow{
          row.at("iteration").get<int>(), row.at("em_or_acc").get<double>(),
          row.at("avg_tokens").get<double>(), row.at("avg_time_ms").get<double>(),
          row.at("total_tokens").get<std::int64_t>()});
    }
    if (j.contains("transitions"))
      report.transitions = transitions_from_json(j["transitions"]);
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, path + ": " + e.what());
  }
}

}  // namespace proco
