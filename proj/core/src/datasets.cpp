#include "proco/datasets.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "proco/errors.hpp"
#include "proco/textproc.hpp"

namespace proco {

namespace {

using nlohmann::json;

std::string render_choices(const std::vector<std::pair<char, std::string>>& choices) {
  std::string out = "Answer Choices:";
  for (std::size_t i = 0; i < choices.size(); ++i) {
    out += i == 0 ? " " : ", ";
    out += "(";
    out += choices[i].first;
    out += ") ";
    out += choices[i].second;
  }
  return out;
}

}  // namespace

std::vector<QARecord> load_jsonl(const std::string& path, TaskType task_type) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::NotFound, "dataset not readable: " + path);

  std::vector<QARecord> records;
  std::set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    QARecord record;
    try {
      json j = json::parse(line);
      record.question_text = j.at("question").get<std::string>();
      record.gold_answers = j.at("answers").get<std::vector<std::string>>();
      record.task_type =
          j.contains("task_type")
              ? task_type_from_string(j["task_type"].get<std::string>())
              : task_type;
      if (j.contains("question_id"))
        record.question_id = j["question_id"].get<std::string>();
      else if (j.contains("id"))
        record.question_id = j["id"].get<std::string>();
      else
        record.question_id = "q" + std::to_string(line_no);
      if (j.contains("choices")) {
        auto texts = j["choices"].get<std::vector<std::string>>();
        char letter = 'A';
        for (const auto& text : texts) record.choices.emplace_back(letter++, text);
        record.question_text += " " + render_choices(record.choices);
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedLine,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen_ids.insert(record.question_id).second)
      throw Error(ErrorCode::DuplicateId,
                  record.question_id + " at " + path + ":" + std::to_string(line_no));
    records.push_back(std::move(record));
  }
  return records;
}

Question question_from_record(const QARecord& record) {
  std::vector<std::string> sentences = segment_sentences(record.question_text);
  if (sentences.empty())
    throw Error(ErrorCode::EmptyQuery, "blank question text for " + record.question_id);

  // The query is the last '?'-terminated sentence together with any trailing
  // segments (answer choices stay attached after the question mark).
  std::size_t query_start = sentences.size() - 1;
  for (std::size_t i = sentences.size(); i-- > 0;) {
    if (!sentences[i].empty() && sentences[i].back() == '?') {
      query_start = i;
      break;
    }
  }

  std::vector<std::string> context(sentences.begin(),
                                   sentences.begin() + static_cast<long>(query_start));
  std::string query;
  for (std::size_t i = query_start; i < sentences.size(); ++i) {
    if (i > query_start) query += ' ';
    query += sentences[i];
  }

  Question question = compose_question(context, query, record.task_type);
  question.gold_answers = record.gold_answers;
  return question;
}

}  // namespace proco
