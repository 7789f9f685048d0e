#pragma once

#include <string>
#include <utility>
#include <vector>

#include "proco/domain.hpp"

namespace proco {

struct QARecord {
  std::string question_id;
  std::string question_text;  // answer choices already rendered for MC records
  TaskType task_type = TaskType::Arithmetic;
  std::vector<std::string> gold_answers;
  std::vector<std::pair<char, std::string>> choices;  // (letter, text); empty unless MC
};

/// Loads one JSON object per line: {"question": ..., "answers": [...],
/// "choices": [...]?, "question_id"/"id": ...?}. Multiple-choice questions
/// get their choices rendered into question_text as
/// "Answer Choices: (A) ..., (B) ...". Ids default to q<line number>.
std::vector<QARecord> load_jsonl(const std::string& path, TaskType task_type);

/// Segments the record text; the last '?'-terminated sentence plus anything
/// after it becomes the query, earlier sentences the context.
Question question_from_record(const QARecord& record);

}  // namespace proco
