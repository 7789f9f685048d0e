#include "proco/domain.hpp"

#include <sstream>
#include <stdexcept>

#include "proco/errors.hpp"

namespace proco {

namespace {

std::string trim_copy(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

const std::string& Question::sentence_at(int index) const {
  if (index == kQuerySentence) return query_sentence;
  return context_sentences.at(static_cast<std::size_t>(index - 1));
}

bool Question::is_multiple_choice() const {
  return raw_text.find("Answer Choices:") != std::string::npos;
}

void EngineConfig::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (temperature < 0) throw std::invalid_argument("temperature must be >= 0");
  if (documents_m < 1) throw std::invalid_argument("documents_m must be >= 1");
}

Question compose_question(const std::vector<std::string>& context_sentences,
                          const std::string& query, TaskType task_type) {
  if (trim_copy(query).empty()) throw Error(ErrorCode::EmptyQuery, "query sentence is blank");

  Question q;
  q.task_type = task_type;
  q.query_sentence = trim_copy(query);
  std::ostringstream raw;
  for (const auto& sentence : context_sentences) {
    std::string trimmed = trim_copy(sentence);
    if (trimmed.empty()) continue;
    q.context_sentences.push_back(trimmed);
    raw << q.context_sentences.back() << ' ';
  }
  raw << q.query_sentence;
  q.raw_text = raw.str();

  if (task_type == TaskType::Arithmetic) {
    for (std::size_t j = 0; j < q.context_sentences.size(); ++j) {
      for (const NumericMatch& m : extract_numeric_values(q.context_sentences[j])) {
        Condition c;
        c.surface = q.context_sentences[j].substr(m.span.begin, m.span.end - m.span.begin);
        c.kind = ConditionKind::NumericValue;
        c.sentence_index = static_cast<int>(j) + 1;
        c.char_span = m.span;
        c.numeric_value = m.value;
        q.conditions.push_back(std::move(c));
      }
    }
  }
  return q;
}

const char* to_string(TaskType v) {
  switch (v) {
    case TaskType::Arithmetic: return "Arithmetic";
    case TaskType::OpenDomain: return "OpenDomain";
    case TaskType::Commonsense: return "Commonsense";
  }
  return "?";
}

const char* to_string(ConditionKind v) {
  switch (v) {
    case ConditionKind::NumericValue: return "NumericValue";
    case ConditionKind::Entity: return "Entity";
    case ConditionKind::Concept: return "Concept";
  }
  return "?";
}

const char* to_string(SelectionMethod v) {
  switch (v) {
    case SelectionMethod::Similarity: return "Similarity";
    case SelectionMethod::ZeroShot: return "ZeroShot";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::LikelyCorrect: return "LikelyCorrect";
    case Verdict::LikelyIncorrect: return "LikelyIncorrect";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(VerifyMethod v) {
  switch (v) {
    case VerifyMethod::MatchBased: return "MatchBased";
    case VerifyMethod::PropositionBased: return "PropositionBased";
  }
  return "?";
}

const char* to_string(StopReason v) {
  switch (v) {
    case StopReason::VerifiedCorrect: return "VerifiedCorrect";
    case StopReason::AnswerRepeated: return "AnswerRepeated";
    case StopReason::MaxIterations: return "MaxIterations";
    case StopReason::NoKeyCondition: return "NoKeyCondition";
  }
  return "?";
}

const char* to_string(InitializerKind v) {
  switch (v) {
    case InitializerKind::CoT: return "CoT";
    case InitializerKind::GenRead: return "GenRead";
    case InitializerKind::Retrieval: return "Retrieval";
  }
  return "?";
}

TaskType task_type_from_string(const std::string& s) {
  if (s == "Arithmetic" || s == "arithmetic") return TaskType::Arithmetic;
  if (s == "OpenDomain" || s == "open_domain" || s == "opendomain") return TaskType::OpenDomain;
  if (s == "Commonsense" || s == "commonsense") return TaskType::Commonsense;
  throw Error(ErrorCode::ParseFailure, "unknown task type: " + s);
}

StopReason stop_reason_from_string(const std::string& s) {
  if (s == "VerifiedCorrect") return StopReason::VerifiedCorrect;
  if (s == "AnswerRepeated") return StopReason::AnswerRepeated;
  if (s == "MaxIterations") return StopReason::MaxIterations;
  if (s == "NoKeyCondition") return StopReason::NoKeyCondition;
  throw Error(ErrorCode::ParseFailure, "unknown stop reason: " + s);
}

}  // namespace proco
