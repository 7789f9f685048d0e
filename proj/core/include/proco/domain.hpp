#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "proco/textproc.hpp"

namespace proco {

enum class TaskType { Arithmetic, OpenDomain, Commonsense };
enum class ConditionKind { NumericValue, Entity, Concept };
enum class SelectionMethod { Similarity, ZeroShot };
enum class Verdict { LikelyCorrect, LikelyIncorrect, Inconclusive };
enum class VerifyMethod { MatchBased, PropositionBased };
enum class StopReason { VerifiedCorrect, AnswerRepeated, MaxIterations, NoKeyCondition };
enum class InitializerKind { CoT, GenRead, Retrieval };

/// Index of the sentence hosting a condition: 1..m for context sentences,
/// kQuerySentence for the query sentence itself (entities selected by the
/// zero-shot identifier may live there).
inline constexpr int kQuerySentence = 0;

struct Condition {
  std::string surface;
  ConditionKind kind = ConditionKind::NumericValue;
  int sentence_index = kQuerySentence;
  CharSpan char_span;
  std::optional<double> numeric_value;

  bool operator==(const Condition&) const = default;
};

struct Question {
  std::string raw_text;
  std::vector<std::string> context_sentences;
  std::string query_sentence;
  std::vector<Condition> conditions;
  TaskType task_type = TaskType::Arithmetic;
  std::vector<std::string> gold_answers;

  const std::string& sentence_at(int index) const;
  bool is_multiple_choice() const;
};

struct KeyCondition {
  Condition condition;
  int index_k = 0;
  SelectionMethod selection_method = SelectionMethod::Similarity;

  bool operator==(const KeyCondition&) const = default;
};

struct Answer {
  std::string surface;
  std::string reasoning;
  int iteration_born = 0;
};

struct VerificationOutcome {
  std::string verification_question;
  std::string verified_answer;
  Verdict verdict = Verdict::Inconclusive;
  VerifyMethod method = VerifyMethod::MatchBased;
  std::optional<std::string> judge_raw;
};

struct BackendExchange {
  std::string prompt;
  std::string completion;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  std::int64_t latency_ms = 0;
  std::string provider;
  bool cache_hit = false;
  int iteration = 0;  // 0 = initialization, t >= 1 = verify-correct round t
};

struct IterationTrace {
  std::string question_id;
  std::optional<KeyCondition> key_condition;
  std::vector<Answer> answers;
  std::vector<VerificationOutcome> verifications;
  std::vector<std::string> incorrect_set;  // P_t, insertion order
  std::string final_answer;
  StopReason stop_reason = StopReason::MaxIterations;
  std::vector<BackendExchange> exchanges;
  std::string error;  // empty when the question completed normally
};

struct EngineConfig {
  int max_iterations = 3;
  double temperature = 0.7;
  double numeric_tolerance = 1e-4;
  std::uint64_t rng_seed = 42;
  InitializerKind initializer = InitializerKind::CoT;
  int documents_m = 1;

  void validate() const;
};

/// Builds a Question from pre-segmented sentences. Numeric conditions are
/// extracted from context sentences for arithmetic tasks; entity and concept
/// conditions require the zero-shot identifier and are left empty here.
Question compose_question(const std::vector<std::string>& context_sentences,
                          const std::string& query, TaskType task_type);

const char* to_string(TaskType v);
const char* to_string(ConditionKind v);
const char* to_string(SelectionMethod v);
const char* to_string(Verdict v);
const char* to_string(VerifyMethod v);
const char* to_string(StopReason v);
const char* to_string(InitializerKind v);

TaskType task_type_from_string(const std::string& s);
StopReason stop_reason_from_string(const std::string& s);

}  // namespace proco
