#include "proco/serialization.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "proco/errors.hpp"

namespace proco {

namespace {

using nlohmann::json;

json span_to_json(const CharSpan& span) {
  return json::array({span.begin, span.end});
}

CharSpan span_from_json(const json& j) {
  return CharSpan{j.at(0).get<std::size_t>(), j.at(1).get<std::size_t>()};
}

json condition_to_json(const Condition& c) {
  json j{{"surface", c.surface},
         {"kind", to_string(c.kind)},
         {"sentence_index", c.sentence_index},
         {"char_span", span_to_json(c.char_span)}};
  j["numeric_value"] = c.numeric_value ? json(*c.numeric_value) : json(nullptr);
  return j;
}

Condition condition_from_json(const json& j) {
  Condition c;
  c.surface = j.at("surface").get<std::string>();
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "NumericValue") c.kind = ConditionKind::NumericValue;
  else if (kind == "Entity") c.kind = ConditionKind::Entity;
  else if (kind == "Concept") c.kind = ConditionKind::Concept;
  else throw Error(ErrorCode::ParseFailure, "unknown condition kind: " + kind);
  c.sentence_index = j.at("sentence_index").get<int>();
  c.char_span = span_from_json(j.at("char_span"));
  if (!j.at("numeric_value").is_null())
    c.numeric_value = j["numeric_value"].get<double>();
  return c;
}

json key_condition_to_json(const KeyCondition& k) {
  return json{{"condition", condition_to_json(k.condition)},
              {"index_k", k.index_k},
              {"selection_method", to_string(k.selection_method)}};
}

KeyCondition key_condition_from_json(const json& j) {
  KeyCondition k;
  k.condition = condition_from_json(j.at("condition"));
  k.index_k = j.at("index_k").get<int>();
  std::string method = j.at("selection_method").get<std::string>();
  k.selection_method = method == "Similarity" ? SelectionMethod::Similarity
                                              : SelectionMethod::ZeroShot;
  return k;
}

json answer_to_json(const Answer& a) {
  return json{{"surface", a.surface},
              {"reasoning", a.reasoning},
              {"iteration_born", a.iteration_born}};
}

Answer answer_from_json(const json& j) {
  return Answer{j.at("surface").get<std::string>(),
                j.at("reasoning").get<std::string>(),
                j.at("iteration_born").get<int>()};
}

json verification_to_json(const VerificationOutcome& v) {
  json j{{"verification_question", v.verification_question},
         {"verified_answer", v.verified_answer},
         {"verdict", to_string(v.verdict)},
         {"method", to_string(v.method)}};
  j["judge_raw"] = v.judge_raw ? json(*v.judge_raw) : json(nullptr);
  return j;
}

VerificationOutcome verification_from_json(const json& j) {
  VerificationOutcome v;
  v.verification_question = j.at("verification_question").get<std::string>();
  v.verified_answer = j.at("verified_answer").get<std::string>();
  std::string verdict = j.at("verdict").get<std::string>();
  if (verdict == "LikelyCorrect") v.verdict = Verdict::LikelyCorrect;
  else if (verdict == "LikelyIncorrect") v.verdict = Verdict::LikelyIncorrect;
  else v.verdict = Verdict::Inconclusive;
  v.method = j.at("method").get<std::string>() == "MatchBased"
                 ? VerifyMethod::MatchBased
                 : VerifyMethod::PropositionBased;
  if (!j.at("judge_raw").is_null()) v.judge_raw = j["judge_raw"].get<std::string>();
  return v;
}

json exchange_to_json(const BackendExchange& ex) {
  return json{{"prompt", ex.prompt},
              {"completion", ex.completion},
              {"prompt_tokens", ex.prompt_tokens},
              {"completion_tokens", ex.completion_tokens},
              {"latency_ms", ex.latency_ms},
              {"provider", ex.provider},
              {"cache_hit", ex.cache_hit},
              {"iteration", ex.iteration}};
}

BackendExchange exchange_from_json(const json& j) {
  BackendExchange ex;
  ex.prompt = j.at("prompt").get<std::string>();
  ex.completion = j.at("completion").get<std::string>();
  ex.prompt_tokens = j.at("prompt_tokens").get<std::int64_t>();
  ex.completion_tokens = j.at("completion_tokens").get<std::int64_t>();
  ex.latency_ms = j.at("latency_ms").get<std::int64_t>();
  ex.provider = j.at("provider").get<std::string>();
  ex.cache_hit = j.at("cache_hit").get<bool>();
  ex.iteration = j.value("iteration", 0);
  return ex;
}

}  // namespace

std::string trace_to_json_line(const IterationTrace& trace) {
  json j;
  j["question_id"] = trace.question_id;
  j["key_condition"] = trace.key_condition
                           ? key_condition_to_json(*trace.key_condition)
                           : json(nullptr);
  j["answers"] = json::array();
  for (const auto& a : trace.answers) j["answers"].push_back(answer_to_json(a));
  j["verifications"] = json::array();
  for (const auto& v : trace.verifications)
    j["verifications"].push_back(verification_to_json(v));
  j["incorrect_set"] = trace.incorrect_set;
  j["final_answer"] = trace.final_answer;
  j["stop_reason"] = to_string(trace.stop_reason);
  j["exchanges"] = json::array();
  for (const auto& ex : trace.exchanges) j["exchanges"].push_back(exchange_to_json(ex));
  j["error"] = trace.error;
  return j.dump();
}

IterationTrace trace_from_json_line(const std::string& line) {
  try {
    json j = json::parse(line);
    IterationTrace trace;
    trace.question_id = j.at("question_id").get<std::string>();
    if (!j.at("key_condition").is_null())
      trace.key_condition = key_condition_from_json(j["key_condition"]);
    for (const auto& a : j.at("answers")) trace.answers.push_back(answer_from_json(a));
    for (const auto& v : j.at("verifications"))
      trace.verifications.push_back(verification_from_json(v));
    trace.incorrect_set = j.at("incorrect_set").get<std::vector<std::string>>();
    trace.final_answer = j.at("final_answer").get<std::string>();
    trace.stop_reason = stop_reason_from_string(j.at("stop_reason").get<std::string>());
    for (const auto& ex : j.at("exchanges"))
      trace.exchanges.push_back(exchange_from_json(ex));
    trace.error = j.value("error", "");
    return trace;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedLine, e.what());
  }
}

void write_traces_jsonl(const std::string& path,
                        const std::vector<IterationTrace>& traces) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::NotFound, "trace file not writable: " + path);
  for (const auto& trace : traces) file << trace_to_json_line(trace) << '\n';
}

std::vector<IterationTrace> read_traces_jsonl(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::NotFound, "trace file not readable: " + path);
  std::vector<IterationTrace> traces;
  std::string line;
  while (std::getline(file, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    traces.push_back(trace_from_json_line(line));
  }
  return traces;
}

}  // namespace proco
