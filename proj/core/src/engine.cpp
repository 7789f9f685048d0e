#include "proco/engine.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "proco/errors.hpp"
#include "proco/masking.hpp"
#include "proco/textproc.hpp"
#include "proco/verify.hpp"

namespace proco {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_outer_punct(const std::string& s) {
  std::size_t b = 0, e = s.size();
  auto strip = [](char c) {
    return std::ispunct(static_cast<unsigned char>(c)) ||
           std::isspace(static_cast<unsigned char>(c));
  };
  while (b < e && strip(s[b])) ++b;
  while (e > b && strip(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string first_nonempty_line(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (!t.empty()) return t;
  }
  return "";
}

bool whole_word_at(const std::string& text, std::size_t pos) {
  bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
  bool right_ok = pos + 1 >= text.size() ||
                  !std::isalnum(static_cast<unsigned char>(text[pos + 1]));
  return left_ok && right_ok;
}

}  // namespace

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::ProCo: return "proco";
    case Strategy::CoT: return "cot";
    case Strategy::SelfCorrect: return "self_correct";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "proco") return Strategy::ProCo;
  if (s == "cot") return Strategy::CoT;
  if (s == "self_correct" || s == "self-correct") return Strategy::SelfCorrect;
  throw Error(ErrorCode::ParseFailure, "unknown strategy: " + s);
}

std::vector<std::string> FixtureRetriever::retrieve(const std::string& query,
                                                    int max_documents) {
  (void)query;
  std::filesystem::path path =
      std::filesystem::path(directory_) / (question_id_ + ".txt");
  std::ifstream file(path);
  if (!file) return {};
  std::stringstream buffer;
  buffer << file.rdbuf();
  std::vector<std::string> docs = split_documents(buffer.str());
  if (static_cast<int>(docs.size()) > max_documents)
    docs.resize(static_cast<std::size_t>(max_documents));
  return docs;
}

std::string format_incorrect_set(const std::vector<std::string>& surfaces) {
  std::string out = "{";
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    if (i) out += ", ";
    out += surfaces[i];
  }
  out += "}";
  return out;
}

std::vector<std::string> split_documents(const std::string& text) {
  std::vector<std::string> docs;
  std::string current;
  std::istringstream in(text);
  std::string line;
  auto flush = [&]() {
    std::string doc = trim(current);
    if (!doc.empty()) docs.push_back(std::move(doc));
    current.clear();
  };
  while (std::getline(in, line)) {
    if (trim(line) == Engine::kDocumentDelimiter) {
      flush();
    } else {
      current += line;
      current += '\n';
    }
  }
  flush();
  return docs;
}

Engine::Engine(EngineConfig config, PromptCatalog catalog, std::string model_name)
    : config_(config), catalog_(std::move(catalog)), model_name_(std::move(model_name)) {
  config_.validate();
}

CompletionParams Engine::completion_params() const {
  CompletionParams params;
  params.temperature = config_.temperature;
  params.model_name = model_name_;
  params.seed_hint = static_cast<std::int64_t>(config_.rng_seed);
  return params;
}

BackendExchange Engine::call(CompletionProvider& llm, const std::string& prompt,
                             int iteration, std::vector<BackendExchange>& log) const {
  BackendExchange ex = llm.complete(prompt, completion_params());
  ex.iteration = iteration;
  log.push_back(ex);
  return ex;
}

ExtractionMode Engine::resolve_mode(const Question& question,
                                    ExtractionMode mode) const {
  if (mode != ExtractionMode::Auto) return mode;
  if (question.is_multiple_choice()) return ExtractionMode::Letter;
  if (question.task_type == TaskType::Arithmetic) return ExtractionMode::Numeral;
  return ExtractionMode::Entity;
}

std::string Engine::parse_extraction(const std::string& completion,
                                     ExtractionMode mode) {
  switch (mode) {
    case ExtractionMode::Numeral: {
      auto numerals = extract_numeric_values(completion);
      if (numerals.empty())
        throw Error(ErrorCode::ExtractionFailure,
                    "no numeral in: " + completion.substr(0, 96));
      return numerals.back().surface;
    }
    case ExtractionMode::Letter: {
      // Parenthesized options win; otherwise a standalone uppercase letter.
      std::optional<char> letter;
      for (std::size_t i = 0; i + 2 < completion.size(); ++i) {
        if (completion[i] == '(' && completion[i + 2] == ')') {
          char c = static_cast<char>(std::toupper(
              static_cast<unsigned char>(completion[i + 1])));
          if (c >= 'A' && c <= 'E') letter = c;
        }
      }
      if (!letter) {
        for (std::size_t i = 0; i < completion.size(); ++i) {
          char c = completion[i];
          if (c >= 'A' && c <= 'E' && whole_word_at(completion, i)) letter = c;
        }
      }
      if (!letter)
        throw Error(ErrorCode::ExtractionFailure,
                    "no option letter in: " + completion.substr(0, 96));
      return std::string(1, *letter);
    }
    case ExtractionMode::Entity: {
      std::string line = strip_outer_punct(first_nonempty_line(completion));
      if (line.empty())
        throw Error(ErrorCode::ExtractionFailure, "empty entity completion");
      return line;
    }
    case ExtractionMode::Auto:
      break;
  }
  throw Error(ErrorCode::ExtractionFailure, "unresolved extraction mode");
}

Answer Engine::extract_final_answer(const Question& question,
                                    const std::string& reasoning,
                                    CompletionProvider& llm,
                                    std::vector<BackendExchange>& log,
                                    ExtractionMode mode, int iteration) const {
  if (trim(reasoning).empty())
    throw Error(ErrorCode::ExtractionFailure, "empty reasoning path");

  ExtractionMode resolved = resolve_mode(question, mode);
  TemplateId prompt_id = resolved == ExtractionMode::Entity
                             ? TemplateId::EntityExtract
                             : TemplateId::NumericExtract;
  std::string prompt = catalog_.render(
      prompt_id, {{"question", question.raw_text}, {"reasoning", reasoning}});
  BackendExchange ex = call(llm, prompt, iteration, log);

  Answer answer;
  answer.surface = parse_extraction(ex.completion, resolved);
  answer.reasoning = reasoning;
  answer.iteration_born = iteration;
  return answer;
}

InitializerOutput Engine::generate_initial_answer(
    const Question& question, CompletionProvider& llm, Retriever* retriever,
    std::vector<BackendExchange>& log) const {
  InitializerOutput out;

  InitializerKind kind = config_.initializer;
  if (kind == InitializerKind::Retrieval) {
    if (!retriever)
      throw Error(ErrorCode::RetrieverUnavailable,
                  "retrieval initializer configured without a retriever");
    out.documents = retriever->retrieve(question.raw_text, config_.documents_m);
    if (out.documents.empty()) kind = InitializerKind::CoT;  // degenerate retrieval
  }

  if (kind == InitializerKind::GenRead) {
    std::string doc_prompt = catalog_.render(
        TemplateId::GenReadDocs,
        {{"num_documents", std::to_string(config_.documents_m)},
         {"question", question.raw_text}});
    BackendExchange doc_ex = call(llm, doc_prompt, 0, log);
    out.documents = split_documents(doc_ex.completion);
    if (static_cast<int>(out.documents.size()) > config_.documents_m)
      out.documents.resize(static_cast<std::size_t>(config_.documents_m));
  }

  std::string reason_prompt;
  if (out.documents.empty()) {
    reason_prompt = catalog_.render(TemplateId::InitialReasoning,
                                    {{"question", question.raw_text}});
  } else {
    std::string joined;
    for (std::size_t i = 0; i < out.documents.size(); ++i) {
      if (i) joined += "\n---\n";
      joined += out.documents[i];
    }
    reason_prompt = catalog_.render(
        TemplateId::DocAnswer,
        {{"documents", joined}, {"question", question.raw_text}});
  }

  BackendExchange reason_ex = call(llm, reason_prompt, 0, log);
  out.reasoning = reason_ex.completion;
  out.answer = extract_final_answer(question, out.reasoning, llm, log,
                                    ExtractionMode::Auto, 0);
  return out;
}

IterationTrace Engine::run_proco(const std::string& question_id,
                                 const Question& question, CompletionProvider& llm,
                                 EmbeddingProvider& embedder,
                                 Retriever* retriever) const {
  IterationTrace trace;
  trace.question_id = question_id;

  try {
    // Key condition is fixed before the loop and reused by every iteration.
    std::optional<KeyCondition> key;
    try {
      if (question.task_type == TaskType::Arithmetic) {
        key = identify_similarity(question, embedder, config_.rng_seed).first;
      } else {
        BackendExchange kc_ex;
        key = identify_zeroshot(question, llm, catalog_, completion_params(), &kc_ex);
        kc_ex.iteration = 0;
        trace.exchanges.push_back(kc_ex);
      }
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::NoNumericCondition:
        case ErrorCode::ParseFailure:
        case ErrorCode::KeyConditionNotInQuestion:
          key.reset();
          break;
        default:
          throw;
      }
    }
    trace.key_condition = key;

    InitializerOutput init =
        generate_initial_answer(question, llm, retriever, trace.exchanges);
    trace.answers.push_back(init.answer);

    if (!key) {
      trace.final_answer = init.answer.surface;
      trace.stop_reason = StopReason::NoKeyCondition;
      return trace;
    }

    const std::string mask_question = build_mask_question(question, *key);
    const bool match_based = question.task_type == TaskType::Arithmetic;

    for (int t = 1; t <= config_.max_iterations; ++t) {
      const std::string previous = trace.answers.back().surface;
      std::string vq = build_verification_question(mask_question, previous);

      // Solve the verification question: reasoning pass, then extraction.
      std::string solve_prompt =
          catalog_.render(TemplateId::InitialReasoning, {{"question", vq}});
      BackendExchange solve_ex = call(llm, solve_prompt, t, trace.exchanges);

      Question vq_question;
      vq_question.raw_text = vq;
      vq_question.query_sentence = vq;
      vq_question.task_type = question.task_type;
      std::string verified_answer;
      try {
        Answer extracted = extract_final_answer(
            vq_question, solve_ex.completion, llm, trace.exchanges,
            match_based ? ExtractionMode::Numeral : ExtractionMode::Entity, t);
        verified_answer = extracted.surface;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ExtractionFailure) throw;
        verified_answer = solve_ex.completion;  // judged as-is
      }

      VerificationOutcome outcome;
      if (match_based) {
        outcome = verify_match(*key, vq, verified_answer, config_.numeric_tolerance);
      } else {
        BackendExchange judge_ex;
        outcome = verify_proposition(vq, *key, verified_answer, llm, catalog_,
                                     completion_params(), &judge_ex);
        judge_ex.iteration = t;
        trace.exchanges.push_back(judge_ex);
      }
      trace.verifications.push_back(outcome);

      if (outcome.verdict == Verdict::LikelyCorrect) {
        trace.final_answer = previous;
        trace.stop_reason = StopReason::VerifiedCorrect;
        return trace;
      }

      // Failed or inconclusive verification: remember the answer and correct.
      if (std::find(trace.incorrect_set.begin(), trace.incorrect_set.end(),
                    previous) == trace.incorrect_set.end())
        trace.incorrect_set.push_back(previous);

      std::string correction_prompt = catalog_.render(
          TemplateId::Correction,
          {{"question", question.raw_text},
           {"incorrect_set", format_incorrect_set(trace.incorrect_set)}});
      BackendExchange corr_ex = call(llm, correction_prompt, t, trace.exchanges);

      Answer corrected = extract_final_answer(question, corr_ex.completion, llm,
                                              trace.exchanges,
                                              ExtractionMode::Auto, t);
      trace.answers.push_back(corrected);

      if (normalize_answer(corrected.surface) == normalize_answer(previous)) {
        trace.final_answer = corrected.surface;
        trace.stop_reason = StopReason::AnswerRepeated;
        return trace;
      }
    }

    trace.final_answer = trace.answers.back().surface;
    trace.stop_reason = StopReason::MaxIterations;
  } catch (const std::exception& e) {
    trace.error = e.what();
    if (!trace.answers.empty()) trace.final_answer = trace.answers.back().surface;
  }
  return trace;
}

IterationTrace Engine::run_cot(const std::string& question_id,
                               const Question& question, CompletionProvider& llm,
                               Retriever* retriever) const {
  IterationTrace trace;
  trace.question_id = question_id;
  try {
    InitializerOutput init =
        generate_initial_answer(question, llm, retriever, trace.exchanges);
    trace.answers.push_back(init.answer);
    trace.final_answer = init.answer.surface;
    trace.stop_reason = StopReason::MaxIterations;
  } catch (const std::exception& e) {
    trace.error = e.what();
  }
  return trace;
}

IterationTrace Engine::run_self_correct(const std::string& question_id,
                                        const Question& question,
                                        CompletionProvider& llm) const {
  IterationTrace trace;
  trace.question_id = question_id;
  try {
    InitializerOutput init =
        generate_initial_answer(question, llm, nullptr, trace.exchanges);
    trace.answers.push_back(init.answer);

    for (int t = 1; t <= config_.max_iterations; ++t) {
      const std::string previous = trace.answers.back().surface;
      std::string critique_prompt = catalog_.render(
          TemplateId::SelfCorrectCritique,
          {{"question", question.raw_text}, {"answer", previous}});
      BackendExchange critique_ex = call(llm, critique_prompt, t, trace.exchanges);

      std::string refine_prompt =
          catalog_.render(TemplateId::SelfCorrectRefine,
                          {{"question", question.raw_text},
                           {"answer", previous},
                           {"critique", critique_ex.completion}});
      BackendExchange refine_ex = call(llm, refine_prompt, t, trace.exchanges);

      Answer refined = extract_final_answer(question, refine_ex.completion, llm,
                                            trace.exchanges, ExtractionMode::Auto, t);
      trace.answers.push_back(refined);

      if (normalize_answer(refined.surface) == normalize_answer(previous)) {
        trace.final_answer = refined.surface;
        trace.stop_reason = StopReason::AnswerRepeated;
        return trace;
      }
    }
    trace.final_answer = trace.answers.back().surface;
    trace.stop_reason = StopReason::MaxIterations;
  } catch (const std::exception& e) {
    trace.error = e.what();
    if (!trace.answers.empty()) trace.final_answer = trace.answers.back().surface;
  }
  return trace;
}

IterationTrace Engine::run_strategy(Strategy strategy, const std::string& question_id,
                                    const Question& question,
                                    CompletionProvider& llm,
                                    EmbeddingProvider& embedder,
                                    Retriever* retriever) const {
  switch (strategy) {
    case Strategy::ProCo:
      return run_proco(question_id, question, llm, embedder, retriever);
    case Strategy::CoT:
      return run_cot(question_id, question, llm, retriever);
    case Strategy::SelfCorrect:
      return run_self_correct(question_id, question, llm);
  }
  throw Error(ErrorCode::ParseFailure, "unknown strategy");
}

}  // namespace proco
