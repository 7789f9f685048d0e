#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "proco/engine.hpp"
#include "proco/errors.hpp"
#include "proco/serialization.hpp"

using namespace proco;
namespace fs = std::filesystem;

namespace {

Question jean_mark() {
  return compose_question(
      {"Jean is two years older than Mark.",
       "Two years ago Mark was 5 years older than half Jan's age."},
      "If Jan is 30 how old is Jean?", TaskType::Arithmetic);
}

// Extraction fixtures go first: extraction prompts embed the solve/correction
// surfaces, so order decides which record answers them.
std::vector<ScriptedFixture> jean_mark_fixtures() {
  return {
      {MatchMode::Substring,
       "The answer (arabic numerals) is:",
       {"19", "2", "23", "5"},
       ""},
      {MatchMode::Substring,
       "Jean?\nA: Let's think step by step.",
       {"Two years ago, half of Jan's age was 30/2 - 2 = 13, no, 10. Mark was "
        "then 15 and Jean 17. Jean's current age would be 19."},
       ""},
      {MatchMode::Substring,
       "Suppose the answer is 19",
       {"Half of Jan's age two years ago was 14. If Jean is 19 now, Jean was 17 "
        "and Mark 15 two years ago. Then X = 15 - 14 + 1 = 2. Answer: X = 2."},
       ""},
      {MatchMode::Substring,
       "Suppose the answer is 23",
       {"Mark is X + 16 and Jean is X + 18. With Jean at 23, X + 18 = 23, so X "
        "is 5."},
       ""},
      {MatchMode::Substring,
       "the answer is likely not in",
       {"Two years ago Jan was 28 and half of that is 14. Mark was 14 + 5 = 19 "
        "then, Jean was 21, so Jean is 23 today."},
       ""},
  };
}

int count_verification_exchanges(const IterationTrace& trace) {
  int n = 0;
  for (const auto& ex : trace.exchanges) {
    if (ex.prompt.find("Suppose the answer is") != std::string::npos &&
        ex.prompt.find("The answer") == std::string::npos &&
        ex.prompt.find("Determine the correctness") == std::string::npos)
      ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("arithmetic walkthrough: verify, correct, verify, accept") {
  ScriptedProvider llm(jean_mark_fixtures());
  TrigramEmbedder embedder;
  Engine engine(EngineConfig{});

  IterationTrace trace = engine.run_proco("gsm-1", jean_mark(), llm, embedder);

  CHECK(trace.error.empty());
  REQUIRE(trace.key_condition.has_value());
  CHECK(trace.key_condition->condition.surface == "5");
  CHECK(trace.key_condition->condition.sentence_index == 2);

  REQUIRE(trace.answers.size() == 2);
  CHECK(trace.answers[0].surface == "19");
  CHECK(trace.answers[1].surface == "23");

  REQUIRE(trace.verifications.size() == 2);
  CHECK(trace.verifications[0].verified_answer == "2");
  CHECK(trace.verifications[0].verdict == Verdict::LikelyIncorrect);
  CHECK(trace.verifications[0].method == VerifyMethod::MatchBased);
  CHECK(trace.verifications[1].verified_answer == "5");
  CHECK(trace.verifications[1].verdict == Verdict::LikelyCorrect);

  CHECK(trace.verifications[0].verification_question ==
        "Jean is two years older than Mark. Two years ago Mark was X years older "
        "than half Jan's age. If Jan is 30 how old is Jean? Suppose the answer "
        "is 19. What is the value of unknown variable X?");

  CHECK(trace.incorrect_set == std::vector<std::string>{"19"});
  CHECK(trace.final_answer == "23");
  CHECK(trace.stop_reason == StopReason::VerifiedCorrect);

  // Accounting: initializer + extraction, then 4 calls in the corrected
  // iteration and 2 in the accepting one.
  CHECK(trace.exchanges.size() == 8);
  CHECK(static_cast<int>(trace.exchanges.size()) <=
        2 + 4 * engine.config().max_iterations);
}

TEST_CASE("scripted runs are pure functions of question and fixtures") {
  TrigramEmbedder embedder;
  Engine engine(EngineConfig{});
  ScriptedProvider llm_a(jean_mark_fixtures());
  ScriptedProvider llm_b(jean_mark_fixtures());
  IterationTrace a = engine.run_proco("gsm-1", jean_mark(), llm_a, embedder);
  IterationTrace b = engine.run_proco("gsm-1", jean_mark(), llm_b, embedder);
  CHECK(trace_to_json_line(a) == trace_to_json_line(b));
}

TEST_CASE("first-pass verification accepts the initial answer") {
  ScriptedProvider llm({
      {MatchMode::Substring, "The answer (arabic numerals) is:", {"19", "5"}, ""},
      {MatchMode::Substring, "Jean?\nA: Let's think step by step.",
       {"Jean's current age would be 19."}, ""},
      {MatchMode::Substring, "Suppose the answer is 19", {"Clearly X is 5."}, ""},
  });
  TrigramEmbedder embedder;
  Engine engine(EngineConfig{});
  IterationTrace trace = engine.run_proco("gsm-2", jean_mark(), llm, embedder);

  CHECK(trace.final_answer == "19");
  CHECK(trace.stop_reason == StopReason::VerifiedCorrect);
  CHECK(trace.incorrect_set.empty());
  REQUIRE(trace.verifications.size() == 1);
  CHECK(count_verification_exchanges(trace) == 1);
}

TEST_CASE("repeated corrections stop the loop") {
  ScriptedProvider llm({
      {MatchMode::Substring, "The answer (arabic numerals) is:",
       {"19", "2", "19"}, ""},
      {MatchMode::Substring, "Jean?\nA: Let's think step by step.",
       {"Jean's current age would be 19."}, ""},
      {MatchMode::Substring, "Suppose the answer is", {"I find X = 2."}, ""},
      {MatchMode::Substring, "the answer is likely not in",
       {"Still, Jean must be 19."}, ""},
  });
  TrigramEmbedder embedder;
  Engine engine(EngineConfig{});
  IterationTrace trace = engine.run_proco("gsm-3", jean_mark(), llm, embedder);

  CHECK(trace.stop_reason == StopReason::AnswerRepeated);
  CHECK(trace.final_answer == "19");
  REQUIRE(trace.answers.size() == 2);
  CHECK(normalize_answer(trace.answers[1].surface) ==
        normalize_answer(trace.answers[0].surface));
  CHECK(trace.incorrect_set.size() == trace.verifications.size());
}

TEST_CASE("the iteration cap is enforced") {
  ScriptedProvider llm({
      {MatchMode::Substring, "The answer (arabic numerals) is:",
       {"19", "2", "21", "2", "22", "2", "24"}, ""},
      {MatchMode::Substring, "Jean?\nA: Let's think step by step.",
       {"Jean's current age would be 19."}, ""},
      {MatchMode::Substring, "Suppose the answer is", {"I find X = 2."}, ""},
      {MatchMode::Substring, "the answer is likely not in",
       {"Try 21.", "Try 22.", "Try 24."}, ""},
  });
  TrigramEmbedder embedder;
  EngineConfig config;
  config.max_iterations = 3;
  Engine engine(config);
  IterationTrace trace = engine.run_proco("gsm-4", jean_mark(), llm, embedder);

  CHECK(trace.stop_reason == StopReason::MaxIterations);
  CHECK(trace.final_answer == "24");
  CHECK(trace.answers.size() == 4);  // initial + T corrections
  CHECK(trace.verifications.size() == 3);
  CHECK(trace.incorrect_set == std::vector<std::string>{"19", "21", "22"});
  CHECK(count_verification_exchanges(trace) == 3);
  CHECK(static_cast<int>(trace.exchanges.size()) <= 2 + 4 * config.max_iterations);
}

TEST_CASE("a question with no numeric condition keeps the initial answer") {
  Question q = compose_question({"All numbers are written as words here."},
                                "How many words?", TaskType::Arithmetic);
  ScriptedProvider llm({
      {MatchMode::Substring, "The answer (arabic numerals) is:", {"7"}, ""},
      {MatchMode::Substring, "Let's think step by step.", {"I count 7 words."}, ""},
  });
  TrigramEmbedder embedder;
  Engine engine(EngineConfig{});
  IterationTrace trace = engine.run_proco("nokc-1", q, llm, embedder);

  CHECK_FALSE(trace.key_condition.has_value());
  CHECK(trace.stop_reason == StopReason::NoKeyCondition);
  CHECK(trace.final_answer == "7");
  CHECK(trace.verifications.empty());
  CHECK(trace.incorrect_set.empty());
}

TEST_CASE("open-domain walkthrough with proposition-based verification") {
  Question q = compose_question({}, "Who plays Skylar on Lab Rats: Elite Force?",
                                TaskType::OpenDomain);
  // The judge prompt embeds the verification question, so the judge fixture
  // must precede the solve fixture.
  ScriptedProvider llm({
      {MatchMode::Substring, "Determine the correctness of the proposition",
       {"The proposition is correct, Skylar Storm is the character's full name."},
       ""},
      {MatchMode::Substring, "The answer is:", {"Paris Berelc", "Skylar Storm"}, ""},
      {MatchMode::Substring, "identify a set of entities",
       {"The most relevant entity is \"Skylar\"."}, ""},
      {MatchMode::Substring, "Elite Force?\nA: Let's think step by step.",
       {"The actress who plays the character is Paris Berelc."}, ""},
      {MatchMode::Substring, "Suppose the answer is Paris Berelc",
       {"Paris Berelc portrays the superhero Skylar Storm."}, ""},
  });
  TrigramEmbedder embedder;
  Engine engine(EngineConfig{});
  IterationTrace trace = engine.run_proco("nq-skylar", q, llm, embedder);

  REQUIRE(trace.key_condition.has_value());
  CHECK(trace.key_condition->condition.surface == "Skylar");
  CHECK(trace.key_condition->selection_method == SelectionMethod::ZeroShot);

  REQUIRE(trace.verifications.size() == 1);
  const VerificationOutcome& v = trace.verifications[0];
  CHECK(v.verification_question ==
        "Who plays X on Lab Rats: Elite Force? Suppose the answer is Paris "
        "Berelc. What is the value of unknown variable X?");
  CHECK(v.method == VerifyMethod::PropositionBased);
  CHECK(v.verdict == Verdict::LikelyCorrect);
  CHECK(v.verified_answer == "Skylar Storm");
  REQUIRE(v.judge_raw.has_value());

  CHECK(trace.final_answer == "Paris Berelc");
  CHECK(trace.stop_reason == StopReason::VerifiedCorrect);
  CHECK(static_cast<int>(trace.exchanges.size()) <=
        2 + 5 * engine.config().max_iterations);
}

TEST_CASE("run_cot is a single initializer pass") {
  ScriptedProvider llm({
      {MatchMode::Substring, "The answer (arabic numerals) is:", {"19"}, ""},
      {MatchMode::Substring, "Let's think step by step.",
       {"Jean's current age would be 19."}, ""},
  });
  Engine engine(EngineConfig{});
  IterationTrace trace = engine.run_cot("cot-1", jean_mark(), llm);

  CHECK(trace.final_answer == "19");
  CHECK(trace.stop_reason == StopReason::MaxIterations);
  CHECK(trace.verifications.empty());
  CHECK(trace.answers.size() == 1);
  CHECK(trace.exchanges.size() == 2);
}

TEST_CASE("self-correct critiques then refines until repetition") {
  ScriptedProvider llm({
      {MatchMode::Substring, "The answer (arabic numerals) is:",
       {"19", "21", "21"}, ""},
      {MatchMode::Substring, "Review previous answer and find mistakes.",
       {"The half-age step looks wrong."}, ""},
      {MatchMode::Substring, "Based on the critique",
       {"Recomputing, Jean should be 21."}, ""},
      {MatchMode::Substring, "Jean?\nA: Let's think step by step.",
       {"Jean's current age would be 19."}, ""},
  });
  Engine engine(EngineConfig{});
  IterationTrace trace = engine.run_self_correct("sc-1", jean_mark(), llm);

  CHECK(trace.final_answer == "21");
  CHECK(trace.stop_reason == StopReason::AnswerRepeated);
  REQUIRE(trace.answers.size() == 3);  // 19 -> 21 -> 21
  CHECK(trace.answers[1].surface == "21");
  CHECK(trace.verifications.empty());
}

TEST_CASE("self-correct with an immediately identical refinement stops at t=1") {
  ScriptedProvider llm({
      {MatchMode::Substring, "The answer (arabic numerals) is:", {"19", "19"}, ""},
      {MatchMode::Substring, "Review previous answer and find mistakes.",
       {"Looks fine."}, ""},
      {MatchMode::Substring, "Based on the critique", {"Still 19."}, ""},
      {MatchMode::Substring, "Jean?\nA: Let's think step by step.",
       {"Jean's current age would be 19."}, ""},
  });
  Engine engine(EngineConfig{});
  IterationTrace trace = engine.run_self_correct("sc-2", jean_mark(), llm);
  CHECK(trace.answers.size() == 2);
  CHECK(trace.stop_reason == StopReason::AnswerRepeated);
}

TEST_CASE("self-correct runs all rounds when answers keep changing") {
  ScriptedProvider llm({
      {MatchMode::Substring, "The answer (arabic numerals) is:",
       {"19", "20", "21", "22"}, ""},
      {MatchMode::Substring, "Review previous answer and find mistakes.",
       {"Suspicious."}, ""},
      {MatchMode::Substring, "Based on the critique", {"New attempt."}, ""},
      {MatchMode::Substring, "Jean?\nA: Let's think step by step.",
       {"Jean's current age would be 19."}, ""},
  });
  EngineConfig config;
  config.max_iterations = 3;
  Engine engine(config);
  IterationTrace trace = engine.run_self_correct("sc-3", jean_mark(), llm);
  CHECK(trace.answers.size() == 4);
  CHECK(trace.final_answer == "22");
  CHECK(trace.stop_reason == StopReason::MaxIterations);
}

TEST_CASE("extraction parses numerals, option letters, and entities") {
  CHECK(Engine::parse_extraction("The answer (arabic numerals) is: 23",
                                 ExtractionMode::Numeral) == "23");
  CHECK(Engine::parse_extraction("value 3,500 then 3937.50",
                                 ExtractionMode::Numeral) == "3937.50");
  CHECK(Engine::parse_extraction("...the correct answer is (C) Rs. 4000",
                                 ExtractionMode::Letter) == "C");
  CHECK(Engine::parse_extraction("I pick B", ExtractionMode::Letter) == "B");
  CHECK(Engine::parse_extraction("\n  Paris Berelc.\nShe is an actress.",
                                 ExtractionMode::Entity) == "Paris Berelc");
  CHECK_THROWS_WITH_AS(Engine::parse_extraction("", ExtractionMode::Numeral),
                       doctest::Contains("ExtractionFailure"), Error);
  CHECK_THROWS_WITH_AS(Engine::parse_extraction("no letter here",
                                                ExtractionMode::Letter),
                       doctest::Contains("ExtractionFailure"), Error);
}

TEST_CASE("GenRead initializer generates documents then answers from them") {
  Question q = compose_question({}, "Who wrote the treasure of the sierra madre?",
                                TaskType::OpenDomain);
  ScriptedProvider llm({
      {MatchMode::Substring, "The answer is:", {"B. Traven"}, ""},
      {MatchMode::Substring, "background documents",
       {"The novel appeared in 1927.\n---\nIts author kept his identity hidden."},
       ""},
      {MatchMode::Substring, "Refer to the passages below",
       {"The passages point to B. Traven."}, ""},
  });
  EngineConfig config;
  config.initializer = InitializerKind::GenRead;
  config.documents_m = 2;
  Engine engine(config);

  std::vector<BackendExchange> log;
  InitializerOutput out = engine.generate_initial_answer(q, llm, nullptr, log);
  CHECK(out.documents.size() == 2);
  CHECK(out.answer.surface == "B. Traven");
  CHECK(out.answer.iteration_born == 0);
  CHECK(log.size() == 3);
}

TEST_CASE("retrieval initializer reads fixture documents keyed by question id") {
  fs::path dir = fs::temp_directory_path() / "proco_retriever_fixture";
  fs::create_directories(dir);
  {
    std::ofstream file(dir / "doc-q.txt");
    file << "First document.\n---\nSecond document.\n---\nThird document.\n";
  }

  Question q = compose_question({}, "Who wrote it?", TaskType::OpenDomain);
  ScriptedProvider llm({
      {MatchMode::Substring, "The answer is:", {"B. Traven"}, ""},
      {MatchMode::Substring, "Refer to the passages below",
       {"The passages point to B. Traven."}, ""},
  });
  EngineConfig config;
  config.initializer = InitializerKind::Retrieval;
  config.documents_m = 2;
  Engine engine(config);

  FixtureRetriever retriever(dir.string(), "doc-q");
  std::vector<BackendExchange> log;
  InitializerOutput out = engine.generate_initial_answer(q, llm, &retriever, log);
  CHECK(out.documents.size() == 2);  // capped at M
  CHECK(out.answer.surface == "B. Traven");

  // Zero retrieved documents fall back to the plain reasoning path.
  ScriptedProvider cot_llm({
      {MatchMode::Substring, "The answer is:", {"B. Traven"}, ""},
      {MatchMode::Substring, "Let's think step by step.", {"It was B. Traven."}, ""},
  });
  FixtureRetriever empty_retriever(dir.string(), "missing-q");
  std::vector<BackendExchange> cot_log;
  InitializerOutput fallback =
      engine.generate_initial_answer(q, cot_llm, &empty_retriever, cot_log);
  CHECK(fallback.documents.empty());
  CHECK(fallback.answer.surface == "B. Traven");

  fs::remove_all(dir);
}

TEST_CASE("retrieval without a retriever is an error") {
  Question q = compose_question({}, "Who wrote it?", TaskType::OpenDomain);
  ScriptedProvider llm({{MatchMode::Substring, "x", {"y"}, ""}});
  EngineConfig config;
  config.initializer = InitializerKind::Retrieval;
  Engine engine(config);
  std::vector<BackendExchange> log;
  CHECK_THROWS_WITH_AS(engine.generate_initial_answer(q, llm, nullptr, log),
                       doctest::Contains("RetrieverUnavailable"), Error);
}

TEST_CASE("hard provider failures are recorded in the trace") {
  ScriptedProvider llm({{MatchMode::Exact, "never matches", {"x"}, ""}});
  TrigramEmbedder embedder;
  Engine engine(EngineConfig{});
  IterationTrace trace = engine.run_proco("broken", jean_mark(), llm, embedder);
  CHECK_FALSE(trace.error.empty());
  CHECK(trace.error.find("NoFixtureMatch") != std::string::npos);
}

TEST_CASE("the key condition is identical across all verifications of a run") {
  ScriptedProvider llm(jean_mark_fixtures());
  TrigramEmbedder embedder;
  Engine engine(EngineConfig{});
  IterationTrace trace = engine.run_proco("gsm-1", jean_mark(), llm, embedder);
  REQUIRE(trace.key_condition.has_value());
  const std::string mask_surface = trace.key_condition->condition.surface;
  for (const auto& v : trace.verifications) {
    CHECK(v.verification_question.find("Mark was X years older") !=
          std::string::npos);
    CHECK(v.verification_question.find(mask_surface + " years older") ==
          std::string::npos);
  }
}

TEST_CASE("incorrect set never contains the final answer on verified stops") {
  ScriptedProvider llm(jean_mark_fixtures());
  TrigramEmbedder embedder;
  Engine engine(EngineConfig{});
  IterationTrace trace = engine.run_proco("gsm-1", jean_mark(), llm, embedder);
  REQUIRE(trace.stop_reason == StopReason::VerifiedCorrect);
  for (const auto& rejected : trace.incorrect_set) {
    CHECK(rejected != trace.final_answer);
  }
}
