#include <benchmark/benchmark.h>

#include "proco/engine.hpp"
#include "proco/keycond.hpp"
#include "proco/masking.hpp"

namespace {

using namespace proco;

std::vector<ScriptedFixture> walkthrough_fixtures() {
  return {
      {MatchMode::Substring, "The answer (arabic numerals) is:",
       {"19", "2", "23", "5"}, ""},
      {MatchMode::Substring, "Jean?\nA: Let's think step by step.",
       {"Jean's current age would be 19."}, ""},
      {MatchMode::Substring, "Suppose the answer is 19", {"Then X = 2."}, ""},
      {MatchMode::Substring, "Suppose the answer is 23", {"Then X is 5."}, ""},
      {MatchMode::Substring, "the answer is likely not in",
       {"Recomputing gives 23."}, ""},
  };
}

void BM_RunProcoScripted(benchmark::State& state) {
  Question question = compose_question(
      {"Jean is two years older than Mark.",
       "Two years ago Mark was 5 years older than half Jan's age."},
      "If Jan is 30 how old is Jean?", TaskType::Arithmetic);
  TrigramEmbedder embedder;
  Engine engine(EngineConfig{});
  for (auto _ : state) {
    ScriptedProvider llm(walkthrough_fixtures());
    benchmark::DoNotOptimize(
        engine.run_proco("bench", question, llm, embedder));
  }
}
BENCHMARK(BM_RunProcoScripted);

void BM_BuildMaskQuestion(benchmark::State& state) {
  Question question = compose_question(
      {"Jean is two years older than Mark.",
       "Two years ago Mark was 5 years older than half Jan's age."},
      "If Jan is 30 how old is Jean?", TaskType::Arithmetic);
  TrigramEmbedder embedder;
  auto [key, report] = identify_similarity(question, embedder, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_mask_question(question, key));
  }
}
BENCHMARK(BM_BuildMaskQuestion);

}  // namespace
