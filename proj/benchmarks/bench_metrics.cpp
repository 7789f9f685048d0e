#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "proco/metrics.hpp"

namespace {

void BM_F1Score(benchmark::State& state) {
  std::vector<std::string> golds = {"Monroe County High School",
                                    "Monroe County High"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        proco::f1_score("the monroe county high school in alabama", golds));
  }
}
BENCHMARK(BM_F1Score);

void BM_TransitionAnalysis(benchmark::State& state) {
  std::vector<std::pair<std::string, std::string>> before, after;
  std::map<std::string, std::vector<std::string>> golds;
  for (int i = 0; i < 1000; ++i) {
    std::string qid = "q" + std::to_string(i);
    golds[qid] = {"1"};
    before.emplace_back(qid, i % 3 ? "1" : "0");
    after.emplace_back(qid, i % 5 ? "1" : "0");
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        proco::transition_analysis(before, after, golds, 1e-4));
  }
}
BENCHMARK(BM_TransitionAnalysis);

}  // namespace
