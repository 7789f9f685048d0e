#include <benchmark/benchmark.h>

#include "proco/providers.hpp"
#include "proco/textproc.hpp"

namespace {

const std::string kParagraph =
    "Jean is two years older than Mark. Two years ago Mark was 5 years older "
    "than half Jan's age. A man spends Rs. 3500 per month and saves 12 1/2% of "
    "his income, e.g. on rent. In a class of 50 students, 28 participate in "
    "MATHCOUNTS, 21 participate in science club, and 6 students participate in "
    "neither. If Jan is 30 how old is Jean?";

void BM_SegmentSentences(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(proco::segment_sentences(kParagraph));
  }
}
BENCHMARK(BM_SegmentSentences);

void BM_ExtractNumerics(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(proco::extract_numeric_values(kParagraph));
  }
}
BENCHMARK(BM_ExtractNumerics);

void BM_NormalizeAnswer(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        proco::normalize_answer("The Monroe County High-School, in Alabama."));
  }
}
BENCHMARK(BM_NormalizeAnswer);

void BM_TrigramEmbed(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(proco::TrigramEmbedder::embed_one(kParagraph));
  }
}
BENCHMARK(BM_TrigramEmbed);

}  // namespace
