#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "proco/domain.hpp"
#include "proco/prompts.hpp"
#include "proco/providers.hpp"

namespace proco {

struct SimilarityReport {
  std::vector<std::pair<int, double>> scores;  // (sentence_index, cosine)
  int chosen_index = 0;                        // attains the maximum cosine
  bool tie_broken = false;                     // ties resolve to the lowest index
};

/// Arithmetic path: embeds context sentences and the query, picks the
/// highest-cosine sentence, and takes a numeral from it (uniformly at random
/// when several are present, seeded). When the chosen sentence holds no
/// numeral, the next-highest sentence containing one is used instead.
std::pair<KeyCondition, SimilarityReport> identify_similarity(
    const Question& question, EmbeddingProvider& embedder, std::uint64_t rng_seed);

/// Open-domain / commonsense path: asks the model for the most relevant
/// entity, parses the reply (last quoted span, else the final line's trailing
/// phrase after "is"/":", else the whole final line), and anchors it to its
/// first case-insensitive occurrence in the question.
KeyCondition identify_zeroshot(const Question& question, CompletionProvider& llm,
                               const PromptCatalog& catalog,
                               const CompletionParams& params,
                               BackendExchange* exchange_out = nullptr);

}  // namespace proco
