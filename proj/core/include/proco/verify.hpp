#pragma once

#include <string>

#include "proco/domain.hpp"
#include "proco/prompts.hpp"
#include "proco/providers.hpp"

namespace proco {

/// Arithmetic tasks: the final numeral in the verified answer must equal the
/// key-condition value within tolerance. No extractable numeral yields
/// Inconclusive.
VerificationOutcome verify_match(const KeyCondition& key,
                                 const std::string& verification_question,
                                 const std::string& verified_answer_text,
                                 double tolerance);

/// Open-domain / commonsense tasks: asks the model whether the recovered
/// value and the key condition are interchangeable answers. The judgment's
/// first sentence decides: a negation word (not / incorrect / false) wins
/// over an affirmation word (correct / yes / true); neither is Inconclusive.
VerificationOutcome verify_proposition(const std::string& verification_question,
                                       const KeyCondition& key,
                                       const std::string& verified_answer,
                                       CompletionProvider& llm,
                                       const PromptCatalog& catalog,
                                       const CompletionParams& params,
                                       BackendExchange* exchange_out = nullptr);

/// Total mapping from judgment text to a verdict; exposed for tests.
Verdict parse_judgment(const std::string& completion);

}  // namespace proco
