#pragma once

#include <string>

#include "proco/domain.hpp"

namespace proco {

/// The question text with the key-condition span replaced by the mask token.
/// Only the keyed occurrence is replaced; context sentences and the query are
/// joined with single spaces.
std::string build_mask_question(const Question& question, const KeyCondition& key);

/// mask_question + " Suppose the answer is <prev>. What is the value of
/// unknown variable X?" — the exact surface sent for verification.
std::string build_verification_question(const std::string& mask_question,
                                         const std::string& previous_answer);

inline constexpr const char* kMaskToken = "X";

}  // namespace proco
