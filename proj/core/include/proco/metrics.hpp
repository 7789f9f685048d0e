#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "proco/domain.hpp"

namespace proco {

/// 1 iff the normalized prediction equals some normalized gold answer.
int exact_match(const std::string& prediction, const std::vector<std::string>& golds);

/// Token-bag F1 against each gold (multiset intersection, harmonic mean of
/// precision and recall); the best gold wins. Two empty bags score 1.
double f1_score(const std::string& prediction, const std::vector<std::string>& golds);

/// Task-appropriate correctness for one prediction: single-letter golds use
/// case-insensitive option-letter equality, numeric golds use numeric_equal
/// on the prediction's final numeral, everything else falls back to
/// normalized string equality.
bool prediction_correct(const std::string& prediction, const std::string& gold,
                        double tolerance);
bool prediction_correct(const std::string& prediction,
                        const std::vector<std::string>& golds, double tolerance);

/// Mean correctness over (prediction, gold) pairs.
double accuracy(const std::vector<std::pair<std::string, std::string>>& records,
                double tolerance);

struct TransitionMatrix {
  std::int64_t correct_to_incorrect = 0;
  std::int64_t incorrect_to_correct = 0;
  std::int64_t unchanged_correct = 0;
  std::int64_t unchanged_incorrect = 0;
  double correct_to_incorrect_fraction = 0.0;
  double incorrect_to_correct_fraction = 0.0;

  std::int64_t total() const {
    return correct_to_incorrect + incorrect_to_correct + unchanged_correct +
           unchanged_incorrect;
  }
};

/// Classifies each question by correctness before vs after correction.
/// `before` and `after` must cover identical question-id sets.
TransitionMatrix transition_analysis(
    const std::vector<std::pair<std::string, std::string>>& before,
    const std::vector<std::pair<std::string, std::string>>& after,
    const std::map<std::string, std::vector<std::string>>& golds,
    double tolerance);

}  // namespace proco
