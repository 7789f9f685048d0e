#include "proco/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "proco/errors.hpp"
#include "proco/textproc.hpp"

namespace proco {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_option_letter_gold(const std::string& gold) {
  std::string t = trim(gold);
  if (t.size() != 1) return false;
  char c = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
  return c >= 'A' && c <= 'E';
}

/// Last standalone A-E letter in the prediction ((C) form preferred).
std::optional<char> extract_option_letter(const std::string& text) {
  std::optional<char> letter;
  for (std::size_t i = 0; i + 2 < text.size(); ++i) {
    if (text[i] == '(' && text[i + 2] == ')') {
      char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i + 1])));
      if (c >= 'A' && c <= 'E') letter = c;
    }
  }
  if (letter) return letter;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
    bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]));
    bool right_ok = i + 1 >= text.size() ||
                    !std::isalnum(static_cast<unsigned char>(text[i + 1]));
    if (c >= 'A' && c <= 'E' && left_ok && right_ok &&
        std::isupper(static_cast<unsigned char>(text[i])))
      letter = c;
  }
  return letter;
}

/// Full-string numeric parse (commas tolerated); nullopt when the text is
/// not a bare number.
std::optional<double> parse_full_number(const std::string& text) {
  std::string t = trim(text);
  t.erase(std::remove(t.begin(), t.end(), ','), t.end());
  if (t.empty()) return std::nullopt;
  std::size_t pos = 0;
  try {
    double v = std::stod(t, &pos);
    if (pos != t.size()) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace

int exact_match(const std::string& prediction, const std::vector<std::string>& golds) {
  std::string pred = normalize_answer(prediction);
  for (const auto& gold : golds) {
    if (pred == normalize_answer(gold)) return 1;
  }
  return 0;
}

double f1_score(const std::string& prediction, const std::vector<std::string>& golds) {
  TokenBag pred_bag = token_bag(prediction);
  double best = 0.0;
  for (const auto& gold : golds) {
    TokenBag gold_bag = token_bag(gold);
    double f1;
    if (pred_bag.empty() && gold_bag.empty()) {
      f1 = 1.0;
    } else {
      std::size_t overlap = bag_overlap(pred_bag, gold_bag);
      if (overlap == 0) {
        f1 = 0.0;
      } else {
        double precision = static_cast<double>(overlap) /
                           static_cast<double>(pred_bag.size());
        double recall = static_cast<double>(overlap) /
                        static_cast<double>(gold_bag.size());
        f1 = 2.0 * precision * recall / (precision + recall);
      }
    }
    best = std::max(best, f1);
  }
  return best;
}

bool prediction_correct(const std::string& prediction, const std::string& gold,
                        double tolerance) {
  if (is_option_letter_gold(gold)) {
    auto letter = extract_option_letter(prediction);
    return letter &&
           *letter == static_cast<char>(std::toupper(
                          static_cast<unsigned char>(trim(gold)[0])));
  }
  if (auto gold_value = parse_full_number(gold)) {
    if (auto pred_value = parse_full_number(prediction))
      return numeric_equal(*pred_value, *gold_value, tolerance);
    auto numerals = extract_numeric_values(prediction);
    if (!numerals.empty())
      return numeric_equal(numerals.back().value, *gold_value, tolerance);
    return false;
  }
  return normalize_answer(prediction) == normalize_answer(gold);
}

bool prediction_correct(const std::string& prediction,
                        const std::vector<std::string>& golds, double tolerance) {
  return std::any_of(golds.begin(), golds.end(), [&](const std::string& gold) {
    return prediction_correct(prediction, gold, tolerance);
  });
}

double accuracy(const std::vector<std::pair<std::string, std::string>>& records,
                double tolerance) {
  if (records.empty())
    throw Error(ErrorCode::ParseFailure, "accuracy over an empty record list");
  std::int64_t correct = 0;
  for (const auto& [prediction, gold] : records) {
    if (prediction_correct(prediction, gold, tolerance)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

TransitionMatrix transition_analysis(
    const std::vector<std::pair<std::string, std::string>>& before,
    const std::vector<std::pair<std::string, std::string>>& after,
    const std::map<std::string, std::vector<std::string>>& golds,
    double tolerance) {
  std::map<std::string, std::string> after_by_id;
  for (const auto& [qid, pred] : after) after_by_id[qid] = pred;
  if (after_by_id.size() != before.size())
    throw Error(ErrorCode::MismatchedIds, "before/after cover different questions");

  TransitionMatrix matrix;
  for (const auto& [qid, before_pred] : before) {
    auto after_it = after_by_id.find(qid);
    if (after_it == after_by_id.end())
      throw Error(ErrorCode::MismatchedIds, "question missing from after set: " + qid);
    auto gold_it = golds.find(qid);
    if (gold_it == golds.end())
      throw Error(ErrorCode::MismatchedIds, "question missing from golds: " + qid);

    bool was = prediction_correct(before_pred, gold_it->second, tolerance);
    bool now = prediction_correct(after_it->second, gold_it->second, tolerance);
    if (was && now) ++matrix.unchanged_correct;
    else if (was && !now) ++matrix.correct_to_incorrect;
    else if (!was && now) ++matrix.incorrect_to_correct;
    else ++matrix.unchanged_incorrect;
  }

  double total = static_cast<double>(matrix.total());
  if (total > 0) {
    matrix.correct_to_incorrect_fraction =
        static_cast<double>(matrix.correct_to_incorrect) / total;
    matrix.incorrect_to_correct_fraction =
        static_cast<double>(matrix.incorrect_to_correct) / total;
  }
  return matrix;
}

}  // namespace proco
