#include "proco/verify.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "proco/textproc.hpp"

namespace proco {

namespace {

std::string first_sentence(const std::string& text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.' || c == '!' || c == '?') return text.substr(0, i + 1);
  }
  return text;
}

std::vector<std::string> lower_words(const std::string& text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c)))
      cleaned.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    else
      cleaned.push_back(' ');
  }
  std::istringstream in(cleaned);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

}  // namespace

Verdict parse_judgment(const std::string& completion) {
  static const std::vector<std::string> kNegations = {"not", "incorrect", "false"};
  static const std::vector<std::string> kAffirmations = {"correct", "yes", "true"};

  std::vector<std::string> words = lower_words(first_sentence(completion));
  auto contains = [&](const std::vector<std::string>& lexicon) {
    return std::any_of(words.begin(), words.end(), [&](const std::string& w) {
      return std::find(lexicon.begin(), lexicon.end(), w) != lexicon.end();
    });
  };
  if (contains(kNegations)) return Verdict::LikelyIncorrect;
  if (contains(kAffirmations)) return Verdict::LikelyCorrect;
  return Verdict::Inconclusive;
}

VerificationOutcome verify_match(const KeyCondition& key,
                                 const std::string& verification_question,
                                 const std::string& verified_answer_text,
                                 double tolerance) {
  VerificationOutcome outcome;
  outcome.verification_question = verification_question;
  outcome.verified_answer = verified_answer_text;
  outcome.method = VerifyMethod::MatchBased;

  std::vector<NumericMatch> numerals = extract_numeric_values(verified_answer_text);
  if (numerals.empty() || !key.condition.numeric_value) {
    outcome.verdict = Verdict::Inconclusive;
    return outcome;
  }
  double recovered = numerals.back().value;
  outcome.verdict = numeric_equal(recovered, *key.condition.numeric_value, tolerance)
                        ? Verdict::LikelyCorrect
                        : Verdict::LikelyIncorrect;
  return outcome;
}

VerificationOutcome verify_proposition(const std::string& verification_question,
                                       const KeyCondition& key,
                                       const std::string& verified_answer,
                                       CompletionProvider& llm,
                                       const PromptCatalog& catalog,
                                       const CompletionParams& params,
                                       BackendExchange* exchange_out) {
  std::string prompt = catalog.render(
      TemplateId::EquivalenceCheck, {{"verification_question", verification_question},
                                     {"key_condition", key.condition.surface},
                                     {"verified_answer", verified_answer}});
  BackendExchange exchange = llm.complete(prompt, params);
  if (exchange_out) *exchange_out = exchange;

  VerificationOutcome outcome;
  outcome.verification_question = verification_question;
  outcome.verified_answer = verified_answer;
  outcome.method = VerifyMethod::PropositionBased;
  outcome.judge_raw = exchange.completion;
  outcome.verdict = parse_judgment(exchange.completion);
  return outcome;
}

}  // namespace proco
