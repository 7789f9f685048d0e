#include "proco/keycond.hpp"

#include <algorithm>
#include <cctype>
#include <random>

#include "proco/errors.hpp"

namespace proco {

namespace {

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_outer_punct(const std::string& s) {
  std::size_t b = 0, e = s.size();
  auto is_strip = [](char c) {
    return std::ispunct(static_cast<unsigned char>(c)) ||
           std::isspace(static_cast<unsigned char>(c));
  };
  while (b < e && is_strip(s[b])) ++b;
  while (e > b && is_strip(s[e - 1])) --e;
  return s.substr(b, e - b);
}

/// Last span inside straight double quotes, if any.
std::optional<std::string> last_quoted_span(const std::string& text) {
  std::optional<std::string> result;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = text.find('"', pos);
    if (open == std::string::npos) break;
    std::size_t close = text.find('"', open + 1);
    if (close == std::string::npos) break;
    std::string inner = trim(text.substr(open + 1, close - open - 1));
    if (!inner.empty()) result = inner;
    pos = close + 1;
  }
  return result;
}

std::string final_nonempty_line(const std::string& text) {
  std::size_t end = text.size();
  while (true) {
    std::size_t nl = text.rfind('\n', end == 0 ? std::string::npos : end - 1);
    std::size_t start = nl == std::string::npos ? 0 : nl + 1;
    std::string line = trim(text.substr(start, end - start));
    if (!line.empty() || start == 0) return line;
    end = start == 0 ? 0 : start - 1;
  }
}

/// Finds `needle` case-insensitively; returns npos when absent.
std::size_t ifind(const std::string& haystack, const std::string& needle) {
  if (needle.empty()) return std::string::npos;
  std::string h = lowercase(haystack), n = lowercase(needle);
  return h.find(n);
}

int index_of_extreme(const std::vector<std::pair<int, double>>& scores,
                     const std::vector<bool>& allowed, bool* tie) {
  int best = -1;
  double best_score = 0.0;
  bool tied = false;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!allowed[i]) continue;
    if (best < 0 || scores[i].second > best_score) {
      best = static_cast<int>(i);
      best_score = scores[i].second;
      tied = false;
    } else if (scores[i].second == best_score) {
      tied = true;
    }
  }
  if (tie) *tie = tied;
  return best;
}

}  // namespace

std::pair<KeyCondition, SimilarityReport> identify_similarity(
    const Question& question, EmbeddingProvider& embedder, std::uint64_t rng_seed) {
  if (question.context_sentences.empty())
    throw Error(ErrorCode::NoNumericCondition, "no context sentences to rank");

  std::vector<std::string> inputs = question.context_sentences;
  inputs.push_back(question.query_sentence);
  std::vector<std::vector<double>> vectors = embedder.embed(inputs);
  const std::vector<double>& query_vec = vectors.back();

  SimilarityReport report;
  for (std::size_t j = 0; j + 1 < vectors.size(); ++j) {
    report.scores.emplace_back(static_cast<int>(j) + 1,
                               cosine_similarity(vectors[j], query_vec));
  }

  std::vector<bool> allowed(report.scores.size(), true);
  report.chosen_index =
      report.scores[index_of_extreme(report.scores, allowed, &report.tie_broken)]
          .first;

  // Walk sentences in descending similarity until one holds a numeral.
  int host_index = -1;
  std::vector<NumericMatch> numerals;
  while (true) {
    int pos = index_of_extreme(report.scores, allowed, nullptr);
    if (pos < 0) break;
    allowed[pos] = false;
    int candidate = report.scores[pos].first;
    auto matches = extract_numeric_values(question.sentence_at(candidate));
    if (!matches.empty()) {
      host_index = candidate;
      numerals = std::move(matches);
      break;
    }
  }
  if (host_index < 0)
    throw Error(ErrorCode::NoNumericCondition,
                "no context sentence contains a numeral");

  std::size_t pick = 0;
  if (numerals.size() > 1) {
    std::mt19937_64 rng(rng_seed ^ fnv1a_hash(question.sentence_at(host_index)));
    pick = static_cast<std::size_t>(rng() % numerals.size());
  }
  const NumericMatch& chosen = numerals[pick];

  KeyCondition key;
  key.condition.surface = chosen.surface;
  key.condition.kind = ConditionKind::NumericValue;
  key.condition.sentence_index = host_index;
  key.condition.char_span = chosen.span;
  key.condition.numeric_value = chosen.value;
  key.selection_method = SelectionMethod::Similarity;

  // Position within the question's extracted condition list, when present.
  key.index_k = 0;
  for (std::size_t i = 0; i < question.conditions.size(); ++i) {
    if (question.conditions[i].sentence_index == host_index &&
        question.conditions[i].char_span == chosen.span) {
      key.index_k = static_cast<int>(i);
      break;
    }
  }
  return {key, report};
}

KeyCondition identify_zeroshot(const Question& question, CompletionProvider& llm,
                               const PromptCatalog& catalog,
                               const CompletionParams& params,
                               BackendExchange* exchange_out) {
  std::string prompt =
      catalog.render(TemplateId::KeyCondZeroShot, {{"question", question.raw_text}});
  BackendExchange exchange = llm.complete(prompt, params);
  if (exchange_out) *exchange_out = exchange;

  std::string surface;
  if (auto quoted = last_quoted_span(exchange.completion)) {
    surface = *quoted;
  } else {
    std::string line = final_nonempty_line(exchange.completion);
    std::size_t is_pos = lowercase(line).rfind(" is ");
    std::size_t colon_pos = line.rfind(": ");
    std::size_t cut = std::string::npos;
    if (is_pos != std::string::npos) cut = is_pos + 4;
    if (colon_pos != std::string::npos &&
        (cut == std::string::npos || colon_pos + 2 > cut))
      cut = colon_pos + 2;
    surface = cut == std::string::npos ? line : line.substr(cut);
  }
  surface = strip_outer_punct(surface);
  if (surface.empty())
    throw Error(ErrorCode::ParseFailure,
                "no key-condition candidate in: " + exchange.completion.substr(0, 96));

  // Anchor to the first case-insensitive occurrence: context sentences in
  // order, then the query.
  int host_index = -1;
  std::size_t offset = std::string::npos;
  for (std::size_t j = 0; j < question.context_sentences.size(); ++j) {
    offset = ifind(question.context_sentences[j], surface);
    if (offset != std::string::npos) {
      host_index = static_cast<int>(j) + 1;
      break;
    }
  }
  if (host_index < 0) {
    offset = ifind(question.query_sentence, surface);
    if (offset != std::string::npos) host_index = kQuerySentence;
  }
  if (host_index < 0)
    throw Error(ErrorCode::KeyConditionNotInQuestion,
                "\"" + surface + "\" does not occur in the question");

  const std::string& host = question.sentence_at(host_index);
  KeyCondition key;
  key.condition.surface = host.substr(offset, surface.size());
  key.condition.kind = question.task_type == TaskType::Commonsense
                           ? ConditionKind::Concept
                           : ConditionKind::Entity;
  key.condition.sentence_index = host_index;
  key.condition.char_span = {offset, offset + surface.size()};
  key.selection_method = SelectionMethod::ZeroShot;
  key.index_k = static_cast<int>(question.conditions.size());
  return key;
}

}  // namespace proco
