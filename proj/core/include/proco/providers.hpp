#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "proco/domain.hpp"

namespace proco {

struct CompletionParams {
  double temperature = 0.7;
  int max_tokens = 0;  // 0 = provider default
  std::string model_name;
  std::optional<std::int64_t> seed_hint;
};

class CompletionProvider {
 public:
  virtual ~CompletionProvider() = default;
  virtual BackendExchange complete(const std::string& prompt,
                                   const CompletionParams& params) = 0;
  virtual std::string name() const = 0;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  /// One fixed-dimension vector per input string.
  virtual std::vector<std::vector<double>> embed(
      const std::vector<std::string>& texts) = 0;
  virtual std::size_t dimension() const = 0;
};

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

/// Whitespace token count; the approximate accounting used when a provider
/// reports no usage numbers.
std::int64_t approx_token_count(const std::string& text);

enum class MatchMode { Exact, Substring };

struct ScriptedFixture {
  MatchMode match_mode = MatchMode::Substring;
  std::string pattern;
  std::vector<std::string> responses;  // consumed in sequence on repeated hits
  std::string question_id;             // empty = matches any question
};

/// Deterministic completion provider backed by pattern->response fixtures.
/// Sequence state is kept per (question_id, fixture) so concurrent questions
/// never advance each other's response sequences. Question-scoped fixtures
/// take precedence over global ones; within a scope, file order wins.
class ScriptedProvider : public CompletionProvider {
 public:
  explicit ScriptedProvider(std::vector<ScriptedFixture> fixtures);

  BackendExchange complete(const std::string& prompt,
                           const CompletionParams& params) override;
  std::string name() const override { return "scripted"; }

  /// Completion restricted to fixtures visible to `question_id`, with that
  /// question's own sequence counters.
  BackendExchange complete_for(const std::string& question_id,
                               const std::string& prompt,
                               const CompletionParams& params);

  /// Lightweight view binding complete() calls to one question id.
  std::unique_ptr<CompletionProvider> for_question(const std::string& question_id);

 private:
  std::vector<ScriptedFixture> fixtures_;
  std::map<std::pair<std::string, std::size_t>, std::size_t> cursors_;
  std::mutex mutex_;
};

/// Deterministic embedding provider: lowercased character trigrams hashed
/// into 64 buckets (FNV-1a), counted, then L2-normalized. Stands in for a
/// sentence-embedding model in tests and offline runs.
class TrigramEmbedder : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDimension = 64;

  std::vector<std::vector<double>> embed(
      const std::vector<std::string>& texts) override;
  std::size_t dimension() const override { return kDimension; }

  static std::vector<double> embed_one(const std::string& text);
};

std::uint64_t fnv1a_hash(std::string_view data);

/// One ScriptedFixture per JSON line: {"match_mode": "Exact"|"Substring",
/// "pattern": ..., "responses": [...], "question_id": ...?}.
std::vector<ScriptedFixture> load_fixtures_jsonl(const std::string& path);

}  // namespace proco
