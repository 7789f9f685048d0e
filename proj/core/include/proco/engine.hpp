#pragma once

#include <memory>
#include <string>
#include <vector>

#include "proco/domain.hpp"
#include "proco/keycond.hpp"
#include "proco/prompts.hpp"
#include "proco/providers.hpp"

namespace proco {

class Retriever {
 public:
  virtual ~Retriever() = default;
  /// Up to max_documents document strings for the query.
  virtual std::vector<std::string> retrieve(const std::string& query,
                                            int max_documents) = 0;
};

/// Reads documents from <directory>/<question_id>.txt; documents are
/// separated by a line containing only "---". Missing file = no documents.
class FixtureRetriever : public Retriever {
 public:
  FixtureRetriever(std::string directory, std::string question_id)
      : directory_(std::move(directory)), question_id_(std::move(question_id)) {}

  std::vector<std::string> retrieve(const std::string& query,
                                    int max_documents) override;

 private:
  std::string directory_;
  std::string question_id_;
};

struct InitializerOutput {
  std::string reasoning;
  std::vector<std::string> documents;  // empty for CoT
  Answer answer;
};

enum class ExtractionMode { Auto, Numeral, Letter, Entity };

enum class Strategy { ProCo, CoT, SelfCorrect };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

/// Orchestrates one question end to end. All state is per-call; an Engine is
/// safe to share across worker threads.
class Engine {
 public:
  explicit Engine(EngineConfig config,
                  PromptCatalog catalog = PromptCatalog::builtin(),
                  std::string model_name = {});

  const EngineConfig& config() const { return config_; }
  const PromptCatalog& catalog() const { return catalog_; }
  CompletionParams completion_params() const;

  InitializerOutput generate_initial_answer(const Question& question,
                                            CompletionProvider& llm,
                                            Retriever* retriever,
                                            std::vector<BackendExchange>& log) const;

  /// Sends the task's extraction prompt and parses the reply: last numeral
  /// for arithmetic, last standalone option letter for multiple choice,
  /// first line for entity answers.
  Answer extract_final_answer(const Question& question, const std::string& reasoning,
                              CompletionProvider& llm,
                              std::vector<BackendExchange>& log,
                              ExtractionMode mode = ExtractionMode::Auto,
                              int iteration = 0) const;

  IterationTrace run_proco(const std::string& question_id, const Question& question,
                           CompletionProvider& llm, EmbeddingProvider& embedder,
                           Retriever* retriever = nullptr) const;

  IterationTrace run_cot(const std::string& question_id, const Question& question,
                         CompletionProvider& llm, Retriever* retriever = nullptr) const;

  IterationTrace run_self_correct(const std::string& question_id,
                                  const Question& question,
                                  CompletionProvider& llm) const;

  IterationTrace run_strategy(Strategy strategy, const std::string& question_id,
                              const Question& question, CompletionProvider& llm,
                              EmbeddingProvider& embedder,
                              Retriever* retriever = nullptr) const;

  /// Parses the short answer out of an extraction completion; exposed for
  /// tests. Throws ExtractionFailure when nothing parseable is present.
  static std::string parse_extraction(const std::string& completion,
                                      ExtractionMode mode);

  static constexpr const char* kDocumentDelimiter = "---";

 private:
  BackendExchange call(CompletionProvider& llm, const std::string& prompt,
                       int iteration, std::vector<BackendExchange>& log) const;
  ExtractionMode resolve_mode(const Question& question, ExtractionMode mode) const;

  EngineConfig config_;
  PromptCatalog catalog_;
  std::string model_name_;
};

/// Renders the potentially-incorrect set for the correction hint:
/// {first, second, ...}
std::string format_incorrect_set(const std::vector<std::string>& surfaces);

/// Splits a document-generation completion on delimiter lines.
std::vector<std::string> split_documents(const std::string& text);

}  // namespace proco
