#include "proco/runner.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <memory>
#include <thread>

#include "proco/cache.hpp"
#include "proco/errors.hpp"
#include "proco/http_provider.hpp"

namespace proco {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

InitializerKind initializer_from_string(const std::string& s) {
  if (s == "cot" || s == "CoT") return InitializerKind::CoT;
  if (s == "genread" || s == "GenRead") return InitializerKind::GenRead;
  if (s == "retrieval" || s == "Retrieval") return InitializerKind::Retrieval;
  throw Error(ErrorCode::ParseFailure, "unknown initializer: " + s);
}

}  // namespace

RunOptions load_run_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::NotFound, "config not readable: " + path);

  RunOptions options;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::MalformedLine,
                  path + ":" + std::to_string(line_no) + ": expected key=value");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    try {
      if (key == "max_iterations") options.engine.max_iterations = std::stoi(value);
      else if (key == "temperature") options.engine.temperature = std::stod(value);
      else if (key == "numeric_tolerance") options.engine.numeric_tolerance = std::stod(value);
      else if (key == "rng_seed") options.engine.rng_seed = std::stoull(value);
      else if (key == "initializer") options.engine.initializer = initializer_from_string(value);
      else if (key == "documents_m") options.engine.documents_m = std::stoi(value);
      else if (key == "strategy") options.strategy = strategy_from_string(value);
      else if (key == "task_type") options.task_type = task_type_from_string(value);
      else if (key == "provider") options.provider.kind = value;
      else if (key == "model_name") options.provider.model_name = value;
      else if (key == "fixtures") options.provider.fixtures_path = value;
      else if (key == "retriever_dir") options.provider.retriever_dir = value;
      else if (key == "max_tokens") options.provider.max_tokens = std::stoi(value);
      else if (key == "token_budget") options.provider.token_budget = std::stoll(value);
      else if (key == "workers") options.workers = std::stoi(value);
      else if (key == "max_failures") options.max_failures = std::stoi(value);
      else if (key == "prompt_catalog") options.prompt_catalog_path = value;
      else
        throw Error(ErrorCode::MalformedLine,
                    path + ":" + std::to_string(line_no) + ": unknown key " + key);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::MalformedLine,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return options;
}

IterationTrace canonicalize_for_file(IterationTrace trace) {
  for (auto& ex : trace.exchanges) {
    if (ex.cache_hit) {
      ex.cache_hit = false;
      ex.latency_ms = 0;
    }
  }
  return trace;
}

RunOutput run_batch(const std::vector<QARecord>& records, const RunOptions& options) {
  options.engine.validate();

  PromptCatalog catalog = options.prompt_catalog_path.empty()
                              ? PromptCatalog::builtin()
                              : PromptCatalog::load(options.prompt_catalog_path);
  Engine engine(options.engine, std::move(catalog), options.provider.model_name);

  std::unique_ptr<ScriptedProvider> scripted;
  std::unique_ptr<HttpCompletionProvider> http;
  if (options.provider.kind == "scripted") {
    if (options.provider.fixtures_path.empty())
      throw Error(ErrorCode::NotFound, "scripted provider needs a fixtures path");
    scripted = std::make_unique<ScriptedProvider>(
        load_fixtures_jsonl(options.provider.fixtures_path));
  } else if (options.provider.kind == "http") {
    HttpProviderOptions http_options = HttpCompletionProvider::options_from_env();
    http = std::make_unique<HttpCompletionProvider>(http_options);
  } else {
    throw Error(ErrorCode::ParseFailure,
                "unknown provider kind: " + options.provider.kind);
  }

  std::unique_ptr<ResponseCache> cache;
  if (!options.cache_path.empty())
    cache = std::make_unique<ResponseCache>(options.cache_path);
  CacheStats cache_stats;
  auto budget_spent = std::make_shared<std::atomic<std::int64_t>>(0);

  TrigramEmbedder embedder;

  RunOutput output;
  output.traces.resize(records.size());

  auto run_one = [&](std::size_t index) {
    const QARecord& record = records[index];
    // Composition per question: scoped fixtures -> cache -> budget.
    std::unique_ptr<CompletionProvider> scoped;
    CompletionProvider* provider = nullptr;
    if (scripted) {
      scoped = scripted->for_question(record.question_id);
      provider = scoped.get();
    } else {
      provider = http.get();
    }
    std::unique_ptr<CachedCompletionProvider> cached;
    if (cache) {
      cached = std::make_unique<CachedCompletionProvider>(*provider, *cache,
                                                          &cache_stats);
      provider = cached.get();
    }
    BudgetedCompletionProvider budgeted(*provider, budget_spent,
                                        options.provider.token_budget);

    std::unique_ptr<FixtureRetriever> retriever;
    if (!options.provider.retriever_dir.empty())
      retriever = std::make_unique<FixtureRetriever>(options.provider.retriever_dir,
                                                     record.question_id);

    IterationTrace trace;
    try {
      Question question = question_from_record(record);
      trace = engine.run_strategy(options.strategy, record.question_id, question,
                                  budgeted, embedder, retriever.get());
    } catch (const std::exception& e) {
      trace.question_id = record.question_id;
      trace.error = e.what();
    }
    output.traces[index] = std::move(trace);
  };

  auto started = std::chrono::steady_clock::now();
  int workers = std::max(1, options.workers);
  if (workers == 1 || records.size() <= 1) {
    for (std::size_t i = 0; i < records.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    int n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers),
                                          records.size());
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          std::size_t index = next.fetch_add(1);
          if (index >= records.size()) break;
          run_one(index);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  auto elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - started);

  output.stats.wall_ms = static_cast<double>(elapsed.count()) / 1000.0;
  output.stats.cache_hits = cache_stats.hits.load();
  output.stats.cache_misses = cache_stats.misses.load();
  for (const auto& trace : output.traces) {
    if (!trace.error.empty()) ++output.stats.failures;
  }
  return output;
}

}  // namespace proco
