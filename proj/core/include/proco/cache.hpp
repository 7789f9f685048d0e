#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "proco/providers.hpp"

namespace proco {

/// Append-only single-file store mapping hex digests to serialized exchanges.
/// Writes are serialized; lookups are lock-protected map reads.
class ResponseCache {
 public:
  explicit ResponseCache(std::string path);

  std::optional<BackendExchange> get(const std::string& key);
  void put(const std::string& key, const BackendExchange& exchange);

  std::size_t size() const;
  const std::string& path() const { return path_; }

  static std::string make_key(const std::string& provider,
                              const std::string& model_name,
                              const std::string& prompt, double temperature);

 private:
  void load();

  std::string path_;
  std::map<std::string, BackendExchange> entries_;
  mutable std::mutex mutex_;
};

struct CacheStats {
  std::atomic<std::int64_t> hits{0};
  std::atomic<std::int64_t> misses{0};
};

/// Wraps a provider with read-through caching. On a hit the stored exchange
/// is returned with cache_hit set and latency reflecting the lookup; token
/// counts are the original ones.
class CachedCompletionProvider : public CompletionProvider {
 public:
  CachedCompletionProvider(CompletionProvider& inner, ResponseCache& cache,
                           CacheStats* stats = nullptr)
      : inner_(inner), cache_(cache), stats_(stats) {}

  BackendExchange complete(const std::string& prompt,
                           const CompletionParams& params) override;
  std::string name() const override { return inner_.name(); }

 private:
  CompletionProvider& inner_;
  ResponseCache& cache_;
  CacheStats* stats_;
};

/// Throws BudgetExceeded once the cumulative freshly-generated token count
/// crosses the ceiling. Cache hits are free.
class BudgetedCompletionProvider : public CompletionProvider {
 public:
  BudgetedCompletionProvider(CompletionProvider& inner,
                             std::shared_ptr<std::atomic<std::int64_t>> spent,
                             std::int64_t ceiling)
      : inner_(inner), spent_(std::move(spent)), ceiling_(ceiling) {}

  BackendExchange complete(const std::string& prompt,
                           const CompletionParams& params) override;
  std::string name() const override { return inner_.name(); }

 private:
  CompletionProvider& inner_;
  std::shared_ptr<std::atomic<std::int64_t>> spent_;
  std::int64_t ceiling_;
};

}  // namespace proco
