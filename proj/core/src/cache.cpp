#include "proco/cache.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "proco/errors.hpp"

namespace proco {

namespace {

using nlohmann::json;

json exchange_to_json(const BackendExchange& ex) {
  return json{{"prompt", ex.prompt},
              {"completion", ex.completion},
              {"prompt_tokens", ex.prompt_tokens},
              {"completion_tokens", ex.completion_tokens},
              {"latency_ms", ex.latency_ms},
              {"provider", ex.provider},
              {"cache_hit", ex.cache_hit},
              {"iteration", ex.iteration}};
}

BackendExchange exchange_from_json(const json& j) {
  BackendExchange ex;
  ex.prompt = j.at("prompt").get<std::string>();
  ex.completion = j.at("completion").get<std::string>();
  ex.prompt_tokens = j.at("prompt_tokens").get<std::int64_t>();
  ex.completion_tokens = j.at("completion_tokens").get<std::int64_t>();
  ex.latency_ms = j.at("latency_ms").get<std::int64_t>();
  ex.provider = j.at("provider").get<std::string>();
  ex.cache_hit = j.at("cache_hit").get<bool>();
  ex.iteration = j.value("iteration", 0);
  return ex;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

ResponseCache::ResponseCache(std::string path) : path_(std::move(path)) { load(); }

void ResponseCache::load() {
  std::ifstream file(path_);
  if (!file) return;  // fresh cache
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json record = json::parse(line);
      entries_[record.at("key").get<std::string>()] =
          exchange_from_json(record.at("exchange"));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::CacheCorrupt,
                  path_ + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::optional<BackendExchange> ResponseCache::get(const std::string& key) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::put(const std::string& key, const BackendExchange& exchange) {
  std::lock_guard<std::mutex> lock(mutex_);
  entries_[key] = exchange;
  std::ofstream file(path_, std::ios::app);
  if (!file)
    throw Error(ErrorCode::CacheCorrupt, "cache not writable: " + path_);
  file << json{{"key", key}, {"exchange", exchange_to_json(exchange)}}.dump()
       << '\n';
}

std::size_t ResponseCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

std::string ResponseCache::make_key(const std::string& provider,
                                    const std::string& model_name,
                                    const std::string& prompt,
                                    double temperature) {
  std::string material = provider + '\x1f' + model_name + '\x1f' + prompt +
                         '\x1f' + std::to_string(temperature);
  std::uint64_t h1 = fnv1a_hash(material);
  // Second lane with a flipped basis so the digest is 128 bits.
  std::uint64_t h2 = fnv1a_hash(material) ^ 0x9e3779b97f4a7c15ull;
  h2 = h2 * 1099511628211ull + material.size();
  return hex64(h1) + hex64(h2);
}

BackendExchange CachedCompletionProvider::complete(const std::string& prompt,
                                                   const CompletionParams& params) {
  const std::string key =
      ResponseCache::make_key(inner_.name(), params.model_name, prompt,
                              params.temperature);
  auto started = std::chrono::steady_clock::now();
  if (auto stored = cache_.get(key)) {
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    stored->cache_hit = true;
    stored->latency_ms = elapsed.count();
    if (stats_) stats_->hits.fetch_add(1, std::memory_order_relaxed);
    return *stored;
  }
  BackendExchange fresh = inner_.complete(prompt, params);
  cache_.put(key, fresh);
  if (stats_) stats_->misses.fetch_add(1, std::memory_order_relaxed);
  return fresh;
}

BackendExchange BudgetedCompletionProvider::complete(const std::string& prompt,
                                                     const CompletionParams& params) {
  if (ceiling_ > 0 && spent_->load(std::memory_order_relaxed) >= ceiling_)
    throw Error(ErrorCode::BudgetExceeded,
                "token ceiling " + std::to_string(ceiling_) + " reached");
  BackendExchange ex = inner_.complete(prompt, params);
  if (!ex.cache_hit && ceiling_ > 0)
    spent_->fetch_add(ex.prompt_tokens + ex.completion_tokens,
                      std::memory_order_relaxed);
  return ex;
}

}  // namespace proco
