#include "proco/http_provider.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "proco/errors.hpp"

namespace proco {

namespace {

using nlohmann::json;

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

HttpCompletionProvider::HttpCompletionProvider(HttpProviderOptions options)
    : options_(std::move(options)) {
  if (options_.base_url.empty())
    throw Error(ErrorCode::ProviderUnavailable, "no API base URL configured");
  std::size_t scheme_end = options_.base_url.find("://");
  std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  std::size_t path_start = options_.base_url.find('/', host_start);
  if (path_start == std::string::npos) {
    host_ = options_.base_url;
  } else {
    host_ = options_.base_url.substr(0, path_start);
    path_prefix_ = options_.base_url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/')
      path_prefix_.pop_back();
  }
}

HttpProviderOptions HttpCompletionProvider::options_from_env() {
  HttpProviderOptions options;
  if (const char* base = std::getenv("PROCO_API_BASE")) options.base_url = base;
  if (const char* key = std::getenv("PROCO_API_KEY")) options.api_key = key;
  return options;
}

BackendExchange HttpCompletionProvider::complete(const std::string& prompt,
                                                 const CompletionParams& params) {
  if (prompt.empty()) throw Error(ErrorCode::ParseFailure, "empty prompt");

  json body{
      {"model", params.model_name},
      {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
      {"temperature", params.temperature},
  };
  if (params.max_tokens > 0) body["max_tokens"] = params.max_tokens;
  if (params.seed_hint) body["seed"] = *params.seed_hint;
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!options_.api_key.empty())
    headers.emplace("Authorization", "Bearer " + options_.api_key);

  std::string last_error = "no attempt made";
  int backoff_ms = options_.backoff_initial_ms;

  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms *= 2;
    }

    httplib::Client client(host_);
    client.set_connection_timeout(options_.timeout_seconds, 0);
    client.set_read_timeout(options_.timeout_seconds, 0);

    auto started = std::chrono::steady_clock::now();
    httplib::Result res = client.Post(path_prefix_ + "/chat/completions",
                                      headers, payload, "application/json");
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);

    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status) + ": " +
                   res->body.substr(0, 200);
      if (retryable_status(res->status)) continue;
      throw Error(ErrorCode::ProviderUnavailable, last_error);
    }

    try {
      json parsed = json::parse(res->body);
      BackendExchange ex;
      ex.prompt = prompt;
      ex.completion =
          parsed.at("choices").at(0).at("message").at("content").get<std::string>();
      if (parsed.contains("usage")) {
        ex.prompt_tokens = parsed["usage"].value("prompt_tokens", std::int64_t{0});
        ex.completion_tokens =
            parsed["usage"].value("completion_tokens", std::int64_t{0});
      }
      if (ex.prompt_tokens == 0) ex.prompt_tokens = approx_token_count(prompt);
      if (ex.completion_tokens == 0)
        ex.completion_tokens = approx_token_count(ex.completion);
      ex.latency_ms = elapsed.count();
      ex.provider = name();
      return ex;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ProviderUnavailable,
                  std::string("malformed completion response: ") + e.what());
    }
  }
  throw Error(ErrorCode::ProviderUnavailable,
              "gave up after " + std::to_string(options_.max_attempts) +
                  " attempts; last: " + last_error);
}

}  // namespace proco
