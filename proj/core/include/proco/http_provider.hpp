#pragma once

#include <string>

#include "proco/providers.hpp"

namespace proco {

struct HttpProviderOptions {
  std::string base_url;  // scheme://host[:port][/path-prefix]
  std::string api_key;   // sent as a bearer token when non-empty
  int timeout_seconds = 120;
  int max_attempts = 3;
  int backoff_initial_ms = 250;
};

/// Chat-completion client: POSTs {model, messages, temperature, max_tokens}
/// to <base_url>/chat/completions and reads the first choice. Transient
/// failures (connect errors, 429, 5xx) are retried with exponential backoff.
class HttpCompletionProvider : public CompletionProvider {
 public:
  explicit HttpCompletionProvider(HttpProviderOptions options);

  BackendExchange complete(const std::string& prompt,
                           const CompletionParams& params) override;
  std::string name() const override { return "http"; }

  /// Reads PROCO_API_BASE and PROCO_API_KEY.
  static HttpProviderOptions options_from_env();

 private:
  HttpProviderOptions options_;
  std::string host_;         // scheme://host[:port]
  std::string path_prefix_;  // leading path, no trailing slash
};

}  // namespace proco
