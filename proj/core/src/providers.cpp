#include "proco/providers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "proco/errors.hpp"

namespace proco {

namespace {

using nlohmann::json;

MatchMode match_mode_from_string(const std::string& s) {
  if (s == "Exact" || s == "exact") return MatchMode::Exact;
  if (s == "Substring" || s == "substring") return MatchMode::Substring;
  throw Error(ErrorCode::ParseFailure, "unknown match_mode: " + s);
}

bool fixture_matches(const ScriptedFixture& fixture, const std::string& prompt) {
  if (fixture.match_mode == MatchMode::Exact) return prompt == fixture.pattern;
  return prompt.find(fixture.pattern) != std::string::npos;
}

}  // namespace

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::int64_t approx_token_count(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  std::int64_t n = 0;
  while (in >> tok) ++n;
  return n;
}

std::uint64_t fnv1a_hash(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

ScriptedProvider::ScriptedProvider(std::vector<ScriptedFixture> fixtures)
    : fixtures_(std::move(fixtures)) {
  for (const auto& f : fixtures_) {
    if (f.responses.empty())
      throw Error(ErrorCode::ParseFailure,
                  "fixture with empty responses: " + f.pattern);
  }
}

std::vector<ScriptedFixture> load_fixtures_jsonl(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::NotFound, "fixture file not readable: " + path);
  std::vector<ScriptedFixture> fixtures;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
      ScriptedFixture f;
      f.match_mode = match_mode_from_string(record.value("match_mode", "Substring"));
      f.pattern = record.at("pattern").get<std::string>();
      f.responses = record.at("responses").get<std::vector<std::string>>();
      f.question_id = record.value("question_id", "");
      fixtures.push_back(std::move(f));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedLine,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return fixtures;
}

BackendExchange ScriptedProvider::complete(const std::string& prompt,
                                           const CompletionParams& params) {
  return complete_for("", prompt, params);
}

BackendExchange ScriptedProvider::complete_for(const std::string& question_id,
                                               const std::string& prompt,
                                               const CompletionParams& params) {
  (void)params;
  if (prompt.empty())
    throw Error(ErrorCode::ParseFailure, "empty prompt");

  std::lock_guard<std::mutex> lock(mutex_);
  // Question-scoped fixtures first, then global ones.
  for (int scoped_pass = 1; scoped_pass >= 0; --scoped_pass) {
    for (std::size_t i = 0; i < fixtures_.size(); ++i) {
      const ScriptedFixture& f = fixtures_[i];
      bool scoped = !f.question_id.empty();
      if (scoped_pass == 1 && (!scoped || f.question_id != question_id)) continue;
      if (scoped_pass == 0 && scoped) continue;
      if (!fixture_matches(f, prompt)) continue;

      std::size_t& cursor = cursors_[{question_id, i}];
      const std::string& response =
          f.responses[std::min(cursor, f.responses.size() - 1)];
      ++cursor;

      BackendExchange ex;
      ex.prompt = prompt;
      ex.completion = response;
      ex.prompt_tokens = approx_token_count(prompt);
      ex.completion_tokens = approx_token_count(response);
      ex.latency_ms = 0;
      ex.provider = name();
      ex.cache_hit = false;
      return ex;
    }
  }
  throw Error(ErrorCode::NoFixtureMatch,
              "no fixture for prompt: " + prompt.substr(0, 96));
}

namespace {

class ScopedCompletion : public CompletionProvider {
 public:
  ScopedCompletion(ScriptedProvider& parent, std::string question_id)
      : parent_(parent), question_id_(std::move(question_id)) {}

  BackendExchange complete(const std::string& prompt,
                           const CompletionParams& params) override {
    return parent_.complete_for(question_id_, prompt, params);
  }
  std::string name() const override { return parent_.name(); }

 private:
  ScriptedProvider& parent_;
  std::string question_id_;
};

}  // namespace

std::unique_ptr<CompletionProvider> ScriptedProvider::for_question(
    const std::string& question_id) {
  return std::make_unique<ScopedCompletion>(*this, question_id);
}

std::vector<double> TrigramEmbedder::embed_one(const std::string& text) {
  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text)
    lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));

  std::vector<double> v(kDimension, 0.0);
  if (lowered.size() < 3) {
    if (!lowered.empty()) v[fnv1a_hash(lowered) % kDimension] += 1.0;
  } else {
    for (std::size_t i = 0; i + 3 <= lowered.size(); ++i) {
      v[fnv1a_hash(std::string_view(lowered).substr(i, 3)) % kDimension] += 1.0;
    }
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0)
    for (double& x : v) x /= norm;
  return v;
}

std::vector<std::vector<double>> TrigramEmbedder::embed(
    const std::vector<std::string>& texts) {
  if (texts.empty())
    throw Error(ErrorCode::EmbeddingFailure, "no texts to embed");
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

}  // namespace proco
