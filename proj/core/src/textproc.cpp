#include "proco/textproc.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <regex>
#include <sstream>

namespace proco {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

char to_lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), to_lower);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

// Abbreviations whose trailing period is not a sentence boundary.
constexpr std::array<const char*, 5> kAbbreviations = {
    "mr.", "dr.", "rs.", "e.g.", "i.e.",
};

bool is_abbreviation(const std::string& text, std::size_t dot_pos) {
  std::size_t start = dot_pos;
  while (start > 0 && !is_space(text[start - 1])) --start;
  std::string token = lowercase(text.substr(start, dot_pos - start + 1));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), token) !=
         kAbbreviations.end();
}

bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::size_t TokenBag::size() const {
  std::size_t n = 0;
  for (const auto& [_, c] : counts) n += static_cast<std::size_t>(c);
  return n;
}

std::vector<std::string> segment_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    bool at_end = i + 1 == text.size();
    if (!at_end && !is_space(text[i + 1])) continue;
    if (c == '.' && is_abbreviation(text, i)) continue;
    std::string sentence = trim(text.substr(start, i - start + 1));
    if (!sentence.empty()) sentences.push_back(std::move(sentence));
    start = i + 1;
  }
  std::string tail = trim(text.substr(start));
  if (!tail.empty()) sentences.push_back(std::move(tail));
  return sentences;
}

std::vector<NumericMatch> extract_numeric_values(const std::string& sentence) {
  // Comma-grouped first so "3,500" is not consumed as "3" then "500".
  static const std::regex kNumeral(
      R"((\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+\.\d+|\d+))");
  std::vector<NumericMatch> out;
  auto begin = std::sregex_iterator(sentence.begin(), sentence.end(), kNumeral);
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    NumericMatch m;
    m.span.begin = static_cast<std::size_t>(it->position());
    m.span.end = m.span.begin + static_cast<std::size_t>(it->length());
    m.surface = it->str();
    m.surface.erase(std::remove(m.surface.begin(), m.surface.end(), ','),
                    m.surface.end());
    m.value = std::stod(m.surface);
    out.push_back(std::move(m));
  }
  return out;
}

std::string normalize_answer(const std::string& text) {
  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text) {
    if (is_punct(c)) continue;
    lowered.push_back(to_lower(c));
  }
  std::istringstream words(lowered);
  std::string word;
  std::string out;
  while (words >> word) {
    if (word == "a" || word == "an" || word == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out += word;
  }
  return out;
}

TokenBag token_bag(const std::string& text) {
  TokenBag bag;
  std::istringstream words(normalize_answer(text));
  std::string word;
  while (words >> word) ++bag.counts[word];
  return bag;
}

bool numeric_equal(double a, double b, double tolerance) {
  return std::abs(a - b) <= tolerance * std::max(1.0, std::abs(b));
}

std::size_t bag_overlap(const TokenBag& a, const TokenBag& b) {
  std::size_t overlap = 0;
  for (const auto& [token, count] : a.counts) {
    auto it = b.counts.find(token);
    if (it != b.counts.end())
      overlap += static_cast<std::size_t>(std::min(count, it->second));
  }
  return overlap;
}

}  // namespace proco
