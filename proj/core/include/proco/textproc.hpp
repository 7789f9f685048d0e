#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace proco {

/// Half-open character range [begin, end) within a host string.
struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const CharSpan&) const = default;
};

struct NumericMatch {
  double value = 0.0;
  CharSpan span;
  std::string surface;  // matched text, commas stripped
};

/// Multiset of normalized tokens used by the F1 overlap metric.
struct TokenBag {
  std::map<std::string, int> counts;

  std::size_t size() const;
  bool empty() const { return counts.empty(); }
  bool operator==(const TokenBag&) const = default;
};

/// Splits text on sentence-final . ! ? followed by whitespace or end of input.
/// Terminators are preserved; a fixed abbreviation list (Mr., Dr., Rs., e.g.,
/// i.e.) never splits. Empty input yields an empty list.
std::vector<std::string> segment_sentences(const std::string& text);

/// Extracts digit-form numerals (integers, decimals, comma-grouped) in order
/// of appearance. Spans cover the numeral only; percent signs and other
/// trailing symbols are excluded.
std::vector<NumericMatch> extract_numeric_values(const std::string& sentence);

/// Lowercase, drop the articles a/an/the as whole words, strip punctuation,
/// collapse whitespace.
std::string normalize_answer(const std::string& text);

/// Whitespace tokens of normalize_answer(text), with duplicates kept.
TokenBag token_bag(const std::string& text);

/// Relative comparison with floor 1: |a-b| <= tolerance * max(1, |b|).
bool numeric_equal(double a, double b, double tolerance);

/// Multiset intersection size.
std::size_t bag_overlap(const TokenBag& a, const TokenBag& b);

}  // namespace proco
