#include "proco/masking.hpp"

#include <sstream>

#include "proco/errors.hpp"

namespace proco {

std::string build_mask_question(const Question& question, const KeyCondition& key) {
  const Condition& cond = key.condition;
  int host_index = cond.sentence_index;
  if (host_index != kQuerySentence &&
      (host_index < 1 ||
       host_index > static_cast<int>(question.context_sentences.size()))) {
    throw Error(ErrorCode::SpanMismatch,
                "key condition sentence index out of range: " + std::to_string(host_index));
  }

  const std::string& host = question.sentence_at(host_index);
  if (cond.char_span.end > host.size() ||
      host.compare(cond.char_span.begin, cond.char_span.end - cond.char_span.begin,
                   cond.surface) != 0) {
    throw Error(ErrorCode::SpanMismatch,
                "span does not slice to \"" + cond.surface + "\" in: " + host);
  }

  std::string masked_host = host.substr(0, cond.char_span.begin) + kMaskToken +
                            host.substr(cond.char_span.end);

  std::ostringstream out;
  for (std::size_t j = 0; j < question.context_sentences.size(); ++j) {
    const bool is_host = host_index == static_cast<int>(j) + 1;
    out << (is_host ? masked_host : question.context_sentences[j]) << ' ';
  }
  out << (host_index == kQuerySentence ? masked_host : question.query_sentence);
  return out.str();
}

std::string build_verification_question(const std::string& mask_question,
                                        const std::string& previous_answer) {
  if (mask_question.find(kMaskToken) == std::string::npos)
    throw Error(ErrorCode::MissingMaskToken, "mask question lacks the token X");
  return mask_question + " Suppose the answer is " + previous_answer +
         ". What is the value of unknown variable X?";
}

}  // namespace proco
