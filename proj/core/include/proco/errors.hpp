#pragma once

#include <stdexcept>
#include <string>

namespace proco {

enum class ErrorCode {
  EmptyQuery,
  NoNumericCondition,
  EmbeddingFailure,
  KeyConditionNotInQuestion,
  ParseFailure,
  SpanMismatch,
  MissingMaskToken,
  MissingBinding,
  ProviderUnavailable,
  BudgetExceeded,
  NoFixtureMatch,
  CacheCorrupt,
  RetrieverUnavailable,
  ExtractionFailure,
  MalformedLine,
  DuplicateId,
  MismatchedIds,
  SchemaMismatch,
  NotFound,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::NoNumericCondition: return "NoNumericCondition";
    case ErrorCode::EmbeddingFailure: return "EmbeddingFailure";
    case ErrorCode::KeyConditionNotInQuestion: return "KeyConditionNotInQuestion";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::SpanMismatch: return "SpanMismatch";
    case ErrorCode::MissingMaskToken: return "MissingMaskToken";
    case ErrorCode::MissingBinding: return "MissingBinding";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NoFixtureMatch: return "NoFixtureMatch";
    case ErrorCode::CacheCorrupt: return "CacheCorrupt";
    case ErrorCode::RetrieverUnavailable: return "RetrieverUnavailable";
    case ErrorCode::ExtractionFailure: return "ExtractionFailure";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MismatchedIds: return "MismatchedIds";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::NotFound: return "NotFound";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace proco
