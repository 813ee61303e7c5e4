#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lexitransfer {

/// Stable error identifiers. The string form of each code is part of the
/// service API and must not change.
enum class ErrorCode {
  NotFound,
  DuplicateLexeme,
  UnknownParadigm,
  PosLanguageMismatch,
  PriorityCollision,
  SameLanguage,
  NoSuchForm,
  StemMismatch,
  EmptyInput,
  BudgetExhausted,
  BackendUnavailable,
  EmptyVariantList,
  ZeroTotal,
  FileUnreadable,
  EncodingError,
  ParseError,
  BadRequest,
  MissingActor,
  InvalidTransition,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// HTTP status the service answers with for a given code.
int error_http_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lexitransfer
