#include "lexitransfer/error.hpp"

namespace lexitransfer {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::DuplicateLexeme: return "duplicate_lexeme";
    case ErrorCode::UnknownParadigm: return "unknown_paradigm";
    case ErrorCode::PosLanguageMismatch: return "pos_language_mismatch";
    case ErrorCode::PriorityCollision: return "priority_collision";
    case ErrorCode::SameLanguage: return "same_language";
    case ErrorCode::NoSuchForm: return "no_such_form";
    case ErrorCode::StemMismatch: return "stem_mismatch";
    case ErrorCode::EmptyInput: return "empty_input";
    case ErrorCode::BudgetExhausted: return "budget_exhausted";
    case ErrorCode::BackendUnavailable: return "backend_unavailable";
    case ErrorCode::EmptyVariantList: return "empty_variant_list";
    case ErrorCode::ZeroTotal: return "zero_total";
    case ErrorCode::FileUnreadable: return "file_unreadable";
    case ErrorCode::EncodingError: return "encoding_error";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::BadRequest: return "bad_request";
    case ErrorCode::MissingActor: return "missing_actor";
    case ErrorCode::InvalidTransition: return "invalid_transition";
  }
  return "internal";
}

int error_http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::DuplicateLexeme:
    case ErrorCode::PriorityCollision:
    case ErrorCode::InvalidTransition: return 409;
    case ErrorCode::UnknownParadigm:
    case ErrorCode::PosLanguageMismatch:
    case ErrorCode::SameLanguage:
    case ErrorCode::NoSuchForm:
    case ErrorCode::StemMismatch:
    case ErrorCode::EmptyInput:
    case ErrorCode::EmptyVariantList:
    case ErrorCode::ZeroTotal:
    case ErrorCode::EncodingError: return 422;
    case ErrorCode::ParseError:
    case ErrorCode::BadRequest:
    case ErrorCode::MissingActor: return 400;
    case ErrorCode::BudgetExhausted: return 429;
    case ErrorCode::BackendUnavailable: return 503;
    case ErrorCode::FileUnreadable: return 500;
  }
  return 500;
}

}  // namespace lexitransfer
