#include "stylo/error.hpp"

namespace stylo {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::missing_file: return "missing_file";
    case ErrorCode::duplicate_id: return "duplicate_id";
    case ErrorCode::invalid_utf8: return "invalid_utf8";
    case ErrorCode::empty_document: return "empty_document";
    case ErrorCode::unlabeled_document: return "unlabeled_document";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::missing_annotation: return "missing_annotation";
    case ErrorCode::unknown_compressor: return "unknown_compressor";
    case ErrorCode::numeric: return "numeric";
    case ErrorCode::io: return "io";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

}  // namespace stylo
