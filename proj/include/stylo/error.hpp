#pragma once

#include <stdexcept>
#include <string>

namespace stylo {

enum class ErrorCode {
  invalid_argument,
  precondition,
  missing_file,
  duplicate_id,
  invalid_utf8,
  empty_document,
  unlabeled_document,
  dimension_mismatch,
  missing_annotation,
  unknown_compressor,
  numeric,
  io,
  config,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a code so callers (and the
/// CLI exit-status logic) can tell error classes apart without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace stylo
