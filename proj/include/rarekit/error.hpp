#pragma once

#include <stdexcept>
#include <string>

namespace rarekit {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  io,
  parse,
  degenerate,
};

// Single exception type for contract violations; the code lets callers
// (mostly the CLI) branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace rarekit
