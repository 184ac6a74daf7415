#pragma once

#include <stdexcept>
#include <string>

namespace railmap {

// Error categories surface as machine-readable tags on the CLI
// (stderr "error[<category>]: ..." and distinct exit codes).
enum class ErrorCategory {
  syntax,      // malformed config / document
  validation,  // inputs violate a documented invariant or precondition
  io,          // filesystem failures
  format,      // binary format / version mismatch
  config,      // inconsistent pipeline configuration
  numeric,     // degenerate numeric request (e.g. speedup of fraction 0)
};

const char* to_string(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] void fail(ErrorCategory category, const std::string& message);

}  // namespace railmap
