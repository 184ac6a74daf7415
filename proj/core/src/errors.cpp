#include "railmap/errors.hpp"

namespace railmap {

const char* to_string(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::syntax: return "syntax";
    case ErrorCategory::validation: return "validation";
    case ErrorCategory::io: return "io";
    case ErrorCategory::format: return "format";
    case ErrorCategory::config: return "config";
    case ErrorCategory::numeric: return "numeric";
  }
  return "unknown";
}

void fail(ErrorCategory category, const std::string& message) {
  throw Error(category, message);
}

}  // namespace railmap
