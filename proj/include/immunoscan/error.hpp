#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace immunoscan {

enum class ErrorKind {
  parse,
  duplicate_cell,
  incomplete_panel,
  invalid_panel,
  not_found,
  no_candidates,
  insufficient_history,
  invalid_parameter,
  shape,
  no_signal,
  insufficient_features,
  undefined_correlation,
  io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "parse error";
    case ErrorKind::duplicate_cell: return "duplicate cell";
    case ErrorKind::incomplete_panel: return "incomplete panel";
    case ErrorKind::invalid_panel: return "invalid panel";
    case ErrorKind::not_found: return "entity not found";
    case ErrorKind::no_candidates: return "no candidates";
    case ErrorKind::insufficient_history: return "insufficient history";
    case ErrorKind::invalid_parameter: return "invalid parameter";
    case ErrorKind::shape: return "shape mismatch";
    case ErrorKind::no_signal: return "no signal";
    case ErrorKind::insufficient_features: return "insufficient features";
    case ErrorKind::undefined_correlation: return "undefined correlation";
    case ErrorKind::io: return "i/o error";
  }
  return "error";
}

/// Every failure raised by the library carries one of the kinds above, so
/// callers (the CLI in particular) can map them to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace immunoscan
