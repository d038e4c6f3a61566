#ifndef HCSP_ERRORS_HPP
#define HCSP_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace hcsp {

// Source location for parser and analysis diagnostics. Lines and columns
// are 1-based; end is inclusive.
struct SourceSpan {
  std::string file;
  int start_line = 1;
  int start_col = 1;
  int end_line = 1;
  int end_col = 1;
};

// Base class for all tool errors. `code` is a stable machine-readable tag
// (e.g. "parse_error", "type_conflict") used by the CLI's --json-errors mode.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& message,
             std::vector<std::string> expected = {})
      : Error("parse_error", message),
        span(std::move(span)),
        expected(std::move(expected)) {}

  SourceSpan span;
  std::vector<std::string> expected;
};

// Runtime faults raised by the simulator or the virtual-time executor.
class SimError : public Error {
 public:
  SimError(std::string code, const std::string& message, double time = 0.0)
      : Error(std::move(code), message), time(time) {}

  double time;
};

}  // namespace hcsp

#endif
