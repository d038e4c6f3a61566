#ifndef HCSP_PARSER_HPP
#define HCSP_PARSER_HPP

#include <string>

#include "hcsp/errors.hpp"
#include "hcsp/process.hpp"

namespace hcsp {

// Parses a bare statement sequence (no module wrapper).
// Throws ParseError with a span on the first failure.
ProcPtr parse_process(const std::string& text, const std::string& filename = "<input>");

// Parses an expression (used by tests and config sidecars).
ExprPtr parse_expr_text(const std::string& text, const std::string& filename = "<input>");

// Parses module definitions followed by an optional instantiation line
//   system id = Module(args) || id = Module(args);
// A file with no `module` keyword is treated as a single anonymous process
// instantiated under the id "main".
System parse_system(const std::string& text, const std::string& filename = "<input>");

System parse_system_file(const std::string& path);

}  // namespace hcsp

#endif
