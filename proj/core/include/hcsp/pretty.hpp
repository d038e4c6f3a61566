#ifndef HCSP_PRETTY_HPP
#define HCSP_PRETTY_HPP

#include <string>

#include "hcsp/process.hpp"

namespace hcsp {

// Deterministic concrete-syntax rendering. The output of every pretty_*
// function parses back to a structurally identical AST.
std::string pretty_print(const ExprPtr& e);
std::string pretty_print(const ProcPtr& p, int indent = 0);
std::string pretty_print(const Module& m);
std::string pretty_print(const System& sys);

}  // namespace hcsp

#endif
