#ifndef HCSP_EVAL_HPP
#define HCSP_EVAL_HPP

#include <map>
#include <string>

#include "hcsp/expr.hpp"
#include "hcsp/value.hpp"

namespace hcsp {

using Store = std::map<std::string, Value>;

// Evaluates e in the given store. Throws SimError with codes
// "unbound_variable", "runtime_type_error", "division_by_zero",
// "numeric_overflow", "index_out_of_range".
Value eval_expr(const ExprPtr& e, const Store& store);

// Evaluates and requires a boolean result.
bool eval_bool(const ExprPtr& e, const Store& store);

// Evaluates and requires a real result.
double eval_real(const ExprPtr& e, const Store& store);

}  // namespace hcsp

#endif
