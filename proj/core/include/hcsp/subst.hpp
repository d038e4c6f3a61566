#ifndef HCSP_SUBST_HPP
#define HCSP_SUBST_HPP

#include <map>
#include <set>
#include <string>

#include "hcsp/process.hpp"

namespace hcsp {

using Substitution = std::map<std::string, ExprPtr>;

// Variables read before being written, plus ODE state variables.
std::set<std::string> free_vars(const ProcPtr& p);
std::set<std::string> free_vars(const ExprPtr& e);

// All variables that appear in any position (read, write, ODE state).
std::set<std::string> all_vars(const ProcPtr& p);

ExprPtr substitute(const ExprPtr& e, const Substitution& sigma);

// Simultaneous substitution in every expression position of the process.
// Channel-argument variable references are substituted when sigma maps them
// to string or integral literals. Throws Error("cyclic_substitution") if
// sigma has a cycle.
ProcPtr substitute(const ProcPtr& p, const Substitution& sigma);

// Composes sigma with itself until a fixpoint (at most |sigma| rounds);
// throws Error("cyclic_substitution") on cycles.
Substitution compose_substitution(const Substitution& sigma);

}  // namespace hcsp

#endif
