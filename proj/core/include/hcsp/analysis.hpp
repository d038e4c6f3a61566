#ifndef HCSP_ANALYSIS_HPP
#define HCSP_ANALYSIS_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hcsp/process.hpp"

namespace hcsp {

// ---- types -----------------------------------------------------------

struct Type;
using TypePtr = std::shared_ptr<Type>;

// Monomorphic type lattice with unification variables.
struct Type {
  enum class Kind { Real, Bool, String, List, Unknown };
  Kind kind = Kind::Unknown;
  TypePtr elem;    // List element
  int var_id = 0;  // Unknown id

  static TypePtr real();
  static TypePtr boolean();
  static TypePtr string();
  static TypePtr list(TypePtr elem);
  static TypePtr unknown(int id);

  std::string str() const;
};

struct TypeEnv {
  // instance id -> variable -> resolved type
  std::map<std::string, std::map<std::string, TypePtr>> vars;
  // concrete channel key -> value type
  std::map<std::string, TypePtr> channels;
  // rounds of cross-instance propagation until the fixpoint
  int rounds = 0;
};

// ---- preprocessing ----------------------------------------------------

// One instantiated process: instance id, body with parameters substituted,
// procedure table (parameters substituted as well), logged variables.
struct InstProcess {
  std::string id;
  ProcPtr body;
  std::map<std::string, ProcPtr> procedures;
  std::vector<std::string> outputs;
};

// Replaces module parameters by the instance argument values in bodies and
// procedures. Throws Error("arity_mismatch") / Error("unknown_module").
std::vector<InstProcess> instantiate(const System& sys);

// Expands parameterized channels: pattern-bound variables (leading '_') in
// input positions replicate choice arms per matching universe tuple, and
// variable-indexed endpoints become if-else dispatch over the known index
// set. Throws Error("unknown_channel_universe") when a parameterized channel
// has no universe entry, Error("unbounded_index") when a variable index has
// no finite candidate set.
std::vector<InstProcess> expand_channels(const std::vector<InstProcess>& procs,
                                         const ChannelUniverse& universe);
ProcPtr expand_channels_proc(const ProcPtr& p, const ChannelUniverse& universe);

// Round-based type inference across instances. Channels carry at most one
// value type. Throws Error("type_conflict") and Error("untyped_variable").
TypeEnv infer_types(const std::vector<InstProcess>& procs);

// Convenience: instantiate + expand + validate channel concreteness.
std::vector<InstProcess> preprocess(const System& sys);

// True when no channel reference anywhere still carries a variable arg.
bool channels_concrete(const ProcPtr& p);

ChannelUniverse load_channel_universe_json(const std::string& path);

}  // namespace hcsp

#endif
