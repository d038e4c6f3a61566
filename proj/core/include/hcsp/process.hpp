#ifndef HCSP_PROCESS_HPP
#define HCSP_PROCESS_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hcsp/channel.hpp"
#include "hcsp/expr.hpp"
#include "hcsp/value.hpp"

namespace hcsp {

struct Process;
using ProcPtr = std::shared_ptr<const Process>;

// One communication event in an external choice or interrupt:
// ch[args]?x (input, var may be empty to discard) or ch[args]!e
// (output, value may be null for a pure signal).
struct CommEvent {
  ChannelRef chan;
  bool is_input = false;
  std::string var;   // input binder; may be empty
  ExprPtr value;     // output payload; may be null
};

using OdeEquation = std::pair<std::string, ExprPtr>;  // (state var, rhs)

struct Process {
  struct Skip {};
  struct Assign { std::string var; ExprPtr value; };
  struct MultiAssign { std::vector<std::string> vars; std::vector<ExprPtr> values; };
  struct Input { ChannelRef chan; std::string var; };
  struct Output { ChannelRef chan; ExprPtr value; };  // value null => signal
  struct Seq { std::vector<ProcPtr> items; };
  struct Guard { ExprPtr cond; ProcPtr body; };
  struct IfElse {
    std::vector<std::pair<ExprPtr, ProcPtr>> branches;
    ProcPtr else_branch;  // never null; Skip when absent in the source
  };
  struct ExternalChoice { std::vector<std::pair<CommEvent, ProcPtr>> arms; };
  struct InternalChoice { ProcPtr left, right; };
  struct Repeat { ProcPtr body; };
  struct Ode { std::vector<OdeEquation> equations; ExprPtr domain; };
  struct Interrupt {
    std::vector<OdeEquation> equations;  // may be empty (stationary)
    ExprPtr domain;
    std::vector<std::pair<CommEvent, ProcPtr>> arms;
  };
  struct Wait { ExprPtr duration; };
  struct ProcCall { std::string name; };

  using Node = std::variant<Skip, Assign, MultiAssign, Input, Output, Seq, Guard,
                            IfElse, ExternalChoice, InternalChoice, Repeat, Ode,
                            Interrupt, Wait, ProcCall>;
  Node node;

  explicit Process(Node n) : node(std::move(n)) {}
};

ProcPtr mk_skip();
ProcPtr mk_assign(std::string var, ExprPtr value);
ProcPtr mk_multi_assign(std::vector<std::string> vars, std::vector<ExprPtr> values);
ProcPtr mk_input(ChannelRef chan, std::string var);
ProcPtr mk_output(ChannelRef chan, ExprPtr value);
ProcPtr mk_seq(std::vector<ProcPtr> items);   // flattens nested Seq, drops Skip
ProcPtr mk_seq2(ProcPtr a, ProcPtr b);
ProcPtr mk_guard(ExprPtr cond, ProcPtr body);
ProcPtr mk_if(std::vector<std::pair<ExprPtr, ProcPtr>> branches, ProcPtr else_branch);
ProcPtr mk_external_choice(std::vector<std::pair<CommEvent, ProcPtr>> arms);
ProcPtr mk_internal_choice(ProcPtr left, ProcPtr right);
ProcPtr mk_repeat(ProcPtr body);
ProcPtr mk_ode(std::vector<OdeEquation> equations, ExprPtr domain);
ProcPtr mk_interrupt(std::vector<OdeEquation> equations, ExprPtr domain,
                     std::vector<std::pair<CommEvent, ProcPtr>> arms);
ProcPtr mk_wait(ExprPtr duration);
ProcPtr mk_call(std::string name);

bool proc_equal(const ProcPtr& a, const ProcPtr& b);
bool is_skip(const ProcPtr& p);
std::size_t proc_node_count(const ProcPtr& p);

// A named module: parameter list, procedure table, body, and the variables
// whose values are logged when an instance of the module is simulated.
struct Module {
  std::string name;
  std::vector<std::string> params;
  std::map<std::string, ProcPtr> procedures;
  ProcPtr body;
  std::vector<std::string> outputs;
};

struct Instance {
  std::string id;
  std::string module;
  std::vector<Value> args;
};

// Known index tuples per channel name, used to expand parameterized
// channels into concrete ones.
using ChannelUniverse = std::map<std::string, std::vector<std::vector<ChannelArg>>>;

struct System {
  std::map<std::string, Module> modules;
  std::vector<Instance> instances;
  ChannelUniverse universe;  // may be empty; sidecar or frontend fills it
};

// Validates module/instance wiring: unique ids, arity match, resolvable
// procedure calls, acyclic procedure call graph.
void validate_system(const System& sys);

}  // namespace hcsp

#endif
