#ifndef HCSP_DIAGRAM_HPP
#define HCSP_DIAGRAM_HPP

#include <map>
#include <string>
#include <vector>

#include "hcsp/process.hpp"
#include "hcsp/rational.hpp"
#include "hcsp/subst.hpp"

namespace hcsp {

// A block-diagram model. Wires are identified by name; each block drives
// exactly one output wire. Subsystems are unfolded at load time: normal and
// enabled members are inlined (the enabling condition lands on each member),
// triggered subsystems become a TriggeredGroup executed as one unit.
struct Block {
  enum class StSpec { Inherit, Continuous, Discrete };

  std::string id;
  std::string kind;
  std::vector<std::string> inputs;
  std::string output;

  std::map<std::string, double> num_params;
  std::map<std::string, std::vector<double>> vec_params;
  std::map<std::string, std::string> str_params;

  StSpec declared = StSpec::Inherit;
  Rational declared_st;

  ExprPtr enable;  // enabling condition, null when not inside an enabled subsystem

  // filled by propagate_sample_times
  StSpec resolved = StSpec::Inherit;
  Rational resolved_st;

  int group = -1;  // index into Diagram::groups, -1 for free blocks

  double num(const std::string& key, double dflt) const {
    auto it = num_params.find(key);
    return it == num_params.end() ? dflt : it->second;
  }
  std::string str(const std::string& key, const std::string& dflt) const {
    auto it = str_params.find(key);
    return it == str_params.end() ? dflt : it->second;
  }
};

struct TriggeredGroup {
  std::string id;
  std::string trigger_wire;
  std::string trigger_type;  // rising | falling | either
  std::vector<std::size_t> members;
};

struct Diagram {
  std::string name;
  std::vector<Block> blocks;
  std::vector<TriggeredGroup> groups;

  // computed by propagate_sample_times
  Rational period;  // GCD of discrete sample times; 0 when purely continuous
  bool has_discrete = false;
  bool has_continuous = false;

  std::vector<std::string> wires() const;
  const Block* driver_of(const std::string& wire) const;
};

// Reads the documented .diagram.json schema, unfolds subsystems, expands
// DiscretePID into primitive blocks, and validates wiring.
Diagram load_diagram(const std::string& path);
Diagram load_diagram_text(const std::string& text, const std::string& name_hint = "");

// Classifies every block discrete/continuous and computes the diagram
// period as the rational GCD of the discrete sample times.
void propagate_sample_times(Diagram& d);

// Wire-level causality graph: an edge runs from a block's output wire to
// every input wire its output function instantaneously depends on.
// Returns blocks in a stable topological order (ties by block id).
std::vector<std::size_t> causal_block_order(const Diagram& d);

// Trigger predicate over (pre, cur) for rising / falling / either.
ExprPtr trigger_condition(const std::string& type, const ExprPtr& pre,
                          const ExprPtr& cur);

struct DiscreteTranslation {
  ProcPtr init;      // Init_d
  ProcPtr discrete;  // all outputs in order, then all updates
};
DiscreteTranslation translate_discrete(const Diagram& d);

struct ContinuousTranslation {
  ProcPtr init;  // Init_c
  std::vector<OdeEquation> odes;
  Substitution gamma;
};
ContinuousTranslation translate_continuous(const Diagram& d);

struct TriggeredTranslation {
  ProcPtr output;  // guarded computation of the subsystem
  ProcPtr update;  // (triggered, pre) := (TrigCond, cur)
  ProcPtr init;
};
TriggeredTranslation translate_triggered(const Diagram& d, const TriggeredGroup& g);

// Full composition:  Init_d; Init_c; (Discrete; t := 0; <odes, t_dot=1 & t < period>)**
ProcPtr translate_diagram(const Diagram& d);
Module translate_diagram_module(const Diagram& d);

}  // namespace hcsp

#endif
