#ifndef HCSP_TRACE_HPP
#define HCSP_TRACE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hcsp/channel.hpp"
#include "hcsp/value.hpp"

namespace hcsp {

// Readiness of one endpoint for a potential communication.
struct ReadyEntry {
  std::string instance;
  ChannelRef chan;
  bool is_input = false;
};

// Snapshot of the logged columns at one time point. A column is empty
// until its variable is first written.
struct StateSample {
  double time = 0.0;
  std::vector<std::optional<Value>> values;  // aligned with Trace::columns
};

struct Event {
  enum class Kind { Comm, Evolve, Terminate, Error };
  Kind kind = Kind::Comm;
  double time = 0.0;      // Comm/Terminate/Error time; Evolve start time

  // Comm
  ChannelRef chan;
  Value value;
  std::string sender;
  std::string receiver;

  // Evolve
  double end_time = 0.0;
  std::vector<StateSample> samples;
  std::vector<ReadyEntry> readiness;

  // Terminate / Error
  std::string instance;
  std::string message;
};

// The semantic object produced by simulation and by the virtual-time
// executor; time-ordered events plus the final store of every instance.
struct Trace {
  std::vector<std::string> columns;  // "<instance>.<var>"
  std::vector<Event> events;
  // Flat time-ordered sampling journal: one entry per discrete change plus
  // the evolve-grid samples. This is what export and comparison read.
  std::vector<StateSample> journal;
  std::map<std::string, std::map<std::string, Value>> final_states;
  double end_time = 0.0;

  // Asserts nondecreasing event times and sample containment; throws
  // hcsp::Error on violation. Run by the producers before returning.
  void check_well_formed() const;

  // Value of column index `col` at time t: last journal entry at or before
  // t (zero-order hold). Empty if the variable was not yet written.
  std::optional<Value> sample_at(std::size_t col, double t) const;

  // Journal resampled onto the uniform grid 0, step, 2*step, ..., end_time.
  std::vector<StateSample> resample(double step) const;

  int column_index(const std::string& name) const;  // -1 if absent
};

}  // namespace hcsp

#endif
