#ifndef HCSP_TRACE_IO_HPP
#define HCSP_TRACE_IO_HPP

#include <string>

#include "hcsp/trace.hpp"

namespace hcsp {

// CSV: header `time,<instance>.<var>,...`; one row per output-step grid
// point; reals in shortest round-trip form, cells empty until first write.
void export_trace_csv(const Trace& trace, const std::string& path, double step);

// JSON-lines event log; comm lines carry {time, channel, value, ...}.
void export_trace_jsonl(const Trace& trace, const std::string& path);

// Reads a CSV produced by export_trace_csv back into a journal-only trace.
Trace load_trace_csv(const std::string& path);

}  // namespace hcsp

#endif
