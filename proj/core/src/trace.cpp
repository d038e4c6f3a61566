#include "hcsp/trace.hpp"

#include <algorithm>
#include <cmath>

#include "hcsp/errors.hpp"

namespace hcsp {

void Trace::check_well_formed() const {
  double t = 0.0;
  for (const auto& e : events) {
    if (e.time < t - 1e-12)
      throw Error("trace_order", "event times decrease at t=" + format_real(e.time));
    t = std::max(t, e.time);
    if (e.kind == Event::Kind::Evolve) {
      if (e.end_time < e.time - 1e-12)
        throw Error("trace_order", "evolve segment ends before it starts");
      for (const auto& s : e.samples) {
        if (s.time < e.time - 1e-9 || s.time > e.end_time + 1e-9)
          throw Error("trace_order", "evolve sample outside its segment");
      }
      t = std::max(t, e.end_time);
    }
  }
  for (std::size_t i = 1; i < journal.size(); ++i)
    if (journal[i].time < journal[i - 1].time - 1e-12)
      throw Error("trace_order", "journal times decrease");
}

int Trace::column_index(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) return -1;
  return static_cast<int>(it - columns.begin());
}

std::optional<Value> Trace::sample_at(std::size_t col, double t) const {
  // Last journal row with row.time <= t; rows are time-ordered.
  std::optional<Value> out;
  auto it = std::upper_bound(journal.begin(), journal.end(), t,
                             [](double v, const StateSample& s) { return v < s.time; });
  while (it != journal.begin()) {
    --it;
    if (col < it->values.size() && it->values[col]) return it->values[col];
  }
  return out;
}

std::vector<StateSample> Trace::resample(double step) const {
  std::vector<StateSample> out;
  if (step <= 0) throw Error("bad_config", "resample step must be positive");
  std::size_t n = static_cast<std::size_t>(std::floor(end_time / step + 1e-9)) + 1;
  std::size_t cursor = 0;
  std::vector<std::optional<Value>> current(columns.size());
  for (std::size_t k = 0; k < n; ++k) {
    double t = static_cast<double>(k) * step;
    while (cursor < journal.size() && journal[cursor].time <= t + 1e-12) {
      const auto& row = journal[cursor];
      for (std::size_t c = 0; c < columns.size() && c < row.values.size(); ++c)
        if (row.values[c]) current[c] = row.values[c];
      ++cursor;
    }
    StateSample s;
    s.time = t;
    s.values = current;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace hcsp
