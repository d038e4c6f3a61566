#include "hcsp/trace_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hcsp/errors.hpp"

#include "json.hpp"

namespace hcsp {

namespace {

std::string csv_cell(const Value& v) {
  if (v.is_real()) return format_real(v.as_real());
  if (v.is_bool()) return v.as_bool() ? "true" : "false";
  // strings and lists are quoted, embedded quotes doubled
  std::string body = v.is_string() ? v.as_string() : v.str();
  std::string out = "\"";
  for (char c : body) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  return out + "\"";
}

nlohmann::json value_json(const Value& v) {
  if (v.is_real()) return v.as_real();
  if (v.is_bool()) return v.as_bool();
  if (v.is_string()) return v.as_string();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : v.as_list()) arr.push_back(value_json(x));
  return arr;
}

}  // namespace

void export_trace_csv(const Trace& trace, const std::string& path, double step) {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write " + path);
  out << "time";
  for (const auto& c : trace.columns) out << "," << c;
  out << "\n";
  for (const auto& row : trace.resample(step)) {
    out << format_real(row.time);
    for (const auto& v : row.values) {
      out << ",";
      if (v) out << csv_cell(*v);
    }
    out << "\n";
  }
  if (!out) throw Error("io_error", "failed writing " + path);
}

void export_trace_jsonl(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write " + path);
  for (const auto& e : trace.events) {
    nlohmann::json j;
    switch (e.kind) {
      case Event::Kind::Comm:
        j["type"] = "comm";
        j["time"] = e.time;
        j["channel"] = e.chan.key();
        j["value"] = value_json(e.value);
        j["sender"] = e.sender;
        j["receiver"] = e.receiver;
        break;
      case Event::Kind::Evolve: {
        j["type"] = "evolve";
        j["start"] = e.time;
        j["end"] = e.end_time;
        nlohmann::json ready = nlohmann::json::array();
        for (const auto& r : e.readiness)
          ready.push_back({r.instance, r.chan.key(), r.is_input ? "in" : "out"});
        j["readiness"] = std::move(ready);
        break;
      }
      case Event::Kind::Terminate:
        j["type"] = "terminate";
        j["time"] = e.time;
        if (!e.instance.empty()) j["instance"] = e.instance;
        if (!e.message.empty()) j["message"] = e.message;
        break;
      case Event::Kind::Error:
        j["type"] = "error";
        j["time"] = e.time;
        j["instance"] = e.instance;
        j["message"] = e.message;
        break;
    }
    out << j.dump() << "\n";
  }
  if (!out) throw Error("io_error", "failed writing " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
      cur += '\x01';  // marker: cell was quoted
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Trace load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open " + path);
  Trace tr;
  std::string line;
  if (!std::getline(in, line)) throw Error("io_error", path + ": empty file");
  auto header = split_csv_line(line);
  if (header.empty() || header[0] != "time")
    throw Error("io_error", path + ": first column must be time");
  tr.columns.assign(header.begin() + 1, header.end());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    StateSample s;
    s.time = std::strtod(cells[0].c_str(), nullptr);
    s.values.resize(tr.columns.size());
    for (std::size_t i = 1; i < cells.size() && i <= tr.columns.size(); ++i) {
      const std::string& c = cells[i];
      if (c.empty()) continue;
      if (c[0] == '\x01') {
        s.values[i - 1] = Value(c.substr(1));
      } else if (c == "true" || c == "false") {
        s.values[i - 1] = Value(c == "true");
      } else {
        s.values[i - 1] = Value(std::strtod(c.c_str(), nullptr));
      }
    }
    tr.end_time = s.time;
    tr.journal.push_back(std::move(s));
  }
  return tr;
}

}  // namespace hcsp
