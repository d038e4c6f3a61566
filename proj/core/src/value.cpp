#include "hcsp/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace hcsp {

std::string format_real(double v) {
  // Shortest representation that round-trips, with a stable fallback.
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v || (std::isnan(back) && std::isnan(v))) return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Value::str() const {
  if (is_real()) return format_real(as_real());
  if (is_bool()) return as_bool() ? "true" : "false";
  if (is_string()) return "\"" + as_string() + "\"";
  std::string out = "[";
  const auto& items = as_list();
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i].str();
  }
  return out + "]";
}

}  // namespace hcsp
