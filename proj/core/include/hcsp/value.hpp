#ifndef HCSP_VALUE_HPP
#define HCSP_VALUE_HPP

#include <string>
#include <variant>
#include <vector>

namespace hcsp {

// Runtime value: 64-bit real, boolean, string, or a list of values.
// Values are plain data; copies are cheap at the sizes this tool handles.
class Value {
 public:
  using List = std::vector<Value>;

  Value() : data_(0.0) {}
  explicit Value(double v) : data_(v) {}
  explicit Value(bool v) : data_(v) {}
  explicit Value(std::string v) : data_(std::move(v)) {}
  explicit Value(List v) : data_(std::move(v)) {}

  bool is_real() const { return std::holds_alternative<double>(data_); }
  bool is_bool() const { return std::holds_alternative<bool>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }
  bool is_list() const { return std::holds_alternative<List>(data_); }

  double as_real() const { return std::get<double>(data_); }
  bool as_bool() const { return std::get<bool>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }
  const List& as_list() const { return std::get<List>(data_); }
  List& as_list() { return std::get<List>(data_); }

  const char* kind_name() const {
    switch (data_.index()) {
      case 0: return "real";
      case 1: return "bool";
      case 2: return "string";
      default: return "list";
    }
  }

  friend bool operator==(const Value& a, const Value& b) {
    return a.data_ == b.data_;
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

  // Deterministic rendering; reals use shortest round-trip formatting.
  std::string str() const;

 private:
  std::variant<double, bool, std::string, List> data_;
};

// Formats a double so that reading it back reproduces the same bits.
std::string format_real(double v);

}  // namespace hcsp

#endif
