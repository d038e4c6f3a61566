#ifndef HCSP_CHANNEL_HPP
#define HCSP_CHANNEL_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace hcsp {

// A channel index argument: concrete integer, concrete string, or a
// variable/parameter reference. Preprocessing removes all variable
// references; the simulator and code generator only see concrete args.
struct ChanVar {
  std::string name;
  friend bool operator==(const ChanVar&, const ChanVar&) = default;
  friend auto operator<=>(const ChanVar&, const ChanVar&) = default;
};

using ChannelArg = std::variant<std::int64_t, std::string, ChanVar>;

struct ChannelRef {
  std::string name;
  std::vector<ChannelArg> args;

  bool is_concrete() const {
    for (const auto& a : args)
      if (std::holds_alternative<ChanVar>(a)) return false;
    return true;
  }

  // Canonical key, e.g. run[0]["t1"]; identity for matching and ordering.
  std::string key() const;

  friend bool operator==(const ChannelRef& a, const ChannelRef& b) {
    return a.name == b.name && a.args == b.args;
  }
  friend bool operator<(const ChannelRef& a, const ChannelRef& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.args < b.args;
  }
};

std::string channel_arg_str(const ChannelArg& a);

}  // namespace hcsp

#endif
