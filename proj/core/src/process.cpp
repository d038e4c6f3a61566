#include "hcsp/process.hpp"

#include <functional>
#include <set>

#include "hcsp/errors.hpp"

namespace hcsp {

std::string channel_arg_str(const ChannelArg& a) {
  if (const auto* i = std::get_if<std::int64_t>(&a)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&a)) return "\"" + *s + "\"";
  return std::get<ChanVar>(a).name;
}

std::string ChannelRef::key() const {
  std::string out = name;
  for (const auto& a : args) out += "[" + channel_arg_str(a) + "]";
  return out;
}

namespace {
template <typename T>
ProcPtr mk(T node) {
  return std::make_shared<Process>(Process::Node{std::move(node)});
}
}  // namespace

ProcPtr mk_skip() {
  static const ProcPtr skip = mk(Process::Skip{});
  return skip;
}
ProcPtr mk_assign(std::string var, ExprPtr value) {
  return mk(Process::Assign{std::move(var), std::move(value)});
}
ProcPtr mk_multi_assign(std::vector<std::string> vars, std::vector<ExprPtr> values) {
  return mk(Process::MultiAssign{std::move(vars), std::move(values)});
}
ProcPtr mk_input(ChannelRef chan, std::string var) {
  return mk(Process::Input{std::move(chan), std::move(var)});
}
ProcPtr mk_output(ChannelRef chan, ExprPtr value) {
  return mk(Process::Output{std::move(chan), std::move(value)});
}

ProcPtr mk_seq(std::vector<ProcPtr> items) {
  std::vector<ProcPtr> flat;
  for (auto& p : items) {
    if (!p || is_skip(p)) continue;
    if (const auto* s = std::get_if<Process::Seq>(&p->node)) {
      flat.insert(flat.end(), s->items.begin(), s->items.end());
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return mk_skip();
  if (flat.size() == 1) return flat[0];
  return mk(Process::Seq{std::move(flat)});
}

ProcPtr mk_seq2(ProcPtr a, ProcPtr b) {
  std::vector<ProcPtr> v;
  v.push_back(std::move(a));
  v.push_back(std::move(b));
  return mk_seq(std::move(v));
}

ProcPtr mk_guard(ExprPtr cond, ProcPtr body) {
  return mk(Process::Guard{std::move(cond), std::move(body)});
}
ProcPtr mk_if(std::vector<std::pair<ExprPtr, ProcPtr>> branches, ProcPtr else_branch) {
  if (!else_branch) else_branch = mk_skip();
  return mk(Process::IfElse{std::move(branches), std::move(else_branch)});
}
ProcPtr mk_external_choice(std::vector<std::pair<CommEvent, ProcPtr>> arms) {
  return mk(Process::ExternalChoice{std::move(arms)});
}
ProcPtr mk_internal_choice(ProcPtr left, ProcPtr right) {
  return mk(Process::InternalChoice{std::move(left), std::move(right)});
}
ProcPtr mk_repeat(ProcPtr body) { return mk(Process::Repeat{std::move(body)}); }
ProcPtr mk_ode(std::vector<OdeEquation> equations, ExprPtr domain) {
  return mk(Process::Ode{std::move(equations), std::move(domain)});
}
ProcPtr mk_interrupt(std::vector<OdeEquation> equations, ExprPtr domain,
                     std::vector<std::pair<CommEvent, ProcPtr>> arms) {
  return mk(Process::Interrupt{std::move(equations), std::move(domain), std::move(arms)});
}
ProcPtr mk_wait(ExprPtr duration) { return mk(Process::Wait{std::move(duration)}); }
ProcPtr mk_call(std::string name) { return mk(Process::ProcCall{std::move(name)}); }

bool is_skip(const ProcPtr& p) {
  return p && std::holds_alternative<Process::Skip>(p->node);
}

namespace {

bool comm_equal(const CommEvent& a, const CommEvent& b) {
  return a.chan == b.chan && a.is_input == b.is_input && a.var == b.var &&
         expr_equal(a.value, b.value);
}

}  // namespace

bool proc_equal(const ProcPtr& a, const ProcPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, Process::Skip>) {
          return true;
        } else if constexpr (std::is_same_v<T, Process::Assign>) {
          return x.var == y.var && expr_equal(x.value, y.value);
        } else if constexpr (std::is_same_v<T, Process::MultiAssign>) {
          if (x.vars != y.vars || x.values.size() != y.values.size()) return false;
          for (std::size_t i = 0; i < x.values.size(); ++i)
            if (!expr_equal(x.values[i], y.values[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Process::Input>) {
          return x.chan == y.chan && x.var == y.var;
        } else if constexpr (std::is_same_v<T, Process::Output>) {
          return x.chan == y.chan && expr_equal(x.value, y.value);
        } else if constexpr (std::is_same_v<T, Process::Seq>) {
          if (x.items.size() != y.items.size()) return false;
          for (std::size_t i = 0; i < x.items.size(); ++i)
            if (!proc_equal(x.items[i], y.items[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Process::Guard>) {
          return expr_equal(x.cond, y.cond) && proc_equal(x.body, y.body);
        } else if constexpr (std::is_same_v<T, Process::IfElse>) {
          if (x.branches.size() != y.branches.size()) return false;
          for (std::size_t i = 0; i < x.branches.size(); ++i) {
            if (!expr_equal(x.branches[i].first, y.branches[i].first)) return false;
            if (!proc_equal(x.branches[i].second, y.branches[i].second)) return false;
          }
          return proc_equal(x.else_branch, y.else_branch);
        } else if constexpr (std::is_same_v<T, Process::ExternalChoice>) {
          if (x.arms.size() != y.arms.size()) return false;
          for (std::size_t i = 0; i < x.arms.size(); ++i) {
            if (!comm_equal(x.arms[i].first, y.arms[i].first)) return false;
            if (!proc_equal(x.arms[i].second, y.arms[i].second)) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Process::InternalChoice>) {
          return proc_equal(x.left, y.left) && proc_equal(x.right, y.right);
        } else if constexpr (std::is_same_v<T, Process::Repeat>) {
          return proc_equal(x.body, y.body);
        } else if constexpr (std::is_same_v<T, Process::Ode>) {
          if (x.equations.size() != y.equations.size()) return false;
          for (std::size_t i = 0; i < x.equations.size(); ++i) {
            if (x.equations[i].first != y.equations[i].first) return false;
            if (!expr_equal(x.equations[i].second, y.equations[i].second)) return false;
          }
          return expr_equal(x.domain, y.domain);
        } else if constexpr (std::is_same_v<T, Process::Interrupt>) {
          if (x.equations.size() != y.equations.size()) return false;
          for (std::size_t i = 0; i < x.equations.size(); ++i) {
            if (x.equations[i].first != y.equations[i].first) return false;
            if (!expr_equal(x.equations[i].second, y.equations[i].second)) return false;
          }
          if (!expr_equal(x.domain, y.domain)) return false;
          if (x.arms.size() != y.arms.size()) return false;
          for (std::size_t i = 0; i < x.arms.size(); ++i) {
            if (!comm_equal(x.arms[i].first, y.arms[i].first)) return false;
            if (!proc_equal(x.arms[i].second, y.arms[i].second)) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Process::Wait>) {
          return expr_equal(x.duration, y.duration);
        } else {
          return x.name == std::get<Process::ProcCall>(b->node).name;
        }
      },
      a->node);
}

std::size_t proc_node_count(const ProcPtr& p) {
  if (!p) return 0;
  std::size_t n = 1;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Process::Seq>) {
          for (const auto& it : x.items) n += proc_node_count(it);
        } else if constexpr (std::is_same_v<T, Process::Guard>) {
          n += proc_node_count(x.body);
        } else if constexpr (std::is_same_v<T, Process::IfElse>) {
          for (const auto& [c, b] : x.branches) n += proc_node_count(b);
          n += proc_node_count(x.else_branch);
        } else if constexpr (std::is_same_v<T, Process::ExternalChoice>) {
          for (const auto& [c, b] : x.arms) n += proc_node_count(b);
        } else if constexpr (std::is_same_v<T, Process::InternalChoice>) {
          n += proc_node_count(x.left) + proc_node_count(x.right);
        } else if constexpr (std::is_same_v<T, Process::Repeat>) {
          n += proc_node_count(x.body);
        } else if constexpr (std::is_same_v<T, Process::Interrupt>) {
          for (const auto& [c, b] : x.arms) n += proc_node_count(b);
        }
      },
      p->node);
  return n;
}

namespace {

void collect_calls(const ProcPtr& p, std::set<std::string>& out) {
  if (!p) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Process::ProcCall>) {
          out.insert(x.name);
        } else if constexpr (std::is_same_v<T, Process::Seq>) {
          for (const auto& it : x.items) collect_calls(it, out);
        } else if constexpr (std::is_same_v<T, Process::Guard>) {
          collect_calls(x.body, out);
        } else if constexpr (std::is_same_v<T, Process::IfElse>) {
          for (const auto& [c, b] : x.branches) collect_calls(b, out);
          collect_calls(x.else_branch, out);
        } else if constexpr (std::is_same_v<T, Process::ExternalChoice>) {
          for (const auto& [c, b] : x.arms) collect_calls(b, out);
        } else if constexpr (std::is_same_v<T, Process::InternalChoice>) {
          collect_calls(x.left, out);
          collect_calls(x.right, out);
        } else if constexpr (std::is_same_v<T, Process::Repeat>) {
          collect_calls(x.body, out);
        } else if constexpr (std::is_same_v<T, Process::Interrupt>) {
          for (const auto& [c, b] : x.arms) collect_calls(b, out);
        }
      },
      p->node);
}

void check_proc_graph(const Module& m) {
  // DFS over the procedure call graph; rejects recursion and unresolved names.
  enum class Mark { White, Grey, Black };
  std::map<std::string, Mark> marks;
  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    auto it = m.procedures.find(name);
    if (it == m.procedures.end())
      throw Error("unknown_procedure",
                  "module " + m.name + ": call to undefined procedure " + name);
    Mark& mk = marks[name];
    if (mk == Mark::Grey)
      throw Error("recursive_procedure",
                  "module " + m.name + ": recursive procedure " + name);
    if (mk == Mark::Black) return;
    mk = Mark::Grey;
    std::set<std::string> calls;
    collect_calls(it->second, calls);
    for (const auto& c : calls) visit(c);
    mk = Mark::Black;
  };
  std::set<std::string> roots;
  collect_calls(m.body, roots);
  for (const auto& [name, body] : m.procedures) {
    std::set<std::string> calls;
    collect_calls(body, calls);
    roots.insert(calls.begin(), calls.end());
  }
  for (const auto& r : roots) visit(r);
}

}  // namespace

void validate_system(const System& sys) {
  std::set<std::string> ids;
  for (const auto& inst : sys.instances) {
    if (!ids.insert(inst.id).second)
      throw Error("duplicate_instance", "duplicate instance id " + inst.id);
    auto it = sys.modules.find(inst.module);
    if (it == sys.modules.end())
      throw Error("unknown_module",
                  "instance " + inst.id + " refers to unknown module " + inst.module);
    if (it->second.params.size() != inst.args.size())
      throw Error("arity_mismatch",
                  "instance " + inst.id + ": module " + inst.module + " expects " +
                      std::to_string(it->second.params.size()) + " args, got " +
                      std::to_string(inst.args.size()));
  }
  for (const auto& [name, m] : sys.modules) check_proc_graph(m);
}

}  // namespace hcsp
