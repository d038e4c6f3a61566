#include "hcsp/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>

#include "hcsp/errors.hpp"
#include "hcsp/subst.hpp"

#include "json.hpp"

namespace hcsp {

// ---- Type -------------------------------------------------------------

TypePtr Type::real() {
  auto t = std::make_shared<Type>();
  t->kind = Kind::Real;
  return t;
}
TypePtr Type::boolean() {
  auto t = std::make_shared<Type>();
  t->kind = Kind::Bool;
  return t;
}
TypePtr Type::string() {
  auto t = std::make_shared<Type>();
  t->kind = Kind::String;
  return t;
}
TypePtr Type::list(TypePtr elem) {
  auto t = std::make_shared<Type>();
  t->kind = Kind::List;
  t->elem = std::move(elem);
  return t;
}
TypePtr Type::unknown(int id) {
  auto t = std::make_shared<Type>();
  t->kind = Kind::Unknown;
  t->var_id = id;
  return t;
}

std::string Type::str() const {
  switch (kind) {
    case Kind::Real: return "real";
    case Kind::Bool: return "bool";
    case Kind::String: return "string";
    case Kind::List: return "list(" + (elem ? elem->str() : "?") + ")";
    case Kind::Unknown: return "?" + std::to_string(var_id);
  }
  return "?";
}

// ---- instantiate ------------------------------------------------------

namespace {

Substitution args_to_sigma(const Module& m, const Instance& inst) {
  if (m.params.size() != inst.args.size())
    throw Error("arity_mismatch",
                "instance " + inst.id + ": module " + m.name + " expects " +
                    std::to_string(m.params.size()) + " args, got " +
                    std::to_string(inst.args.size()));
  Substitution sigma;
  for (std::size_t i = 0; i < m.params.size(); ++i)
    sigma[m.params[i]] = mk_value(inst.args[i]);
  return sigma;
}

}  // namespace

std::vector<InstProcess> instantiate(const System& sys) {
  std::vector<InstProcess> out;
  for (const auto& inst : sys.instances) {
    auto it = sys.modules.find(inst.module);
    if (it == sys.modules.end())
      throw Error("unknown_module",
                  "instance " + inst.id + " refers to unknown module " + inst.module);
    const Module& m = it->second;
    Substitution sigma = args_to_sigma(m, inst);
    InstProcess ip;
    ip.id = inst.id;
    ip.body = substitute(m.body, sigma);
    for (const auto& [name, body] : m.procedures)
      ip.procedures[name] = substitute(body, sigma);
    ip.outputs = m.outputs;
    out.push_back(std::move(ip));
  }
  return out;
}

// ---- expand_channels --------------------------------------------------

namespace {

bool is_pattern_var(const ChannelArg& a) {
  const auto* v = std::get_if<ChanVar>(&a);
  return v && !v->name.empty() && v->name[0] == '_';
}

bool has_var_args(const ChannelRef& ch) { return !ch.is_concrete(); }

const std::vector<std::vector<ChannelArg>>& universe_for(
    const ChannelUniverse& universe, const ChannelRef& ch) {
  auto it = universe.find(ch.name);
  if (it == universe.end())
    throw Error("unknown_channel_universe",
                "no channel universe entry for parameterized channel " + ch.key());
  return it->second;
}

// Tuples of the universe compatible with the concrete positions of ch.
// Pattern variables must bind consistently across repeated positions.
struct ArmBinding {
  ChannelRef concrete;
  Substitution sigma;  // pattern var -> literal
};

ExprPtr arg_literal(const ChannelArg& a) {
  if (const auto* i = std::get_if<std::int64_t>(&a))
    return mk_real(static_cast<double>(*i));
  return mk_string(std::get<std::string>(a));
}

std::vector<ArmBinding> match_tuples(const ChannelRef& ch,
                                     const ChannelUniverse& universe) {
  std::vector<ArmBinding> out;
  for (const auto& tuple : universe_for(universe, ch)) {
    if (tuple.size() != ch.args.size()) continue;
    ArmBinding b;
    b.concrete.name = ch.name;
    bool ok = true;
    for (std::size_t i = 0; i < tuple.size() && ok; ++i) {
      if (std::holds_alternative<ChanVar>(tuple[i]))
        throw Error("unknown_channel_universe",
                    "channel universe for " + ch.name + " contains variable args");
      if (const auto* v = std::get_if<ChanVar>(&ch.args[i])) {
        ExprPtr lit = arg_literal(tuple[i]);
        auto found = b.sigma.find(v->name);
        if (found == b.sigma.end()) {
          b.sigma[v->name] = lit;
        } else if (!expr_equal(found->second, lit)) {
          ok = false;
        }
      } else if (!(ch.args[i] == tuple[i])) {
        ok = false;
      }
    }
    if (!ok) continue;
    b.concrete.args = tuple;
    out.push_back(std::move(b));
  }
  return out;
}

class Expander {
 public:
  explicit Expander(const ChannelUniverse& universe) : universe_(universe) {}

  ProcPtr expand(const ProcPtr& p) { return expand_seq({p}); }

 private:
  const ChannelUniverse& universe_;

  // Expands a statement list. A pattern-bound input captures the remainder
  // of its sequence as the continuation of each generated arm.
  ProcPtr expand_seq(std::vector<ProcPtr> items) {
    std::vector<ProcPtr> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const ProcPtr& p = items[i];
      if (!p) continue;
      if (const auto* s = std::get_if<Process::Seq>(&p->node)) {
        std::vector<ProcPtr> rest(s->items.begin(), s->items.end());
        rest.insert(rest.end(), items.begin() + i + 1, items.end());
        out.push_back(expand_seq(std::move(rest)));
        return mk_seq(std::move(out));
      }
      if (const auto* in = std::get_if<Process::Input>(&p->node)) {
        if (has_pattern(in->chan)) {
          std::vector<ProcPtr> rest(items.begin() + i + 1, items.end());
          out.push_back(expand_pattern_input(*in, mk_seq(std::move(rest))));
          return mk_seq(std::move(out));
        }
      }
      out.push_back(expand_one(p));
    }
    return mk_seq(std::move(out));
  }

  static bool has_pattern(const ChannelRef& ch) {
    return std::any_of(ch.args.begin(), ch.args.end(), is_pattern_var);
  }

  // ch[.., _v, ..]?x outside a choice: becomes an external choice over the
  // matching tuples, each arm carrying the substituted continuation.
  ProcPtr expand_pattern_input(const Process::Input& in, const ProcPtr& cont) {
    auto bindings = match_tuples(in.chan, universe_);
    if (bindings.empty())
      throw Error("unknown_channel_universe",
                  "no universe tuples match " + in.chan.key());
    std::vector<std::pair<CommEvent, ProcPtr>> arms;
    for (const auto& b : bindings) {
      CommEvent ev;
      ev.chan = b.concrete;
      ev.is_input = true;
      ev.var = in.var;
      arms.emplace_back(std::move(ev), expand(substitute(cont, b.sigma)));
    }
    return mk_external_choice(std::move(arms));
  }

  // Variable-indexed send or receive: if-else dispatch over candidates.
  ProcPtr expand_var_indexed(const ChannelRef& ch,
                             const std::function<ProcPtr(const ChannelRef&)>& make) {
    auto bindings = match_tuples(ch, universe_);
    if (bindings.empty())
      throw Error("unbounded_index",
                  "variable-indexed channel " + ch.key() + " has no known index set");
    std::vector<std::pair<ExprPtr, ProcPtr>> branches;
    for (const auto& b : bindings) {
      ExprPtr cond;
      for (std::size_t i = 0; i < ch.args.size(); ++i) {
        const auto* v = std::get_if<ChanVar>(&ch.args[i]);
        if (!v) continue;
        ExprPtr eq = mk_binary(BinOp::Eq, mk_var(v->name), arg_literal(b.concrete.args[i]));
        cond = cond ? mk_binary(BinOp::And, cond, eq) : eq;
      }
      branches.emplace_back(cond, make(b.concrete));
    }
    // Deduplicate dispatch conditions (two tuples can share variable values).
    std::vector<std::pair<ExprPtr, ProcPtr>> unique;
    for (auto& br : branches) {
      bool dup = false;
      for (const auto& u : unique)
        if (expr_equal(u.first, br.first)) dup = true;
      if (!dup) unique.push_back(std::move(br));
    }
    return mk_if(std::move(unique), mk_skip());
  }

  std::vector<std::pair<CommEvent, ProcPtr>> expand_arms(
      const std::vector<std::pair<CommEvent, ProcPtr>>& arms) {
    std::vector<std::pair<CommEvent, ProcPtr>> out;
    for (const auto& [ev, body] : arms) {
      if (has_pattern(ev.chan)) {
        if (!ev.is_input && ev.value)
          throw Error("unbounded_index",
                      "pattern variables are only bound by inputs: " + ev.chan.key());
        for (const auto& b : match_tuples(ev.chan, universe_)) {
          CommEvent sub;
          sub.chan = b.concrete;
          sub.is_input = ev.is_input;
          sub.var = ev.var;
          sub.value = ev.value ? substitute(ev.value, b.sigma) : nullptr;
          out.emplace_back(std::move(sub), expand(substitute(body, b.sigma)));
        }
      } else if (has_var_args(ev.chan)) {
        throw Error("unbounded_index",
                    "variable-indexed communication in choice arm " + ev.chan.key() +
                        " (only pattern variables '_v' are supported here)");
      } else {
        out.emplace_back(ev, expand(body));
      }
    }
    return out;
  }

  ProcPtr expand_one(const ProcPtr& p) {
    return std::visit(
        [&](const auto& x) -> ProcPtr {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Process::Input>) {
            if (has_var_args(x.chan))
              return expand_var_indexed(x.chan, [&](const ChannelRef& c) {
                return mk_input(c, x.var);
              });
            return p;
          } else if constexpr (std::is_same_v<T, Process::Output>) {
            if (has_var_args(x.chan))
              return expand_var_indexed(x.chan, [&](const ChannelRef& c) {
                return mk_output(c, x.value);
              });
            return p;
          } else if constexpr (std::is_same_v<T, Process::Seq>) {
            std::vector<ProcPtr> items(x.items.begin(), x.items.end());
            return expand_seq(std::move(items));
          } else if constexpr (std::is_same_v<T, Process::Guard>) {
            return mk_guard(x.cond, expand(x.body));
          } else if constexpr (std::is_same_v<T, Process::IfElse>) {
            std::vector<std::pair<ExprPtr, ProcPtr>> branches;
            for (const auto& [c, b] : x.branches) branches.emplace_back(c, expand(b));
            return mk_if(std::move(branches), expand(x.else_branch));
          } else if constexpr (std::is_same_v<T, Process::ExternalChoice>) {
            return mk_external_choice(expand_arms(x.arms));
          } else if constexpr (std::is_same_v<T, Process::InternalChoice>) {
            return mk_internal_choice(expand(x.left), expand(x.right));
          } else if constexpr (std::is_same_v<T, Process::Repeat>) {
            return mk_repeat(expand(x.body));
          } else if constexpr (std::is_same_v<T, Process::Interrupt>) {
            return mk_interrupt(x.equations, x.domain, expand_arms(x.arms));
          } else {
            return p;
          }
        },
        p->node);
  }
};

void collect_chanrefs(const ProcPtr& p, std::vector<ChannelRef>& out) {
  if (!p) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Process::Input>) {
          out.push_back(x.chan);
        } else if constexpr (std::is_same_v<T, Process::Output>) {
          out.push_back(x.chan);
        } else if constexpr (std::is_same_v<T, Process::Seq>) {
          for (const auto& it : x.items) collect_chanrefs(it, out);
        } else if constexpr (std::is_same_v<T, Process::Guard>) {
          collect_chanrefs(x.body, out);
        } else if constexpr (std::is_same_v<T, Process::IfElse>) {
          for (const auto& [c, b] : x.branches) collect_chanrefs(b, out);
          collect_chanrefs(x.else_branch, out);
        } else if constexpr (std::is_same_v<T, Process::ExternalChoice>) {
          for (const auto& [c, b] : x.arms) {
            out.push_back(c.chan);
            collect_chanrefs(b, out);
          }
        } else if constexpr (std::is_same_v<T, Process::InternalChoice>) {
          collect_chanrefs(x.left, out);
          collect_chanrefs(x.right, out);
        } else if constexpr (std::is_same_v<T, Process::Repeat>) {
          collect_chanrefs(x.body, out);
        } else if constexpr (std::is_same_v<T, Process::Interrupt>) {
          for (const auto& [c, b] : x.arms) {
            out.push_back(c.chan);
            collect_chanrefs(b, out);
          }
        }
      },
      p->node);
}

}  // namespace

ProcPtr expand_channels_proc(const ProcPtr& p, const ChannelUniverse& universe) {
  return Expander(universe).expand(p);
}

std::vector<InstProcess> expand_channels(const std::vector<InstProcess>& procs,
                                         const ChannelUniverse& universe) {
  std::vector<InstProcess> out;
  for (const auto& ip : procs) {
    InstProcess e = ip;
    e.body = expand_channels_proc(ip.body, universe);
    for (auto& [name, body] : e.procedures)
      body = expand_channels_proc(body, universe);
    out.push_back(std::move(e));
  }
  return out;
}

bool channels_concrete(const ProcPtr& p) {
  std::vector<ChannelRef> refs;
  collect_chanrefs(p, refs);
  return std::all_of(refs.begin(), refs.end(),
                     [](const ChannelRef& c) { return c.is_concrete(); });
}

std::vector<InstProcess> preprocess(const System& sys) {
  validate_system(sys);
  auto procs = instantiate(sys);
  procs = expand_channels(procs, sys.universe);
  for (const auto& ip : procs) {
    if (!channels_concrete(ip.body))
      throw Error("unknown_channel_universe",
                  "instance " + ip.id + " still has parameterized channels after expansion");
    for (const auto& [name, body] : ip.procedures)
      if (!channels_concrete(body))
        throw Error("unknown_channel_universe",
                    "procedure " + name + " of " + ip.id +
                        " still has parameterized channels after expansion");
  }
  return procs;
}

// ---- type inference ---------------------------------------------------

namespace {

class Unifier {
 public:
  TypePtr fresh() {
    bindings_.push_back(nullptr);
    return Type::unknown(static_cast<int>(bindings_.size()) - 1);
  }

  TypePtr resolve(TypePtr t) {
    while (t && t->kind == Type::Kind::Unknown) {
      TypePtr b = bindings_[static_cast<std::size_t>(t->var_id)];
      if (!b) return t;
      t = b;
    }
    if (t && t->kind == Type::Kind::List) {
      TypePtr e = resolve(t->elem);
      if (e != t->elem) return Type::list(e);
    }
    return t;
  }

  void unify(TypePtr a, TypePtr b, const std::string& where) {
    a = resolve(std::move(a));
    b = resolve(std::move(b));
    if (a->kind == Type::Kind::Unknown && b->kind == Type::Kind::Unknown) {
      if (a->var_id != b->var_id) bind(a->var_id, b);
      return;
    }
    if (a->kind == Type::Kind::Unknown) {
      bind(a->var_id, b);
      return;
    }
    if (b->kind == Type::Kind::Unknown) {
      bind(b->var_id, a);
      return;
    }
    if (a->kind != b->kind)
      throw Error("type_conflict",
                  where + ": " + a->str() + " vs " + b->str());
    if (a->kind == Type::Kind::List) unify(a->elem, b->elem, where);
  }

 private:
  void bind(int id, TypePtr t) { bindings_[static_cast<std::size_t>(id)] = std::move(t); }
  std::vector<TypePtr> bindings_;
};

class InstanceInference {
 public:
  InstanceInference(const InstProcess& ip,
                    const std::map<std::string, TypePtr>& chan_types)
      : ip_(ip), chan_types_(chan_types) {}

  void run() {
    walk(ip_.body);
    // Procedures not reachable from the body still contribute constraints.
    for (const auto& [name, body] : ip_.procedures)
      if (!visited_.count(name)) walk(body);
  }

  TypePtr var_type(const std::string& v) {
    auto it = vars_.find(v);
    return it == vars_.end() ? nullptr : uf_.resolve(it->second);
  }

  const std::map<std::string, TypePtr>& vars() const { return vars_; }

  // Channel types this instance could resolve to a concrete type.
  std::map<std::string, TypePtr> resolved_channels() {
    std::map<std::string, TypePtr> out;
    for (const auto& [key, t] : chan_local_) {
      TypePtr r = uf_.resolve(t);
      if (is_concrete(r)) out[key] = r;
    }
    return out;
  }

 private:
  static bool is_concrete(const TypePtr& t) {
    if (!t) return false;
    if (t->kind == Type::Kind::Unknown) return false;
    if (t->kind == Type::Kind::List) return is_concrete(t->elem);
    return true;
  }

  TypePtr var(const std::string& v) {
    auto it = vars_.find(v);
    if (it != vars_.end()) return it->second;
    TypePtr t = uf_.fresh();
    vars_[v] = t;
    return t;
  }

  TypePtr chan(const ChannelRef& ch) {
    std::string key = ch.key();
    auto it = chan_local_.find(key);
    if (it != chan_local_.end()) return it->second;
    TypePtr t;
    auto known = chan_types_.find(key);
    if (known != chan_types_.end()) {
      t = known->second;
    } else {
      t = uf_.fresh();
    }
    chan_local_[key] = t;
    return t;
  }

  std::string where(const char* what) const { return ip_.id + ": " + what; }

  TypePtr type_of(const ExprPtr& e) {
    return std::visit(
        [&](const auto& x) -> TypePtr {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::RealLit>) {
            return Type::real();
          } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
            return Type::boolean();
          } else if constexpr (std::is_same_v<T, Expr::StringLit>) {
            return Type::string();
          } else if constexpr (std::is_same_v<T, Expr::Var>) {
            return var(x.name);
          } else if constexpr (std::is_same_v<T, Expr::ListLit>) {
            TypePtr elem = uf_.fresh();
            for (const auto& it : x.items)
              uf_.unify(elem, type_of(it), where("list literal"));
            return Type::list(elem);
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            TypePtr a = type_of(x.a);
            switch (x.op) {
              case UnOp::Not:
                uf_.unify(a, Type::boolean(), where("!"));
                return Type::boolean();
              case UnOp::Head: {
                TypePtr elem = uf_.fresh();
                uf_.unify(a, Type::list(elem), where("head"));
                return elem;
              }
              case UnOp::Tail:
              case UnOp::Pop: {
                TypePtr elem = uf_.fresh();
                uf_.unify(a, Type::list(elem), where("tail/pop"));
                return Type::list(elem);
              }
              case UnOp::Length: {
                TypePtr elem = uf_.fresh();
                uf_.unify(a, Type::list(elem), where("len"));
                return Type::real();
              }
              default:
                uf_.unify(a, Type::real(), where(unop_name(x.op)));
                return Type::real();
            }
          } else {
            TypePtr a = type_of(x.a);
            TypePtr b = type_of(x.b);
            switch (x.op) {
              case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
              case BinOp::Div: case BinOp::Mod: case BinOp::Min: case BinOp::Max:
                uf_.unify(a, Type::real(), where(binop_name(x.op)));
                uf_.unify(b, Type::real(), where(binop_name(x.op)));
                return Type::real();
              case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
              case BinOp::Eq: case BinOp::Ne:
                uf_.unify(a, b, where(binop_name(x.op)));
                return Type::boolean();
              case BinOp::And: case BinOp::Or:
                uf_.unify(a, Type::boolean(), where(binop_name(x.op)));
                uf_.unify(b, Type::boolean(), where(binop_name(x.op)));
                return Type::boolean();
              case BinOp::Push: {
                TypePtr elem = uf_.fresh();
                uf_.unify(a, Type::list(elem), where("push"));
                uf_.unify(b, elem, where("push"));
                return Type::list(elem);
              }
              case BinOp::Get: {
                TypePtr elem = uf_.fresh();
                uf_.unify(a, Type::list(elem), where("get"));
                uf_.unify(b, Type::real(), where("get"));
                return elem;
              }
              default:
                throw Error("type_conflict", where("unsupported operator"));
            }
          }
        },
        e->node);
  }

  void comm_constraint(const CommEvent& ev) {
    TypePtr ct = chan(ev.chan);
    if (ev.is_input) {
      if (!ev.var.empty()) uf_.unify(var(ev.var), ct, where(ev.chan.key().c_str()));
    } else if (ev.value) {
      uf_.unify(type_of(ev.value), ct, where(ev.chan.key().c_str()));
    } else {
      uf_.unify(ct, Type::real(), where(ev.chan.key().c_str()));
    }
  }

  void walk(const ProcPtr& p) {
    if (!p) return;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Process::Assign>) {
            uf_.unify(var(x.var), type_of(x.value), where("assignment"));
          } else if constexpr (std::is_same_v<T, Process::MultiAssign>) {
            for (std::size_t i = 0; i < x.vars.size(); ++i)
              uf_.unify(var(x.vars[i]), type_of(x.values[i]), where("assignment"));
          } else if constexpr (std::is_same_v<T, Process::Input>) {
            CommEvent ev;
            ev.chan = x.chan;
            ev.is_input = true;
            ev.var = x.var;
            comm_constraint(ev);
          } else if constexpr (std::is_same_v<T, Process::Output>) {
            CommEvent ev;
            ev.chan = x.chan;
            ev.is_input = false;
            ev.value = x.value;
            comm_constraint(ev);
          } else if constexpr (std::is_same_v<T, Process::Seq>) {
            for (const auto& it : x.items) walk(it);
          } else if constexpr (std::is_same_v<T, Process::Guard>) {
            uf_.unify(type_of(x.cond), Type::boolean(), where("guard"));
            walk(x.body);
          } else if constexpr (std::is_same_v<T, Process::IfElse>) {
            for (const auto& [c, b] : x.branches) {
              uf_.unify(type_of(c), Type::boolean(), where("if condition"));
              walk(b);
            }
            walk(x.else_branch);
          } else if constexpr (std::is_same_v<T, Process::ExternalChoice>) {
            for (const auto& [c, b] : x.arms) {
              comm_constraint(c);
              walk(b);
            }
          } else if constexpr (std::is_same_v<T, Process::InternalChoice>) {
            walk(x.left);
            walk(x.right);
          } else if constexpr (std::is_same_v<T, Process::Repeat>) {
            walk(x.body);
          } else if constexpr (std::is_same_v<T, Process::Ode>) {
            for (const auto& [v, rhs] : x.equations) {
              uf_.unify(var(v), Type::real(), where("ODE state"));
              uf_.unify(type_of(rhs), Type::real(), where("ODE rhs"));
            }
            uf_.unify(type_of(x.domain), Type::boolean(), where("ODE domain"));
          } else if constexpr (std::is_same_v<T, Process::Interrupt>) {
            for (const auto& [v, rhs] : x.equations) {
              uf_.unify(var(v), Type::real(), where("ODE state"));
              uf_.unify(type_of(rhs), Type::real(), where("ODE rhs"));
            }
            uf_.unify(type_of(x.domain), Type::boolean(), where("ODE domain"));
            for (const auto& [c, b] : x.arms) {
              comm_constraint(c);
              walk(b);
            }
          } else if constexpr (std::is_same_v<T, Process::Wait>) {
            uf_.unify(type_of(x.duration), Type::real(), where("wait"));
          } else if constexpr (std::is_same_v<T, Process::ProcCall>) {
            if (visited_.insert(x.name).second) {
              auto it = ip_.procedures.find(x.name);
              if (it == ip_.procedures.end())
                throw Error("unknown_procedure",
                            ip_.id + ": call to undefined procedure " + x.name);
              walk(it->second);
            }
          }
        },
        p->node);
  }

  const InstProcess& ip_;
  const std::map<std::string, TypePtr>& chan_types_;
  Unifier uf_;
  std::map<std::string, TypePtr> vars_;
  std::map<std::string, TypePtr> chan_local_;
  std::set<std::string> visited_;
};

}  // namespace

TypeEnv infer_types(const std::vector<InstProcess>& procs) {
  std::map<std::string, TypePtr> chan_types;

  // Count the channels mentioned anywhere, for the round limit.
  std::set<std::string> chan_keys;
  for (const auto& ip : procs) {
    std::vector<ChannelRef> refs;
    collect_chanrefs(ip.body, refs);
    for (const auto& [name, body] : ip.procedures) collect_chanrefs(body, refs);
    for (const auto& r : refs) {
      if (!r.is_concrete())
        throw Error("type_conflict",
                    "type inference requires concrete channels, found " + r.key());
      chan_keys.insert(r.key());
    }
  }
  const int round_limit = static_cast<int>(chan_keys.size()) + 1;

  TypeEnv env;
  std::vector<std::unique_ptr<InstanceInference>> last;
  int last_productive_round = 1;
  for (int round = 1;; ++round) {
    if (round > round_limit)
      throw Error("inference_nonconvergence",
                  "type inference did not converge within " +
                      std::to_string(round_limit) + " rounds");
    bool changed = false;
    last.clear();
    for (const auto& ip : procs) {
      auto inf = std::make_unique<InstanceInference>(ip, chan_types);
      inf->run();
      for (const auto& [key, t] : inf->resolved_channels()) {
        auto it = chan_types.find(key);
        if (it == chan_types.end()) {
          chan_types[key] = t;
          changed = true;
        } else {
          // Cross-check: a later resolution must agree with the recorded one.
          Unifier check;
          check.unify(it->second, t, "channel " + key);
        }
      }
      last.push_back(std::move(inf));
    }
    if (changed) last_productive_round = round;
    if (!changed) break;
  }
  env.rounds = last_productive_round;

  std::function<bool(const TypePtr&)> concrete = [&](const TypePtr& t) -> bool {
    if (!t || t->kind == Type::Kind::Unknown) return false;
    if (t->kind == Type::Kind::List) return concrete(t->elem);
    return true;
  };
  for (std::size_t i = 0; i < procs.size(); ++i) {
    const auto& ip = procs[i];
    auto& inf = *last[i];
    for (const auto& [v, t0] : inf.vars()) {
      TypePtr t = inf.var_type(v);
      if (!concrete(t))
        throw Error("untyped_variable",
                    "cannot infer the type of " + v + " in instance " + ip.id +
                        "; add an initialization statement for it");
      env.vars[ip.id][v] = t;
    }
  }
  env.channels = chan_types;
  return env;
}

ChannelUniverse load_channel_universe_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  ChannelUniverse out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::vector<std::vector<ChannelArg>> tuples;
    for (const auto& tuple : it.value()) {
      std::vector<ChannelArg> args;
      for (const auto& a : tuple) {
        if (a.is_number_integer())
          args.push_back(static_cast<std::int64_t>(a.get<std::int64_t>()));
        else if (a.is_string())
          args.push_back(a.get<std::string>());
        else
          throw Error("io_error", "channel universe entries must be ints or strings");
      }
      tuples.push_back(std::move(args));
    }
    std::sort(tuples.begin(), tuples.end());
    out[it.key()] = std::move(tuples);
  }
  return out;
}

}  // namespace hcsp
