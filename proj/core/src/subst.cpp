#include "hcsp/subst.hpp"

#include <functional>

#include "hcsp/errors.hpp"

namespace hcsp {

std::set<std::string> free_vars(const ExprPtr& e) {
  std::vector<std::string> vars;
  collect_vars(e, vars);
  return {vars.begin(), vars.end()};
}

namespace {

void chan_vars(const ChannelRef& ch, std::set<std::string>& reads) {
  for (const auto& a : ch.args)
    if (const auto* v = std::get_if<ChanVar>(&a)) reads.insert(v->name);
}

void expr_reads(const ExprPtr& e, const std::set<std::string>& written,
                std::set<std::string>& reads) {
  if (!e) return;
  std::vector<std::string> vars;
  collect_vars(e, vars);
  for (const auto& v : vars)
    if (!written.count(v)) reads.insert(v);
}

// Dataflow walk: `written` is threaded through sequences; branches fork it.
void walk(const ProcPtr& p, std::set<std::string>& written,
          std::set<std::string>& reads, bool track_writes) {
  if (!p) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Process::Assign>) {
          expr_reads(x.value, written, reads);
          if (track_writes) written.insert(x.var);
        } else if constexpr (std::is_same_v<T, Process::MultiAssign>) {
          for (const auto& v : x.values) expr_reads(v, written, reads);
          if (track_writes)
            for (const auto& v : x.vars) written.insert(v);
        } else if constexpr (std::is_same_v<T, Process::Input>) {
          chan_vars(x.chan, reads);
          if (track_writes && !x.var.empty()) written.insert(x.var);
        } else if constexpr (std::is_same_v<T, Process::Output>) {
          chan_vars(x.chan, reads);
          expr_reads(x.value, written, reads);
        } else if constexpr (std::is_same_v<T, Process::Seq>) {
          for (const auto& it : x.items) walk(it, written, reads, track_writes);
        } else if constexpr (std::is_same_v<T, Process::Guard>) {
          expr_reads(x.cond, written, reads);
          auto w = written;
          walk(x.body, w, reads, track_writes);
        } else if constexpr (std::is_same_v<T, Process::IfElse>) {
          for (const auto& [c, b] : x.branches) {
            expr_reads(c, written, reads);
            auto w = written;
            walk(b, w, reads, track_writes);
          }
          auto w = written;
          walk(x.else_branch, w, reads, track_writes);
        } else if constexpr (std::is_same_v<T, Process::ExternalChoice>) {
          for (const auto& [c, b] : x.arms) {
            chan_vars(c.chan, reads);
            if (!c.is_input) expr_reads(c.value, written, reads);
            auto w = written;
            if (c.is_input && !c.var.empty()) w.insert(c.var);
            walk(b, w, reads, track_writes);
          }
        } else if constexpr (std::is_same_v<T, Process::InternalChoice>) {
          auto w1 = written;
          walk(x.left, w1, reads, track_writes);
          auto w2 = written;
          walk(x.right, w2, reads, track_writes);
        } else if constexpr (std::is_same_v<T, Process::Repeat>) {
          auto w = written;
          walk(x.body, w, reads, track_writes);
        } else if constexpr (std::is_same_v<T, Process::Ode>) {
          // ODE state variables count as free: evolution reads them.
          for (const auto& [v, rhs] : x.equations) {
            reads.insert(v);
            expr_reads(rhs, written, reads);
          }
          expr_reads(x.domain, written, reads);
        } else if constexpr (std::is_same_v<T, Process::Interrupt>) {
          for (const auto& [v, rhs] : x.equations) {
            reads.insert(v);
            expr_reads(rhs, written, reads);
          }
          expr_reads(x.domain, written, reads);
          for (const auto& [c, b] : x.arms) {
            chan_vars(c.chan, reads);
            if (!c.is_input) expr_reads(c.value, written, reads);
            auto w = written;
            if (c.is_input && !c.var.empty()) w.insert(c.var);
            walk(b, w, reads, track_writes);
          }
        } else if constexpr (std::is_same_v<T, Process::Wait>) {
          expr_reads(x.duration, written, reads);
        }
      },
      p->node);
}

void writes(const ProcPtr& p, std::set<std::string>& out) {
  if (!p) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Process::Assign>) {
          out.insert(x.var);
        } else if constexpr (std::is_same_v<T, Process::MultiAssign>) {
          for (const auto& v : x.vars) out.insert(v);
        } else if constexpr (std::is_same_v<T, Process::Input>) {
          if (!x.var.empty()) out.insert(x.var);
        } else if constexpr (std::is_same_v<T, Process::Seq>) {
          for (const auto& it : x.items) writes(it, out);
        } else if constexpr (std::is_same_v<T, Process::Guard>) {
          writes(x.body, out);
        } else if constexpr (std::is_same_v<T, Process::IfElse>) {
          for (const auto& [c, b] : x.branches) writes(b, out);
          writes(x.else_branch, out);
        } else if constexpr (std::is_same_v<T, Process::ExternalChoice>) {
          for (const auto& [c, b] : x.arms) {
            if (c.is_input && !c.var.empty()) out.insert(c.var);
            writes(b, out);
          }
        } else if constexpr (std::is_same_v<T, Process::InternalChoice>) {
          writes(x.left, out);
          writes(x.right, out);
        } else if constexpr (std::is_same_v<T, Process::Repeat>) {
          writes(x.body, out);
        } else if constexpr (std::is_same_v<T, Process::Ode>) {
          for (const auto& [v, rhs] : x.equations) out.insert(v);
        } else if constexpr (std::is_same_v<T, Process::Interrupt>) {
          for (const auto& [v, rhs] : x.equations) out.insert(v);
          for (const auto& [c, b] : x.arms) {
            if (c.is_input && !c.var.empty()) out.insert(c.var);
            writes(b, out);
          }
        }
      },
      p->node);
}

}  // namespace

std::set<std::string> free_vars(const ProcPtr& p) {
  std::set<std::string> written, reads;
  walk(p, written, reads, /*track_writes=*/true);
  return reads;
}

std::set<std::string> all_vars(const ProcPtr& p) {
  std::set<std::string> written, reads;
  walk(p, written, reads, /*track_writes=*/false);
  writes(p, reads);
  return reads;
}

ExprPtr substitute(const ExprPtr& e, const Substitution& sigma) {
  if (!e || sigma.empty()) return e;
  return std::visit(
      [&](const auto& x) -> ExprPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          auto it = sigma.find(x.name);
          return it != sigma.end() ? it->second : e;
        } else if constexpr (std::is_same_v<T, Expr::ListLit>) {
          std::vector<ExprPtr> items;
          items.reserve(x.items.size());
          bool changed = false;
          for (const auto& it : x.items) {
            items.push_back(substitute(it, sigma));
            changed |= items.back() != it;
          }
          return changed ? mk_list(std::move(items)) : e;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          ExprPtr a = substitute(x.a, sigma);
          return a == x.a ? e : mk_unary(x.op, std::move(a));
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          ExprPtr a = substitute(x.a, sigma);
          ExprPtr b = substitute(x.b, sigma);
          return (a == x.a && b == x.b) ? e : mk_binary(x.op, std::move(a), std::move(b));
        } else {
          return e;
        }
      },
      e->node);
}

namespace {

// A channel-arg variable is replaced only when sigma maps it to a string or
// integral literal; other mappings leave the reference in place.
ChannelRef subst_chan(const ChannelRef& ch, const Substitution& sigma) {
  ChannelRef out = ch;
  for (auto& a : out.args) {
    const auto* v = std::get_if<ChanVar>(&a);
    if (!v) continue;
    auto it = sigma.find(v->name);
    if (it == sigma.end()) continue;
    if (const auto* s = std::get_if<Expr::StringLit>(&it->second->node)) {
      a = s->v;
    } else if (const auto* r = std::get_if<Expr::RealLit>(&it->second->node)) {
      if (r->v == static_cast<std::int64_t>(r->v))
        a = static_cast<std::int64_t>(r->v);
    } else if (const auto* var = std::get_if<Expr::Var>(&it->second->node)) {
      a = ChanVar{var->name};
    }
  }
  return out;
}

CommEvent subst_comm(const CommEvent& c, const Substitution& sigma) {
  CommEvent out = c;
  out.chan = subst_chan(c.chan, sigma);
  if (!c.is_input) out.value = substitute(c.value, sigma);
  return out;
}

}  // namespace

ProcPtr substitute(const ProcPtr& p, const Substitution& sigma) {
  if (!p || sigma.empty()) return p;
  return std::visit(
      [&](const auto& x) -> ProcPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Process::Skip>) {
          return p;
        } else if constexpr (std::is_same_v<T, Process::Assign>) {
          return mk_assign(x.var, substitute(x.value, sigma));
        } else if constexpr (std::is_same_v<T, Process::MultiAssign>) {
          std::vector<ExprPtr> values;
          for (const auto& v : x.values) values.push_back(substitute(v, sigma));
          return mk_multi_assign(x.vars, std::move(values));
        } else if constexpr (std::is_same_v<T, Process::Input>) {
          return mk_input(subst_chan(x.chan, sigma), x.var);
        } else if constexpr (std::is_same_v<T, Process::Output>) {
          return mk_output(subst_chan(x.chan, sigma), substitute(x.value, sigma));
        } else if constexpr (std::is_same_v<T, Process::Seq>) {
          std::vector<ProcPtr> items;
          for (const auto& it : x.items) items.push_back(substitute(it, sigma));
          return mk_seq(std::move(items));
        } else if constexpr (std::is_same_v<T, Process::Guard>) {
          return mk_guard(substitute(x.cond, sigma), substitute(x.body, sigma));
        } else if constexpr (std::is_same_v<T, Process::IfElse>) {
          std::vector<std::pair<ExprPtr, ProcPtr>> branches;
          for (const auto& [c, b] : x.branches)
            branches.emplace_back(substitute(c, sigma), substitute(b, sigma));
          return mk_if(std::move(branches), substitute(x.else_branch, sigma));
        } else if constexpr (std::is_same_v<T, Process::ExternalChoice>) {
          std::vector<std::pair<CommEvent, ProcPtr>> arms;
          for (const auto& [c, b] : x.arms)
            arms.emplace_back(subst_comm(c, sigma), substitute(b, sigma));
          return mk_external_choice(std::move(arms));
        } else if constexpr (std::is_same_v<T, Process::InternalChoice>) {
          return mk_internal_choice(substitute(x.left, sigma), substitute(x.right, sigma));
        } else if constexpr (std::is_same_v<T, Process::Repeat>) {
          return mk_repeat(substitute(x.body, sigma));
        } else if constexpr (std::is_same_v<T, Process::Ode>) {
          std::vector<OdeEquation> eqs;
          for (const auto& [v, rhs] : x.equations)
            eqs.emplace_back(v, substitute(rhs, sigma));
          return mk_ode(std::move(eqs), substitute(x.domain, sigma));
        } else if constexpr (std::is_same_v<T, Process::Interrupt>) {
          std::vector<OdeEquation> eqs;
          for (const auto& [v, rhs] : x.equations)
            eqs.emplace_back(v, substitute(rhs, sigma));
          std::vector<std::pair<CommEvent, ProcPtr>> arms;
          for (const auto& [c, b] : x.arms)
            arms.emplace_back(subst_comm(c, sigma), substitute(b, sigma));
          return mk_interrupt(std::move(eqs), substitute(x.domain, sigma), std::move(arms));
        } else if constexpr (std::is_same_v<T, Process::Wait>) {
          return mk_wait(substitute(x.duration, sigma));
        } else {
          return p;
        }
      },
      p->node);
}

Substitution compose_substitution(const Substitution& sigma) {
  // Detect cycles: variable reachable from itself through sigma.
  for (const auto& [var, expr] : sigma) {
    std::set<std::string> seen{var};
    std::vector<std::string> frontier;
    collect_vars(expr, frontier);
    while (!frontier.empty()) {
      std::string v = frontier.back();
      frontier.pop_back();
      if (v == var)
        throw Error("cyclic_substitution", "substitution cycle through " + var);
      if (!seen.insert(v).second) continue;
      auto it = sigma.find(v);
      if (it != sigma.end()) collect_vars(it->second, frontier);
    }
  }
  Substitution out = sigma;
  for (std::size_t round = 0; round <= sigma.size(); ++round) {
    bool changed = false;
    for (auto& [var, expr] : out) {
      ExprPtr next = substitute(expr, out);
      if (!expr_equal(next, expr)) {
        expr = next;
        changed = true;
      }
    }
    if (!changed) return out;
  }
  throw Error("cyclic_substitution", "substitution failed to reach a fixpoint");
}

}  // namespace hcsp
