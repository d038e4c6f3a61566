#include "hcsp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "hcsp/errors.hpp"
#include "hcsp/pretty.hpp"
#include "hcsp/subst.hpp"

namespace hcsp {

void SimConfig::validate() const {
  if (max_time <= 0) throw Error("bad_config", "max time must be positive");
  if (rel_tol <= 0 || abs_tol <= 0 || boundary_tol <= 0 || output_step <= 0)
    throw Error("bad_config", "tolerances and output step must be positive");
}

// ---- RK4 ---------------------------------------------------------------

namespace {

std::vector<double> eval_rhs(const std::vector<OdeEquation>& eqs, const Store& base,
                             const std::vector<std::string>& vars,
                             const std::vector<double>& y) {
  Store st = base;
  for (std::size_t i = 0; i < vars.size(); ++i) st[vars[i]] = Value(y[i]);
  std::vector<double> out(eqs.size());
  for (std::size_t i = 0; i < eqs.size(); ++i) out[i] = eval_real(eqs[i].second, st);
  return out;
}

}  // namespace

void ode_step(const std::vector<OdeEquation>& equations, Store& state, double h) {
  if (h <= 0) throw Error("bad_config", "ode_step requires h > 0");
  std::vector<std::string> vars;
  std::vector<double> y0;
  for (const auto& [v, rhs] : equations) {
    vars.push_back(v);
    auto it = state.find(v);
    if (it == state.end())
      throw SimError("unbound_variable", "ODE state variable " + v + " is unset");
    y0.push_back(it->second.as_real());
  }
  const std::size_t n = vars.size();
  auto axpy = [&](const std::vector<double>& y, const std::vector<double>& k,
                  double a) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + a * k[i];
    return out;
  };
  std::vector<double> k1 = eval_rhs(equations, state, vars, y0);
  std::vector<double> k2 = eval_rhs(equations, state, vars, axpy(y0, k1, h / 2));
  std::vector<double> k3 = eval_rhs(equations, state, vars, axpy(y0, k2, h / 2));
  std::vector<double> k4 = eval_rhs(equations, state, vars, axpy(y0, k3, h));
  for (std::size_t i = 0; i < n; ++i) {
    double v = y0[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    if (!std::isfinite(v))
      throw SimError("numeric_overflow", "ODE state " + vars[i] + " became non-finite");
    state[vars[i]] = Value(v);
  }
}

std::pair<double, Store> locate_boundary(const std::vector<OdeEquation>& equations,
                                         const ExprPtr& domain, const Store& state,
                                         double t0, double t1, double tol) {
  if (tol <= 0) throw Error("bad_config", "boundary tolerance must be positive");
  if (!eval_bool(domain, state)) return {t0, state};
  // Wide brackets are probed with bounded substeps so the solution stays
  // accurate; a bracket within one integration substep uses a single step.
  const double h_sub = std::min(0.01, t1 - t0);
  auto probe = [&](double t) {
    Store st = state;
    double s = t0;
    while (t - s > h_sub * (1 + 1e-12)) {
      ode_step(equations, st, h_sub);
      s += h_sub;
    }
    if (t > s) ode_step(equations, st, t - s);
    return st;
  };
  Store at_end = probe(t1);
  if (eval_bool(domain, at_end))
    throw SimError("no_bracket", "domain still holds at the end of the bracket");
  double lo = t0, hi = t1;
  Store hi_state = std::move(at_end);
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // double precision exhausted
    Store st = probe(mid);
    if (eval_bool(domain, st)) {
      lo = mid;
    } else {
      hi = mid;
      hi_state = std::move(st);
    }
  }
  return {hi, hi_state};
}

// ---- simulator ----------------------------------------------------------

namespace {

enum class St { Running, WaitComm, WaitTime, Continuous, Terminated };

struct ArmRef {
  CommEvent ev;
  ProcPtr body;  // null for a bare Input/Output statement
};

struct Runner {
  std::string id;
  Store store;
  const std::map<std::string, ProcPtr>* procedures = nullptr;
  std::vector<ProcPtr> stack;
  St status = St::Running;

  std::vector<ArmRef> arms;  // WaitComm readiness or interrupt arms
  double wake_time = 0.0;

  std::vector<OdeEquation> eqs;
  ExprPtr domain;
  double ode_h = 0.0;         // internal integration substep for this evolution
  bool pending_exit = false;  // boundary reached; comms get one chance first

  std::vector<std::string> log_vars;
  std::vector<std::size_t> log_cols;
};

struct Match {
  std::size_t sender, receiver;       // runner indices
  std::size_t sender_arm, receiver_arm;
};

class Sim {
 public:
  Sim(const std::vector<InstProcess>& procs, const SimConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    rng_.seed(cfg_.seed);
    for (const auto& ip : procs) {
      Runner r;
      r.id = ip.id;
      r.procedures = &ip.procedures;
      r.stack.push_back(ip.body);
      if (!ip.outputs.empty()) {
        r.log_vars = ip.outputs;
      } else {
        auto vars = all_vars_of(ip);
        r.log_vars.assign(vars.begin(), vars.end());
      }
      runners_.push_back(std::move(r));
    }
    for (auto& r : runners_) {
      for (const auto& v : r.log_vars) {
        r.log_cols.push_back(trace_.columns.size());
        trace_.columns.push_back(r.id + "." + v);
      }
    }
  }

  Trace run() {
    snapshot_journal();
    for (;;) {
      settle();
      snapshot_journal();
      if (all_terminated()) break;
      if (now_ >= cfg_.max_time - 1e-15) {
        truncate();
        break;
      }
      if (!advance_time()) break;
    }
    for (auto& r : runners_) trace_.final_states[r.id] = r.store;
    trace_.end_time = std::min(now_, cfg_.max_time);
    trace_.check_well_formed();
    return std::move(trace_);
  }

 private:
  static std::set<std::string> all_vars_of(const InstProcess& ip) {
    std::set<std::string> vars = all_vars(ip.body);
    for (const auto& [name, body] : ip.procedures) {
      auto more = all_vars(body);
      vars.insert(more.begin(), more.end());
    }
    return vars;
  }

  [[noreturn]] void fault(const Runner& r, const char* code, const std::string& msg) {
    throw SimError(code, r.id + " at t=" + format_real(now_) + ": " + msg, now_);
  }

  void count_event() {
    if (trace_.events.size() >= cfg_.max_events)
      throw SimError("step_budget",
                     "event budget exhausted at t=" + format_real(now_), now_);
    if (now_ - last_event_time_ < cfg_.boundary_tol) {
      if (++fast_events_ > cfg_.zeno_limit)
        throw SimError("step_budget",
                       "no time progress over " + std::to_string(fast_events_) +
                           " events at t=" + format_real(now_),
                       now_);
    } else {
      fast_events_ = 0;
    }
    last_event_time_ = now_;
  }

  // ---- discrete execution ----

  void run_until_block(Runner& r) {
    std::size_t steps = 0;
    while (r.status == St::Running) {
      if (++steps > 2000000)
        fault(r, "step_budget", "discrete execution makes no time progress");
      if (r.stack.empty()) {
        r.status = St::Terminated;
        Event ev;
        ev.kind = Event::Kind::Terminate;
        ev.time = now_;
        ev.instance = r.id;
        trace_.events.push_back(ev);
        snapshot_journal();
        return;
      }
      ProcPtr p = r.stack.back();
      r.stack.pop_back();
      exec_node(r, p);
    }
  }

  void exec_node(Runner& r, const ProcPtr& p) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Process::Skip>) {
            // nothing
          } else if constexpr (std::is_same_v<T, Process::Assign>) {
            r.store[x.var] = eval_in(r, x.value);
          } else if constexpr (std::is_same_v<T, Process::MultiAssign>) {
            std::vector<Value> vals;
            vals.reserve(x.values.size());
            for (const auto& e : x.values) vals.push_back(eval_in(r, e));
            for (std::size_t i = 0; i < x.vars.size(); ++i)
              r.store[x.vars[i]] = std::move(vals[i]);
          } else if constexpr (std::is_same_v<T, Process::Input>) {
            require_concrete(r, x.chan);
            ArmRef arm;
            arm.ev.chan = x.chan;
            arm.ev.is_input = true;
            arm.ev.var = x.var;
            r.arms = {std::move(arm)};
            r.status = St::WaitComm;
          } else if constexpr (std::is_same_v<T, Process::Output>) {
            require_concrete(r, x.chan);
            ArmRef arm;
            arm.ev.chan = x.chan;
            arm.ev.is_input = false;
            arm.ev.value = x.value;
            r.arms = {std::move(arm)};
            r.status = St::WaitComm;
          } else if constexpr (std::is_same_v<T, Process::Seq>) {
            for (auto it = x.items.rbegin(); it != x.items.rend(); ++it)
              r.stack.push_back(*it);
          } else if constexpr (std::is_same_v<T, Process::Guard>) {
            if (eval_cond(r, x.cond)) r.stack.push_back(x.body);
          } else if constexpr (std::is_same_v<T, Process::IfElse>) {
            for (const auto& [c, b] : x.branches) {
              if (eval_cond(r, c)) {
                r.stack.push_back(b);
                return;
              }
            }
            r.stack.push_back(x.else_branch);
          } else if constexpr (std::is_same_v<T, Process::ExternalChoice>) {
            r.arms.clear();
            for (const auto& [ev, body] : x.arms) {
              require_concrete(r, ev.chan);
              r.arms.push_back({ev, body});
            }
            r.status = St::WaitComm;
          } else if constexpr (std::is_same_v<T, Process::InternalChoice>) {
            r.stack.push_back((rng_() & 1u) == 0 ? x.left : x.right);
          } else if constexpr (std::is_same_v<T, Process::Repeat>) {
            r.stack.push_back(p);
            r.stack.push_back(x.body);
          } else if constexpr (std::is_same_v<T, Process::Ode>) {
            if (!eval_cond(r, x.domain)) return;  // zero-duration evolution
            enter_continuous(r, x.equations, x.domain, {});
          } else if constexpr (std::is_same_v<T, Process::Interrupt>) {
            std::vector<ArmRef> arms;
            for (const auto& [ev, body] : x.arms) {
              require_concrete(r, ev.chan);
              arms.push_back({ev, body});
            }
            if (arms.empty())
              fault(r, "bad_config", "interrupt with no communications");
            enter_continuous(r, x.equations, x.domain, std::move(arms));
            if (!eval_cond(r, x.domain)) {
              // Boundary already reached: communications get priority at
              // this instant, then the evolution exits with zero duration.
              r.pending_exit = true;
            }
          } else if constexpr (std::is_same_v<T, Process::Wait>) {
            double d = eval_num(r, x.duration);
            if (d > 0) {
              r.wake_time = now_ + d;
              r.status = St::WaitTime;
            }
          } else if constexpr (std::is_same_v<T, Process::ProcCall>) {
            auto it = r.procedures->find(x.name);
            if (it == r.procedures->end())
              fault(r, "unknown_procedure", "call to undefined procedure " + x.name);
            r.stack.push_back(it->second);
          }
        },
        p->node);
  }

  void enter_continuous(Runner& r, const std::vector<OdeEquation>& eqs,
                        const ExprPtr& domain, std::vector<ArmRef> arms) {
    for (const auto& [v, rhs] : eqs)
      if (!r.store.count(v))
        fault(r, "unbound_variable", "ODE state variable " + v + " is unset");
    r.eqs = eqs;
    r.domain = domain;
    r.arms = std::move(arms);
    r.pending_exit = false;
    r.status = St::Continuous;
    r.ode_h = pick_substep(r);
  }

  // Fixed internal substep for this evolution: start from the output step
  // and halve while a step-doubling probe disagrees beyond tolerance.
  double pick_substep(Runner& r) {
    double h = cfg_.output_step;
    if (r.eqs.empty()) return h;
    for (int i = 0; i < 6; ++i) {
      Store one = r.store;
      ode_step(r.eqs, one, h);
      Store two = r.store;
      ode_step(r.eqs, two, h / 2);
      ode_step(r.eqs, two, h / 2);
      double err = 0.0, scale = 0.0;
      for (const auto& [v, rhs] : r.eqs) {
        double a = one.at(v).as_real(), b = two.at(v).as_real();
        err = std::max(err, std::fabs(a - b));
        scale = std::max(scale, std::fabs(b));
      }
      if (err <= std::max(cfg_.abs_tol, cfg_.rel_tol * scale)) break;
      h /= 2;
    }
    return h;
  }

  Value eval_in(Runner& r, const ExprPtr& e) {
    try {
      return eval_expr(e, r.store);
    } catch (const SimError& err) {
      throw SimError(err.code(),
                     r.id + " at t=" + format_real(now_) + ": " +
                         err.what() + " in `" + pretty_print(e) + "`",
                     now_);
    }
  }

  bool eval_cond(Runner& r, const ExprPtr& e) {
    Value v = eval_in(r, e);
    if (!v.is_bool())
      fault(r, "runtime_type_error",
            "condition `" + pretty_print(e) + "` is not boolean");
    return v.as_bool();
  }

  double eval_num(Runner& r, const ExprPtr& e) {
    Value v = eval_in(r, e);
    if (!v.is_real())
      fault(r, "runtime_type_error",
            "expression `" + pretty_print(e) + "` is not a real");
    return v.as_real();
  }

  void require_concrete(Runner& r, const ChannelRef& ch) {
    if (!ch.is_concrete())
      fault(r, "unknown_channel_universe",
            "parameterized channel " + ch.key() + " reached the simulator");
  }

  // ---- communication matching ----

  bool arms_ready(const Runner& r) const {
    return (r.status == St::WaitComm || r.status == St::Continuous) && !r.arms.empty();
  }

  std::optional<Match> find_match() const {
    std::optional<Match> best;
    std::string best_key;
    for (std::size_t s = 0; s < runners_.size(); ++s) {
      if (!arms_ready(runners_[s])) continue;
      for (std::size_t sa = 0; sa < runners_[s].arms.size(); ++sa) {
        const ArmRef& out = runners_[s].arms[sa];
        if (out.ev.is_input) continue;
        for (std::size_t t = 0; t < runners_.size(); ++t) {
          if (t == s || !arms_ready(runners_[t])) continue;
          for (std::size_t ta = 0; ta < runners_[t].arms.size(); ++ta) {
            const ArmRef& in = runners_[t].arms[ta];
            if (!in.ev.is_input || !(in.ev.chan == out.ev.chan)) continue;
            std::string key = out.ev.chan.key() + "\x01" + runners_[s].id + "\x01" +
                              runners_[t].id;
            if (!best || key < best_key) {
              best = Match{s, t, sa, ta};
              best_key = key;
            }
            break;  // lowest arm index of this receiver suffices
          }
        }
        // (keep scanning: another channel may order lower)
      }
    }
    return best;
  }

  void unblock_after_comm(Runner& r, std::size_t arm_idx) {
    ProcPtr body = r.arms[arm_idx].body;
    r.arms.clear();
    r.eqs.clear();
    r.domain = nullptr;
    r.pending_exit = false;
    if (body) r.stack.push_back(body);
    r.status = St::Running;
  }

  void exec_comm(const Match& m) {
    Runner& snd = runners_[m.sender];
    Runner& rcv = runners_[m.receiver];
    const ArmRef& out = snd.arms[m.sender_arm];
    const ArmRef& in = rcv.arms[m.receiver_arm];
    Value v = out.ev.value ? eval_in(snd, out.ev.value) : Value(0.0);
    if (!in.ev.var.empty()) rcv.store[in.ev.var] = v;

    Event ev;
    ev.kind = Event::Kind::Comm;
    ev.time = now_;
    ev.chan = out.ev.chan;
    ev.value = v;
    ev.sender = snd.id;
    ev.receiver = rcv.id;
    trace_.events.push_back(ev);
    count_event();

    unblock_after_comm(snd, m.sender_arm);
    unblock_after_comm(rcv, m.receiver_arm);
    snapshot_journal();
  }

  void settle() {
    for (;;) {
      bool ran = false;
      for (auto& r : runners_) {
        if (r.status == St::Running) {
          run_until_block(r);
          ran = true;
        }
      }
      auto m = find_match();
      if (m) {
        exec_comm(*m);
        continue;
      }
      if (!ran) break;
    }
    // Boundary-reached evolutions found no communication at this instant:
    // they exit now. Plain ODE statements never wait here.
    bool exited = false;
    for (auto& r : runners_) {
      if (r.status == St::Continuous && r.pending_exit) {
        exit_evolution(r);
        exited = true;
      }
    }
    if (exited) settle();
  }

  void exit_evolution(Runner& r) {
    r.arms.clear();
    r.eqs.clear();
    r.domain = nullptr;
    r.pending_exit = false;
    r.status = St::Running;
  }

  bool all_terminated() const {
    return std::all_of(runners_.begin(), runners_.end(),
                       [](const Runner& r) { return r.status == St::Terminated; });
  }

  // ---- time advance ----

  double next_grid_tick(double t) const {
    double k = std::floor(t / cfg_.output_step + 1e-9) + 1.0;
    return k * cfg_.output_step;
  }

  // Advances global time to the next event: a wake-up, a domain boundary,
  // or the horizon. All evolving instances march together over shared stop
  // points (grid ticks and integration substeps); the first domain exit is
  // located by bisection and cuts the segment short for everyone.
  bool advance_time() {
    double horizon = cfg_.max_time;
    bool has_timer = false, has_cont = false;
    for (const auto& r : runners_) {
      if (r.status == St::WaitTime) {
        horizon = std::min(horizon, r.wake_time);
        has_timer = true;
      } else if (r.status == St::Continuous) {
        has_cont = true;
      }
    }
    if (!has_timer && !has_cont) {
      std::string blocked;
      for (const auto& r : runners_)
        if (r.status == St::WaitComm) blocked += (blocked.empty() ? "" : ", ") + r.id;
      throw SimError("deadlock",
                     "deadlock at t=" + format_real(now_) + "; blocked: " + blocked,
                     now_);
    }

    Event ev;
    ev.kind = Event::Kind::Evolve;
    ev.time = now_;
    for (const auto& r : runners_) {
      if (arms_ready(r)) {
        for (const auto& a : r.arms)
          ev.readiness.push_back({r.id, a.ev.chan, a.ev.is_input});
      }
    }

    std::vector<Runner*> evolving;
    double h_min = cfg_.output_step;
    for (auto& r : runners_) {
      if (r.status == St::Continuous && !r.eqs.empty()) {
        evolving.push_back(&r);
        h_min = std::min(h_min, r.ode_h);
      }
    }

    double t = now_;
    while (t < horizon - 1e-15) {
      double stop = std::min({horizon, next_grid_tick(t), t + h_min});
      double h = stop - t;

      std::vector<Store> trial(evolving.size());
      std::vector<Runner*> crossers;
      for (std::size_t i = 0; i < evolving.size(); ++i) {
        trial[i] = evolving[i]->store;
        ode_step(evolving[i]->eqs, trial[i], h);
        if (!eval_bool(evolving[i]->domain, trial[i]))
          crossers.push_back(evolving[i]);
      }

      if (crossers.empty()) {
        for (std::size_t i = 0; i < evolving.size(); ++i)
          evolving[i]->store = std::move(trial[i]);
        t = stop;
        now_ = t;
        if (t < horizon - 1e-15) {
          ev.samples.push_back(make_sample(t));
          snapshot_journal();
        }
        continue;
      }

      // Locate the earliest exit within (t, stop].
      double tb = stop;
      std::map<std::string, std::pair<double, Store>> located;
      for (Runner* r : crossers) {
        auto loc = locate_boundary(r->eqs, r->domain, r->store, t, stop,
                                   cfg_.boundary_tol);
        tb = std::min(tb, loc.first);
        located[r->id] = std::move(loc);
      }
      for (Runner* r : evolving) {
        auto it = located.find(r->id);
        if (it != located.end() && it->second.first <= tb + 1e-15) {
          r->store = it->second.second;
          r->pending_exit = true;
        } else if (tb > t) {
          ode_step(r->eqs, r->store, tb - t);
          // A non-minimal crosser re-enters the loop; its own exit is
          // located again from the new state on a later iteration.
        }
      }
      t = tb;
      now_ = t;
      break;
    }
    if (t >= horizon - 1e-15) {
      t = horizon;
      now_ = horizon;
      for (auto& r : runners_) {
        if (r.status == St::WaitTime && r.wake_time <= horizon + 1e-15)
          r.status = St::Running;
      }
    }

    ev.end_time = t;
    ev.samples.push_back(make_sample(t));
    snapshot_journal();
    trace_.events.push_back(std::move(ev));
    count_event();
    return true;
  }

  void truncate() {
    Event ev;
    ev.kind = Event::Kind::Terminate;
    ev.time = cfg_.max_time;
    ev.message = "max time reached";
    trace_.events.push_back(ev);
    snapshot_journal();
  }

  StateSample make_sample(double t) {
    StateSample s;
    s.time = t;
    s.values.resize(trace_.columns.size());
    for (const auto& r : runners_) {
      for (std::size_t i = 0; i < r.log_vars.size(); ++i) {
        auto it = r.store.find(r.log_vars[i]);
        if (it != r.store.end()) s.values[r.log_cols[i]] = it->second;
      }
    }
    return s;
  }

  void snapshot_journal() { trace_.journal.push_back(make_sample(now_)); }

  SimConfig cfg_;
  std::vector<Runner> runners_;
  Trace trace_;
  double now_ = 0.0;
  double last_event_time_ = -1.0;
  std::size_t fast_events_ = 0;
  std::mt19937 rng_;
};

}  // namespace

Trace simulate(const std::vector<InstProcess>& procs, const SimConfig& cfg) {
  return Sim(procs, cfg).run();
}

Trace simulate(const System& sys, const SimConfig& cfg) {
  return simulate(preprocess(sys), cfg);
}

}  // namespace hcsp
