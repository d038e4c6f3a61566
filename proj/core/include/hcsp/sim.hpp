#ifndef HCSP_SIM_HPP
#define HCSP_SIM_HPP

#include <utility>
#include <vector>

#include "hcsp/analysis.hpp"
#include "hcsp/eval.hpp"
#include "hcsp/process.hpp"
#include "hcsp/trace.hpp"

namespace hcsp {

struct SimConfig {
  double max_time = 10.0;
  std::size_t max_events = 1000000;
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  double boundary_tol = 1e-9;   // seconds
  double output_step = 0.01;    // sampling grid for logs and plots
  unsigned seed = 0;            // internal choice
  std::size_t zeno_limit = 10000;

  void validate() const;
};

// One classical 4th-order Runge-Kutta step of size h, in place. Variables
// not bound by an equation are held constant. Throws
// SimError("numeric_overflow") on non-finite results.
void ode_step(const std::vector<OdeEquation>& equations, Store& state, double h);

// Locates the domain exit inside [t0, t1], where `state` holds at t0 and
// the numeric solution violates `domain` at t1. Probes use a single RK4
// step from t0. Returns the first known-false time (within tol of the
// crossing) and the state there. If the domain is already false at t0,
// returns t0 with the initial state. Throws SimError("no_bracket") when
// the domain still holds at t1.
std::pair<double, Store> locate_boundary(const std::vector<OdeEquation>& equations,
                                         const ExprPtr& domain, const Store& state,
                                         double t0, double t1, double tol);

// Deterministic event-loop simulation of preprocessed instances.
Trace simulate(const std::vector<InstProcess>& procs, const SimConfig& cfg);

// Preprocesses (instantiate + expand) and simulates.
Trace simulate(const System& sys, const SimConfig& cfg);

}  // namespace hcsp

#endif
