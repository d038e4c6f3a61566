#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hcsp/parser.hpp"
#include "hcsp/sim.hpp"
#include "hcsp/trace_io.hpp"

using namespace hcsp;

namespace {

Trace sim_text(const std::string& text, double max_time = 10.0,
               double output_step = 0.01) {
  SimConfig cfg;
  cfg.max_time = max_time;
  cfg.output_step = output_step;
  return simulate(parse_system(text), cfg);
}

double final_real(const Trace& tr, const std::string& inst, const std::string& var) {
  return tr.final_states.at(inst).at(var).as_real();
}

std::string csv_string(const Trace& tr, double step) {
  std::string path = std::string(HCSP_BINARY_DIR) + "/tmp_trace.csv";
  export_trace_csv(tr, path, step);
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("rk4 single steps match closed forms") {
  // constant rhs is exact
  Store st{{"x", Value(0.0)}};
  ode_step({{"x", mk_real(1.0)}}, st, 0.1);
  CHECK(st.at("x").as_real() == doctest::Approx(0.1).epsilon(1e-15));

  // exponential within 1e-7 of e^0.1
  st = {{"x", Value(1.0)}};
  ode_step({{"x", mk_var("x")}}, st, 0.1);
  CHECK(std::fabs(st.at("x").as_real() - std::exp(0.1)) < 1e-7);

  // rotation within 1e-9 of (cos h, -sin h)
  st = {{"x", Value(1.0)}, {"y", Value(0.0)}};
  ode_step({{"x", mk_var("y")}, {"y", mk_unary(UnOp::Neg, mk_var("x"))}}, st, 0.01);
  CHECK(std::fabs(st.at("x").as_real() - std::cos(0.01)) < 1e-9);
  CHECK(std::fabs(st.at("y").as_real() - (-std::sin(0.01))) < 1e-9);
}

TEST_CASE("rk4 order: halving h cuts the endpoint error ~16x") {
  auto integrate = [](double h) {
    Store st{{"x", Value(1.0)}};
    int n = static_cast<int>(std::lround(1.0 / h));
    for (int i = 0; i < n; ++i) ode_step({{"x", mk_var("x")}}, st, h);
    return std::fabs(st.at("x").as_real() - std::exp(1.0));
  };
  double e1 = integrate(0.1);
  double e2 = integrate(0.05);
  double ratio = e1 / e2;
  CHECK(ratio >= 14.0);
  CHECK(ratio <= 18.0);
}

TEST_CASE("energy drift of the rotation stays below 1e-6 over one turn") {
  Store st{{"x", Value(1.0)}, {"y", Value(0.0)}};
  std::vector<OdeEquation> eqs{{"x", mk_var("y")},
                               {"y", mk_unary(UnOp::Neg, mk_var("x"))}};
  double h = 1e-3;
  int n = static_cast<int>(std::ceil(2 * M_PI / h));
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    ode_step(eqs, st, h);
    double r = st.at("x").as_real() * st.at("x").as_real() +
               st.at("y").as_real() * st.at("y").as_real();
    worst = std::max(worst, std::fabs(r - 1.0));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("locate_boundary") {
  Store st{{"x", Value(0.0)}};
  auto domain = parse_expr_text("x < 2");

  // linear crossing at t = 1
  auto [t1, s1] = locate_boundary({{"x", mk_real(2.0)}}, domain, st, 0.0, 2.0, 1e-9);
  CHECK(std::fabs(t1 - 1.0) <= 1e-9);
  CHECK(s1.at("x").as_real() >= 2.0);

  // exponential: x' = x, x0 = 1, boundary x < e crossed at t = 1
  Store st2{{"x", Value(1.0)}};
  auto dom2 = parse_expr_text("x < 2.718281828459045");
  auto [t2, s2] = locate_boundary({{"x", mk_var("x")}}, dom2, st2, 0.0, 2.0, 1e-9);
  CHECK(std::fabs(t2 - 1.0) <= 1e-6);

  // domain already false: zero duration
  Store st3{{"x", Value(5.0)}};
  auto [t3, s3] = locate_boundary({{"x", mk_real(1.0)}}, domain, st3, 4.0, 5.0, 1e-9);
  CHECK(t3 == 4.0);

  // no bracket
  Store st4{{"x", Value(0.0)}};
  CHECK_THROWS_AS(
      locate_boundary({{"x", mk_real(0.1)}}, domain, st4, 0.0, 1.0, 1e-9),
      SimError);
}

TEST_CASE("single ODE runs to its boundary") {
  Trace tr = sim_text("x := 0; <x_dot = 1 & x < 2>;");
  CHECK(std::fabs(tr.end_time - 2.0) <= 1e-6);
  CHECK(std::fabs(final_real(tr, "main", "x") - 2.0) <= 1e-6);
  bool saw_terminate = false;
  for (const auto& e : tr.events)
    if (e.kind == Event::Kind::Terminate && e.instance == "main") saw_terminate = true;
  CHECK(saw_terminate);
}

TEST_CASE("two instances synchronize at time zero") {
  Trace tr = sim_text(
      "module S: begin ch!1; end endmodule\n"
      "module R: begin ch?x; end endmodule\n"
      "system s = S() || r = R();\n");
  REQUIRE(!tr.events.empty());
  int comms = 0;
  for (const auto& e : tr.events) {
    if (e.kind == Event::Kind::Comm) {
      ++comms;
      CHECK(e.time == 0.0);
      CHECK(e.chan.key() == "ch");
      CHECK(e.value == Value(1.0));
      CHECK(e.sender == "s");
      CHECK(e.receiver == "r");
    }
  }
  CHECK(comms == 1);
  CHECK(final_real(tr, "r", "x") == 1.0);
}

TEST_CASE("sawtooth written directly in the language") {
  Trace tr = sim_text(
      "x := 0; y := 1; t := 0;\n"
      "(\n"
      "  <x_dot = y, t_dot = 1 & t < 1>;\n"
      "  y := -y;\n"
      "  t := 0;\n"
      ")**;\n",
      10.0);
  // y alternates between 1 and -1; x stays within [0, 1 + 1e-3]
  int xcol = tr.column_index("main.x");
  int ycol = tr.column_index("main.y");
  REQUIRE(xcol >= 0);
  REQUIRE(ycol >= 0);
  for (const auto& row : tr.resample(0.01)) {
    REQUIRE(row.values[xcol].has_value());
    double x = row.values[xcol]->as_real();
    double y = row.values[ycol]->as_real();
    CHECK(x >= -1e-9);
    CHECK(x <= 1.0 + 1e-3);
    CHECK((std::fabs(y - 1) < 1e-12 || std::fabs(y + 1) < 1e-12));
  }
  // x returns to ~0 at even integer times
  for (double te = 2.0; te <= 10.0; te += 2.0) {
    auto v = tr.sample_at(static_cast<std::size_t>(xcol), te + 1e-9);
    REQUIRE(v.has_value());
    CHECK(std::fabs(v->as_real()) <= 1e-3);
  }
}

TEST_CASE("wait sequences and zero waits") {
  Trace tr = sim_text("wait(0.5); wait(0); wait(-1); wait(0.5); done := 1;");
  CHECK(final_real(tr, "main", "done") == 1.0);
  CHECK(tr.end_time == doctest::Approx(1.0));
}

TEST_CASE("guard with false condition proceeds in zero time") {
  Trace tr = sim_text("x := 0; x > 1 --> y := 9; z := 3;");
  CHECK(final_real(tr, "main", "z") == 3.0);
  CHECK(tr.final_states.at("main").count("y") == 0);
  CHECK(tr.end_time == 0.0);
}

TEST_CASE("interrupt: communication preempts the evolution") {
  Trace tr = sim_text(
      "module P: begin\n"
      "  x := 0; t := 0; got := 0; done := 0;\n"
      "  <x_dot = 1, t_dot = 1 & t < 5> |> [] (\n"
      "    ch?x --> got := 1;\n"
      "  );\n"
      "  done := 1;\n"
      "end endmodule\n"
      "module Q: begin wait(1); ch!42; end endmodule\n"
      "system p = P() || q = Q();\n");
  CHECK(final_real(tr, "p", "got") == 1.0);
  CHECK(final_real(tr, "p", "done") == 1.0);
  CHECK(final_real(tr, "p", "x") == 42.0);
  for (const auto& e : tr.events)
    if (e.kind == Event::Kind::Comm) CHECK(e.time == doctest::Approx(1.0));
}

TEST_CASE("interrupt: boundary and communication at the same instant -> comm wins") {
  Trace tr = sim_text(
      "module P: begin\n"
      "  t := 0; got := 0;\n"
      "  <t_dot = 1 & t < 1> |> [] (\n"
      "    ch?v --> got := 1;\n"
      "  );\n"
      "end endmodule\n"
      "module Q: begin wait(1); ch!5; end endmodule\n"
      "system p = P() || q = Q();\n");
  CHECK(final_real(tr, "p", "got") == 1.0);
}

TEST_CASE("interrupt with an initially false domain still offers its comms once") {
  Trace tr = sim_text(
      "module P: begin\n"
      "  t := 5; got := 0;\n"
      "  <t_dot = 1 & t < 1> |> [] (\n"
      "    ch?v --> got := 1;\n"
      "  );\n"
      "end endmodule\n"
      "module Q: begin ch!5; wait(1); end endmodule\n"
      "system p = P() || q = Q();\n");
  // Q is ready at the same instant, so the communication fires.
  CHECK(final_real(tr, "p", "got") == 1.0);
}

TEST_CASE("deadlock is reported with the blocked instances") {
  CHECK_THROWS_WITH_AS(sim_text("module P: begin ch?x; end endmodule\nsystem p = P();\n"),
                       doctest::Contains("deadlock"), SimError);
}

TEST_CASE("division by zero carries the expression") {
  CHECK_THROWS_WITH_AS(sim_text("x := 0; y := 1 / x;"), doctest::Contains("1 / x"),
                       SimError);
}

TEST_CASE("zeno loops trip the step budget") {
  CHECK_THROWS_AS(
      sim_text("module A: begin (\n  ch!1;\n)**; end endmodule\n"
               "module B: begin (\n  ch?x;\n)**; end endmodule\n"
               "system a = A() || b = B();\n"),
      SimError);
}

TEST_CASE("internal choice is reproducible under a fixed seed") {
  const std::string text = "(\n  x := 1;\n) |~| (\n  x := 2;\n);";
  double first = final_real(sim_text(text), "main", "x");
  for (int i = 0; i < 4; ++i) CHECK(final_real(sim_text(text), "main", "x") == first);
}

TEST_CASE("determinism: identical runs export identical bytes") {
  const std::string text =
      "module Plant: begin\n"
      "  v := 0; a := 1; s := 0;\n"
      "  (\n"
      "    s := 0;\n"
      "    <v_dot = a, s_dot = 1 & s < 0.1> |> [] (\n"
      "      set?a --> skip;\n"
      "    );\n"
      "    s >= 0.1 --> pub!v;\n"
      "  )**;\n"
      "end endmodule\n"
      "module Ctrl: begin\n"
      "  (\n"
      "    pub?v;\n"
      "    v > 0.5 --> set!0 - v;\n"
      "    wait(0.05);\n"
      "  )**;\n"
      "end endmodule\n"
      "system plant = Plant() || ctrl = Ctrl();\n";
  Trace t1 = sim_text(text, 2.0);
  Trace t2 = sim_text(text, 2.0);
  CHECK(csv_string(t1, 0.01) == csv_string(t2, 0.01));
  CHECK(t1.events.size() == t2.events.size());
}

TEST_CASE("earliest sync: no evolve window shows both endpoints ready") {
  Trace tr = sim_text(
      "module P: begin wait(0.25); ch!1; done := 1; end endmodule\n"
      "module Q: begin ch?x; end endmodule\n"
      "system p = P() || q = Q();\n");
  double comm_time = -1;
  for (const auto& e : tr.events)
    if (e.kind == Event::Kind::Comm) comm_time = e.time;
  REQUIRE(comm_time == doctest::Approx(0.25));
  for (const auto& e : tr.events) {
    if (e.kind != Event::Kind::Evolve || e.end_time > comm_time + 1e-12) continue;
    bool in_ready = false, out_ready = false;
    for (const auto& r : e.readiness) {
      if (r.chan.key() == "ch" && r.is_input) in_ready = true;
      if (r.chan.key() == "ch" && !r.is_input) out_ready = true;
    }
    CHECK_FALSE((in_ready && out_ready));
  }
}

TEST_CASE("csv export round trips through the loader") {
  Trace tr = sim_text("x := 0; <x_dot = 1 & x < 1>; s := \"done\";");
  std::string path = std::string(HCSP_BINARY_DIR) + "/roundtrip.csv";
  export_trace_csv(tr, path, 0.01);
  Trace back = load_trace_csv(path);
  CHECK(back.columns == tr.columns);
  auto rows = tr.resample(0.01);
  CHECK(back.journal.size() == rows.size());
  int xcol = tr.column_index("main.x");
  CHECK(back.journal.back().values[xcol]->as_real() ==
        doctest::Approx(rows.back().values[xcol]->as_real()));
}

TEST_CASE("domain safety: evolve samples respect the domain") {
  Trace tr = sim_text("x := 0; <x_dot = 2 & x < 2>;");
  int xcol = tr.column_index("main.x");
  for (const auto& e : tr.events) {
    if (e.kind != Event::Kind::Evolve) continue;
    for (const auto& s : e.samples) {
      REQUIRE(s.values[xcol].has_value());
      CHECK(s.values[xcol]->as_real() <= 2.0 + 1e-6);
    }
  }
  CHECK(tr.end_time == doctest::Approx(1.0).epsilon(1e-9));
}
