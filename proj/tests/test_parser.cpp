#include "doctest.h"

#include <string>
#include <vector>

#include "hcsp/parser.hpp"
#include "hcsp/pretty.hpp"
#include "hcsp/process.hpp"

using namespace hcsp;

namespace {

void check_roundtrip(const std::string& text) {
  CAPTURE(text);
  ProcPtr ast = parse_process(text);
  std::string printed = pretty_print(ast);
  CAPTURE(printed);
  ProcPtr back = parse_process(printed);
  CHECK(proc_equal(ast, back));
  // second print is a fixed point
  CHECK(pretty_print(back) == printed);
}

}  // namespace

TEST_CASE("statement forms parse") {
  CHECK(is_skip(parse_process("skip;")));

  ProcPtr p = parse_process("z := s; y := 2 * x; s := y;");
  const auto* seq = std::get_if<Process::Seq>(&p->node);
  REQUIRE(seq != nullptr);
  CHECK(seq->items.size() == 3);

  ProcPtr ode = parse_process("<t_dot = 1 & t < 1>;");
  const auto* o = std::get_if<Process::Ode>(&ode->node);
  REQUIRE(o != nullptr);
  CHECK(o->equations.size() == 1);
  CHECK(o->equations[0].first == "t");
  CHECK(pretty_print(o->domain) == "t < 1");
}

TEST_CASE("external choice with parameterized channels") {
  ProcPtr p = parse_process(
      "[] (\n"
      "  reqProcessor[0][_tid]?prior -->\n"
      "    Pool_now := push(Pool_now, _tid);\n"
      "    run_now := head(Pool_now);\n"
      "    run[0][run_now]!;,\n"
      "  free[0][_tid]? --> skip;\n"
      ");\n");
  const auto* ec = std::get_if<Process::ExternalChoice>(&p->node);
  REQUIRE(ec != nullptr);
  REQUIRE(ec->arms.size() == 2);
  const CommEvent& ev = ec->arms[0].first;
  CHECK(ev.chan.name == "reqProcessor");
  REQUIRE(ev.chan.args.size() == 2);
  CHECK(std::get<std::int64_t>(ev.chan.args[0]) == 0);
  CHECK(std::get<ChanVar>(ev.chan.args[1]).name == "_tid");
  CHECK(ev.is_input);
  CHECK(ev.var == "prior");
  CHECK_FALSE(ev.chan.is_concrete());
}

TEST_CASE("module with procedures and instantiation") {
  System sys = parse_system(
      "module Sched(pid):\n"
      "begin\n"
      "  output run_now;\n"
      "  procedure Pick begin run_now := head(Pool); end\n"
      "  Pool := [];\n"
      "  (\n"
      "    [] (\n"
      "      reqProcessor[pid][_tid]?prior -->\n"
      "        Pool := push(Pool, _tid);\n"
      "        Pick;\n"
      "    );\n"
      "  )**;\n"
      "end\n"
      "endmodule\n"
      "system s0 = Sched(0);\n");
  REQUIRE(sys.instances.size() == 1);
  const Module& m = sys.modules.at("Sched");
  CHECK(m.params == std::vector<std::string>{"pid"});
  CHECK(m.procedures.count("Pick") == 1);
  CHECK(m.outputs == std::vector<std::string>{"run_now"});

  // minimal spellings also accepted
  System s2 = parse_system("module M begin skip; endmodule\nsystem m = M();\n");
  CHECK(s2.instances.size() == 1);
}

TEST_CASE("round trip corpus") {
  const std::vector<std::string> corpus = {
      "skip;",
      "x := 2 * x;",
      "x := -2;",
      "x := 2 - -3;",
      "x := (a + b) * c;",
      "x := a - (b - c);",
      "ok := (a < b) == (c < d);",
      "b := !(x < 1) && y >= 2 || z == \"s\";",
      "l := [1, 2, 3];",
      "l := push(tail(l), head(l));",
      "n := len(l) % 4;",
      "x := min(a, max(b, abs(c)));",
      "y := sqrt(exp(sin(t) + cos(t)));",
      "(x, y) := (y, x);",
      "ch?x;",
      "ch?;",
      "ch!;",
      "ch!x + 1;",
      "ch[0]?x;",
      "ch[0][\"t1\"]!prior;",
      "ch[i][j]!v;",
      "wait(0.045);",
      "wait(p + 1);",
      "x == 1 --> y := 2;",
      "x < 1 --> (\n  y := 2;\n  z := 3;\n);",
      "t >= 1 --> Done;",
      "if x < 1 then y := 1; endif;",
      "if x < 1 then y := 1; else y := 2; endif;",
      "if x < 1 then y := 1; elif x < 2 then y := 2; else y := 3; endif;",
      "(\n  x := x + 1;\n)**;",
      "(\n  x := 1;\n) |~| (\n  x := 2;\n);",
      "<t_dot = 1 & t < 1>;",
      "<x_dot = y, t_dot = 1 & t < 1>;",
      "<x_dot = -10 * x + 10 * u & true>;",
      "<x_dot = 1 & (x > 2)>;",
      "<x_dot = 1 & (x >= 2) && t < 1>;",
      "<x_dot = 1 & !(x >= 2)>;",
      "<& true> |> [] (\n  write?v --> f := 1;,\n  read!v --> skip;\n);",
      "<v_dot = a, s_dot = 1 & s < 0.005> |> [] (\n  act?a --> skip;\n);",
      "[] (\n  a?x --> b!x;,\n  c? --> skip;\n);",
      "x := 1; y := 2; z := x + y;",
      "P1;",
      "x := 1e-06;",
      "x := 2.5e-09;",
      "x := 1.5e+10;",
      "skip; # trailing comment\n",
      "# leading comment\nskip;",
  };
  for (const auto& text : corpus) check_roundtrip(text);
}

TEST_CASE("system pretty print round trip") {
  const std::string text =
      "module M(p):\n"
      "begin\n"
      "  output x;\n"
      "  x := p;\n"
      "  (\n"
      "    ch[p]!x;\n"
      "    wait(1);\n"
      "  )**;\n"
      "end\n"
      "endmodule\n"
      "system a = M(0) || b = M(1);\n";
  System sys = parse_system(text);
  std::string printed = pretty_print(sys);
  System back = parse_system(printed);
  CHECK(pretty_print(back) == printed);
  REQUIRE(back.instances.size() == 2);
  CHECK(back.instances[1].args[0] == Value(1.0));
}

TEST_CASE("parse errors carry spans inside the input") {
  auto check_err = [](const std::string& text) {
    try {
      parse_process(text);
      FAIL_CHECK("expected ParseError for: " << text);
    } catch (const ParseError& e) {
      CHECK(e.span.start_line >= 1);
      CHECK(e.span.start_col >= 1);
      int lines = 1;
      for (char c : text)
        if (c == '\n') ++lines;
      CHECK(e.span.start_line <= lines + 1);
      CHECK(!std::string(e.what()).empty());
    }
  };
  check_err("x := ;");
  check_err("x := 1");
  check_err("if x then skip; ");
  check_err("ch[?x;");
  check_err("<x = 1 & true>;");
  check_err("wait 1;");
  check_err("x := \"unterminated;");
  check_err("(x, y) := (1, 2, 3);");
}
