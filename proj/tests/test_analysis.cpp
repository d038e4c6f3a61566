#include "doctest.h"

#include "hcsp/analysis.hpp"
#include "hcsp/parser.hpp"
#include "hcsp/pretty.hpp"
#include "hcsp/subst.hpp"

using namespace hcsp;

namespace {

ChannelUniverse sched_universe() {
  ChannelUniverse u;
  u["reqProcessor"] = {{std::int64_t{0}, std::string{"t1"}},
                       {std::int64_t{0}, std::string{"t2"}}};
  u["run"] = {{std::int64_t{0}, std::string{"t1"}},
              {std::int64_t{0}, std::string{"t2"}}};
  return u;
}

const char* kSchedFragment =
    "[] (\n"
    "  reqProcessor[0][_tid]?prior -->\n"
    "    Pool_now := push(Pool_now, _tid);\n"
    "    run_now := head(Pool_now);\n"
    "    run[0][run_now]!;\n"
    ");\n";

// The same choice after channel-parameter expansion: one arm per thread id,
// each send dispatched over the known thread set.
const char* kSchedExpanded =
    "[] (\n"
    "  reqProcessor[0][\"t1\"]?prior -->\n"
    "    Pool_now := push(Pool_now, \"t1\");\n"
    "    run_now := head(Pool_now);\n"
    "    if run_now == \"t1\" then\n"
    "      run[0][\"t1\"]!;\n"
    "    elif run_now == \"t2\" then\n"
    "      run[0][\"t2\"]!;\n"
    "    endif;,\n"
    "  reqProcessor[0][\"t2\"]?prior -->\n"
    "    Pool_now := push(Pool_now, \"t2\");\n"
    "    run_now := head(Pool_now);\n"
    "    if run_now == \"t1\" then\n"
    "      run[0][\"t1\"]!;\n"
    "    elif run_now == \"t2\" then\n"
    "      run[0][\"t2\"]!;\n"
    "    endif;\n"
    ");\n";

}  // namespace

TEST_CASE("instantiate substitutes parameters into channels and expressions") {
  System sys = parse_system(
      "module Sched(pid):\n"
      "begin\n"
      "  [] (\n"
      "    reqProcessor[pid][_tid]?prior --> run[pid][_tid]!;\n"
      "  );\n"
      "end\n"
      "endmodule\n"
      "system s0 = Sched(0) || s1 = Sched(1);\n");
  auto procs = instantiate(sys);
  REQUIRE(procs.size() == 2);
  std::string p0 = pretty_print(procs[0].body);
  std::string p1 = pretty_print(procs[1].body);
  CHECK(p0.find("reqProcessor[0][_tid]") != std::string::npos);
  CHECK(p1.find("reqProcessor[1][_tid]") != std::string::npos);
  // the two processes differ only in the index
  std::string p1to0 = p1;
  std::size_t at;
  while ((at = p1to0.find("[1]")) != std::string::npos) p1to0.replace(at, 3, "[0]");
  CHECK(p0 == p1to0);
  // node count preserved by substitution
  CHECK(proc_node_count(procs[0].body) ==
        proc_node_count(sys.modules.at("Sched").body));
}

TEST_CASE("instantiate on a zero-parameter module is the identity") {
  System sys = parse_system(
      "module M:\nbegin\n  x := 1;\nend\nendmodule\nsystem m = M();\n");
  auto procs = instantiate(sys);
  CHECK(proc_equal(procs[0].body, sys.modules.at("M").body));
}

TEST_CASE("channel expansion of the scheduler fragment") {
  ProcPtr frag = parse_process(kSchedFragment);
  ProcPtr expanded = expand_channels_proc(frag, sched_universe());
  ProcPtr golden = parse_process(kSchedExpanded);
  CHECK(pretty_print(expanded) == pretty_print(golden));
  CHECK(proc_equal(expanded, golden));
  CHECK(channels_concrete(expanded));
}

TEST_CASE("expansion is the identity on concrete processes") {
  ProcPtr p = parse_process("ch[0]!1; ch[0]?x; [] (\n  a? --> b!2;\n);");
  CHECK(proc_equal(expand_channels_proc(p, {}), p));
}

TEST_CASE("single-thread universe degenerates to one arm and one branch") {
  ChannelUniverse u;
  u["reqProcessor"] = {{std::int64_t{0}, std::string{"t1"}}};
  u["run"] = {{std::int64_t{0}, std::string{"t1"}}};
  ProcPtr expanded = expand_channels_proc(parse_process(kSchedFragment), u);
  const auto* ec = std::get_if<Process::ExternalChoice>(&expanded->node);
  REQUIRE(ec != nullptr);
  CHECK(ec->arms.size() == 1);
  std::string s = pretty_print(expanded);
  CHECK(s.find("elif") == std::string::npos);
}

TEST_CASE("pattern input outside a choice captures its continuation") {
  ChannelUniverse u;
  u["req"] = {{std::string{"a"}}, {std::string{"b"}}};
  ProcPtr p = parse_process("req[_w]?v; log := _w; done!v;");
  ProcPtr expanded = expand_channels_proc(p, u);
  const auto* ec = std::get_if<Process::ExternalChoice>(&expanded->node);
  REQUIRE(ec != nullptr);
  REQUIRE(ec->arms.size() == 2);
  CHECK(pretty_print(ec->arms[0].second).find("log := \"a\"") != std::string::npos);
  CHECK(pretty_print(ec->arms[1].second).find("log := \"b\"") != std::string::npos);
}

TEST_CASE("unbounded variable index is rejected") {
  ProcPtr p = parse_process("run[0][who]!;");
  CHECK_THROWS_WITH_AS(expand_channels_proc(p, {}),
                       doctest::Contains("universe"), Error);
  ChannelUniverse u;
  u["run"] = {};
  CHECK_THROWS_WITH_AS(expand_channels_proc(p, u),
                       doctest::Contains("no known index"), Error);
}

TEST_CASE("type inference through a channel") {
  System sys = parse_system(
      "module P1: begin ch!1; end endmodule\n"
      "module P2: begin ch?x; end endmodule\n"
      "system a = P1() || b = P2();\n");
  auto procs = preprocess(sys);
  TypeEnv env = infer_types(procs);
  CHECK(env.vars.at("b").at("x")->kind == Type::Kind::Real);
  CHECK(env.channels.at("ch")->kind == Type::Kind::Real);
}

TEST_CASE("mixed channel types are a conflict") {
  System sys = parse_system(
      "module P1: begin ch!\"hello\"; end endmodule\n"
      "module P2: begin ch?x; y := x + 1; end endmodule\n"
      "system a = P1() || b = P2();\n");
  auto procs = preprocess(sys);
  CHECK_THROWS_AS(infer_types(procs), Error);
  try {
    infer_types(procs);
  } catch (const Error& e) {
    CHECK(e.code() == "type_conflict");
  }
}

TEST_CASE("knowledge propagates across rounds") {
  // Instance order works against the flow a -> b -> c, so typing b's x
  // needs a second round.
  System sys = parse_system(
      "module A: begin ch1!1; end endmodule\n"
      "module B: begin ch1?x; ch2!x; end endmodule\n"
      "module C: begin ch2?y; end endmodule\n"
      "system c = C() || b = B() || a = A();\n");
  auto procs = preprocess(sys);
  TypeEnv env = infer_types(procs);
  CHECK(env.rounds == 2);
  CHECK(env.vars.at("b").at("x")->kind == Type::Kind::Real);
  CHECK(env.vars.at("c").at("y")->kind == Type::Kind::Real);
  CHECK(env.channels.at("ch2")->kind == Type::Kind::Real);
}

TEST_CASE("untyped variable is reported with a hint") {
  System sys = parse_system("module M: begin ch?x; end endmodule\nsystem m = M();\n");
  auto procs = preprocess(sys);
  CHECK_THROWS_WITH_AS(infer_types(procs), doctest::Contains("initialization"), Error);
}

TEST_CASE("inference is idempotent") {
  System sys = parse_system(
      "module P: begin l := []; l := push(l, \"t\"); n := len(l); ch!n; end endmodule\n"
      "module Q: begin ch?m; ok := m > 0; end endmodule\n"
      "system p = P() || q = Q();\n");
  auto procs = preprocess(sys);
  TypeEnv e1 = infer_types(procs);
  TypeEnv e2 = infer_types(procs);
  CHECK(e1.vars.at("p").at("l")->str() == "list(string)");
  CHECK(e1.vars.at("q").at("ok")->str() == "bool");
  for (const auto& [inst, vars] : e1.vars)
    for (const auto& [v, t] : vars)
      CHECK(t->str() == e2.vars.at(inst).at(v)->str());
}
