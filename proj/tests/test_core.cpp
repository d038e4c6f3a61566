#include "doctest.h"

#include "hcsp/eval.hpp"
#include "hcsp/parser.hpp"
#include "hcsp/pretty.hpp"
#include "hcsp/process.hpp"
#include "hcsp/rational.hpp"
#include "hcsp/subst.hpp"

using namespace hcsp;

TEST_CASE("rational gcd and parsing") {
  CHECK(Rational::gcd(Rational(2), Rational(3)) == Rational(1));
  CHECK(Rational::gcd(Rational::parse("0.2"), Rational::parse("0.3")) ==
        Rational::parse("0.1"));
  CHECK(Rational::parse("0.045") == Rational(45, 1000));
  CHECK(Rational::parse("9/200") == Rational(45, 1000));
  CHECK(Rational::gcd(Rational(45, 1000), Rational(1, 10)) == Rational(1, 200));
  CHECK(Rational::parse("0.2").to_double() == doctest::Approx(0.2));
}

TEST_CASE("pretty print basics") {
  CHECK(pretty_print(mk_skip()) == "skip;");
  auto assign = mk_assign("x", mk_binary(BinOp::Mul, mk_real(2), mk_var("x")));
  CHECK(pretty_print(assign) == "x := 2 * x;");
  auto ode = mk_ode({{"a", mk_var("z")},
                     {"x", mk_binary(BinOp::Add, mk_var("a"), mk_real(2))}},
                    mk_bool(true));
  std::string s = pretty_print(ode);
  CHECK(s.find("a_dot = z, x_dot = a + 2") != std::string::npos);
}

TEST_CASE("free_vars") {
  // y := 2 * x reads x only
  auto p1 = mk_assign("y", mk_binary(BinOp::Mul, mk_real(2), mk_var("x")));
  CHECK(free_vars(p1) == std::set<std::string>{"x"});

  // ODE state vars are free along with rhs reads
  auto p2 = mk_ode({{"x", mk_var("y")}, {"t", mk_real(1)}},
                   mk_binary(BinOp::Lt, mk_var("t"), mk_real(1)));
  CHECK(free_vars(p2) == std::set<std::string>{"x", "y", "t"});

  // x := 1; y := x  -- nothing read before written
  auto p3 = mk_seq2(mk_assign("x", mk_real(1)), mk_assign("y", mk_var("x")));
  CHECK(free_vars(p3).empty());
  CHECK(all_vars(p3) == std::set<std::string>{"x", "y"});
}

TEST_CASE("substitute composes and is idempotent at the fixpoint") {
  // b -> a + 2 applied to x_dot = b
  Substitution sigma{{"b", mk_binary(BinOp::Add, mk_var("a"), mk_real(2))}};
  auto ode = mk_ode({{"x", mk_var("b")}}, mk_bool(true));
  auto out = substitute(ode, sigma);
  const auto& eq = std::get<Process::Ode>(out->node).equations[0];
  CHECK(pretty_print(eq.second) == "a + 2");

  // empty sigma is the identity
  CHECK(substitute(ode, Substitution{}) == ode);

  // {y -> 2x, z -> y} composed then applied to w := z gives w := 2x
  Substitution s2{{"y", mk_binary(BinOp::Mul, mk_real(2), mk_var("x"))},
                  {"z", mk_var("y")}};
  auto comp = compose_substitution(s2);
  auto w = substitute(mk_assign("w", mk_var("z")), comp);
  CHECK(pretty_print(w) == "w := 2 * x;");

  // composed sigma is idempotent
  auto once = substitute(w, comp);
  CHECK(proc_equal(once, substitute(once, comp)));

  // cyclic sigma rejected
  Substitution cyc{{"a", mk_var("b")}, {"b", mk_var("a")}};
  CHECK_THROWS_AS(compose_substitution(cyc), Error);
}

TEST_CASE("eval arithmetic, lists, and errors") {
  Store st;
  st["x"] = Value(3.0);
  st["l"] = Value(Value::List{Value(1.0), Value(2.0)});
  CHECK(eval_expr(parse_expr_text("2 * x + 1"), st).as_real() == 7.0);
  CHECK(eval_expr(parse_expr_text("head(l)"), st).as_real() == 1.0);
  CHECK(eval_expr(parse_expr_text("len(push(l, 9))"), st).as_real() == 3.0);
  CHECK(eval_expr(parse_expr_text("get(l, 1)"), st).as_real() == 2.0);
  CHECK(eval_expr(parse_expr_text("min(x, 1)"), st).as_real() == 1.0);
  CHECK(eval_expr(parse_expr_text("x % 2"), st).as_real() == 1.0);
  CHECK(eval_expr(parse_expr_text("\"a\" == \"a\""), st).as_bool());
  CHECK_THROWS_AS(eval_expr(parse_expr_text("1 / (x - 3)"), st), SimError);
  CHECK_THROWS_AS(eval_expr(parse_expr_text("y + 1"), st), SimError);
  CHECK_THROWS_AS(eval_expr(parse_expr_text("x && true"), st), SimError);
}

TEST_CASE("system validation") {
  System sys = parse_system(
      "module M(p):\nbegin\n  x := p;\nend\nendmodule\n"
      "system a = M(1) || b = M(2);\n");
  CHECK(sys.instances.size() == 2);
  CHECK(sys.modules.count("M") == 1);

  CHECK_THROWS_WITH_AS(
      parse_system("module M(p): begin skip; end endmodule\nsystem a = M();"),
      doctest::Contains("expects 1 args"), Error);
}
