#ifndef HCSP_EXPR_HPP
#define HCSP_EXPR_HPP

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "hcsp/value.hpp"

namespace hcsp {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class UnOp { Neg, Not, Abs, Sqrt, Sin, Cos, Exp, Head, Tail, Length, Pop };

enum class BinOp {
  Add, Sub, Mul, Div, Mod,
  Lt, Le, Gt, Ge, Eq, Ne,
  And, Or,
  Min, Max,
  Push,  // push(list, v): append
  Get,   // get(list, i): zero-based index
};

// Immutable expression tree. Nodes are shared; construction goes through the
// mk_* helpers below.
struct Expr {
  struct RealLit { double v; };
  struct BoolLit { bool v; };
  struct StringLit { std::string v; };
  struct Var { std::string name; };
  struct ListLit { std::vector<ExprPtr> items; };
  struct Unary { UnOp op; ExprPtr a; };
  struct Binary { BinOp op; ExprPtr a, b; };

  using Node = std::variant<RealLit, BoolLit, StringLit, Var, ListLit, Unary, Binary>;
  Node node;

  explicit Expr(Node n) : node(std::move(n)) {}
};

ExprPtr mk_real(double v);
ExprPtr mk_bool(bool v);
ExprPtr mk_string(std::string v);
ExprPtr mk_var(std::string name);
ExprPtr mk_list(std::vector<ExprPtr> items);
ExprPtr mk_unary(UnOp op, ExprPtr a);
ExprPtr mk_binary(BinOp op, ExprPtr a, ExprPtr b);
ExprPtr mk_value(const Value& v);  // literal for an arbitrary runtime value

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool is_literal_true(const ExprPtr& e);
bool is_literal_false(const ExprPtr& e);

// Variables read by the expression.
void collect_vars(const ExprPtr& e, std::vector<std::string>& out);

const char* unop_name(UnOp op);
const char* binop_name(BinOp op);

}  // namespace hcsp

#endif
