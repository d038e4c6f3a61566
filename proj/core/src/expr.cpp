#include "hcsp/expr.hpp"

#include <stdexcept>

namespace hcsp {

ExprPtr mk_real(double v) { return std::make_shared<Expr>(Expr::Node{Expr::RealLit{v}}); }
ExprPtr mk_bool(bool v) { return std::make_shared<Expr>(Expr::Node{Expr::BoolLit{v}}); }
ExprPtr mk_string(std::string v) {
  return std::make_shared<Expr>(Expr::Node{Expr::StringLit{std::move(v)}});
}
ExprPtr mk_var(std::string name) {
  return std::make_shared<Expr>(Expr::Node{Expr::Var{std::move(name)}});
}
ExprPtr mk_list(std::vector<ExprPtr> items) {
  return std::make_shared<Expr>(Expr::Node{Expr::ListLit{std::move(items)}});
}
ExprPtr mk_unary(UnOp op, ExprPtr a) {
  return std::make_shared<Expr>(Expr::Node{Expr::Unary{op, std::move(a)}});
}
ExprPtr mk_binary(BinOp op, ExprPtr a, ExprPtr b) {
  return std::make_shared<Expr>(Expr::Node{Expr::Binary{op, std::move(a), std::move(b)}});
}

ExprPtr mk_value(const Value& v) {
  if (v.is_real()) return mk_real(v.as_real());
  if (v.is_bool()) return mk_bool(v.as_bool());
  if (v.is_string()) return mk_string(v.as_string());
  std::vector<ExprPtr> items;
  for (const auto& x : v.as_list()) items.push_back(mk_value(x));
  return mk_list(std::move(items));
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, Expr::RealLit>) {
          return x.v == y.v;
        } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
          return x.v == y.v;
        } else if constexpr (std::is_same_v<T, Expr::StringLit>) {
          return x.v == y.v;
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Expr::ListLit>) {
          if (x.items.size() != y.items.size()) return false;
          for (std::size_t i = 0; i < x.items.size(); ++i)
            if (!expr_equal(x.items[i], y.items[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return x.op == y.op && expr_equal(x.a, y.a);
        } else {
          return x.op == y.op && expr_equal(x.a, y.a) && expr_equal(x.b, y.b);
        }
      },
      a->node);
}

bool is_literal_true(const ExprPtr& e) {
  if (!e) return false;
  const auto* b = std::get_if<Expr::BoolLit>(&e->node);
  return b && b->v;
}

bool is_literal_false(const ExprPtr& e) {
  if (!e) return false;
  const auto* b = std::get_if<Expr::BoolLit>(&e->node);
  return b && !b->v;
}

void collect_vars(const ExprPtr& e, std::vector<std::string>& out) {
  if (!e) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          out.push_back(x.name);
        } else if constexpr (std::is_same_v<T, Expr::ListLit>) {
          for (const auto& it : x.items) collect_vars(it, out);
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          collect_vars(x.a, out);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          collect_vars(x.a, out);
          collect_vars(x.b, out);
        }
      },
      e->node);
}

const char* unop_name(UnOp op) {
  switch (op) {
    case UnOp::Neg: return "-";
    case UnOp::Not: return "!";
    case UnOp::Abs: return "abs";
    case UnOp::Sqrt: return "sqrt";
    case UnOp::Sin: return "sin";
    case UnOp::Cos: return "cos";
    case UnOp::Exp: return "exp";
    case UnOp::Head: return "head";
    case UnOp::Tail: return "tail";
    case UnOp::Length: return "len";
    case UnOp::Pop: return "pop";
  }
  return "?";
}

const char* binop_name(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
    case BinOp::Min: return "min";
    case BinOp::Max: return "max";
    case BinOp::Push: return "push";
    case BinOp::Get: return "get";
  }
  return "?";
}

}  // namespace hcsp
