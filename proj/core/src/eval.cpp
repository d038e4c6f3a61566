#include "hcsp/eval.hpp"

#include <cmath>

#include "hcsp/errors.hpp"

namespace hcsp {

namespace {

[[noreturn]] void type_error(const std::string& what) {
  throw SimError("runtime_type_error", what);
}

double need_real(const Value& v, const char* ctx) {
  if (!v.is_real()) type_error(std::string(ctx) + ": expected real, got " + v.kind_name());
  return v.as_real();
}

bool need_bool(const Value& v, const char* ctx) {
  if (!v.is_bool()) type_error(std::string(ctx) + ": expected bool, got " + v.kind_name());
  return v.as_bool();
}

const Value::List& need_list(const Value& v, const char* ctx) {
  if (!v.is_list()) type_error(std::string(ctx) + ": expected list, got " + v.kind_name());
  return v.as_list();
}

Value check_finite(double v, const char* ctx) {
  if (!std::isfinite(v))
    throw SimError("numeric_overflow", std::string(ctx) + ": non-finite result");
  return Value(v);
}

Value eval_unary(UnOp op, const Value& a) {
  switch (op) {
    case UnOp::Neg: return Value(-need_real(a, "-"));
    case UnOp::Not: return Value(!need_bool(a, "!"));
    case UnOp::Abs: return Value(std::fabs(need_real(a, "abs")));
    case UnOp::Sqrt: {
      double x = need_real(a, "sqrt");
      if (x < 0) throw SimError("numeric_overflow", "sqrt of negative value");
      return Value(std::sqrt(x));
    }
    case UnOp::Sin: return Value(std::sin(need_real(a, "sin")));
    case UnOp::Cos: return Value(std::cos(need_real(a, "cos")));
    case UnOp::Exp: return check_finite(std::exp(need_real(a, "exp")), "exp");
    case UnOp::Head: {
      const auto& l = need_list(a, "head");
      if (l.empty()) throw SimError("index_out_of_range", "head of empty list");
      return l.front();
    }
    case UnOp::Tail: {
      const auto& l = need_list(a, "tail");
      if (l.empty()) throw SimError("index_out_of_range", "tail of empty list");
      return Value(Value::List(l.begin() + 1, l.end()));
    }
    case UnOp::Length:
      return Value(static_cast<double>(need_list(a, "len").size()));
    case UnOp::Pop: {
      const auto& l = need_list(a, "pop");
      if (l.empty()) throw SimError("index_out_of_range", "pop of empty list");
      return Value(Value::List(l.begin(), l.end() - 1));
    }
  }
  type_error("bad unary op");
}

bool value_lt(const Value& a, const Value& b) {
  if (a.is_real() && b.is_real()) return a.as_real() < b.as_real();
  if (a.is_string() && b.is_string()) return a.as_string() < b.as_string();
  type_error(std::string("comparison between ") + a.kind_name() + " and " + b.kind_name());
}

Value eval_binary(BinOp op, const Value& a, const Value& b) {
  switch (op) {
    case BinOp::Add: return check_finite(need_real(a, "+") + need_real(b, "+"), "+");
    case BinOp::Sub: return check_finite(need_real(a, "-") - need_real(b, "-"), "-");
    case BinOp::Mul: return check_finite(need_real(a, "*") * need_real(b, "*"), "*");
    case BinOp::Div: {
      double d = need_real(b, "/");
      if (d == 0.0) throw SimError("division_by_zero", "division by zero");
      return check_finite(need_real(a, "/") / d, "/");
    }
    case BinOp::Mod: {
      double d = need_real(b, "%");
      if (d == 0.0) throw SimError("division_by_zero", "modulo by zero");
      return check_finite(std::fmod(need_real(a, "%"), d), "%");
    }
    case BinOp::Lt: return Value(value_lt(a, b));
    case BinOp::Le: return Value(!value_lt(b, a));
    case BinOp::Gt: return Value(value_lt(b, a));
    case BinOp::Ge: return Value(!value_lt(a, b));
    case BinOp::Eq: return Value(a == b);
    case BinOp::Ne: return Value(!(a == b));
    case BinOp::And: return Value(need_bool(a, "&&") && need_bool(b, "&&"));
    case BinOp::Or: return Value(need_bool(a, "||") || need_bool(b, "||"));
    case BinOp::Min: return Value(std::fmin(need_real(a, "min"), need_real(b, "min")));
    case BinOp::Max: return Value(std::fmax(need_real(a, "max"), need_real(b, "max")));
    case BinOp::Push: {
      Value::List l = need_list(a, "push");
      l.push_back(b);
      return Value(std::move(l));
    }
    case BinOp::Get: {
      const auto& l = need_list(a, "get");
      double di = need_real(b, "get");
      auto i = static_cast<std::int64_t>(di);
      if (i < 0 || static_cast<std::size_t>(i) >= l.size())
        throw SimError("index_out_of_range",
                       "get index " + format_real(di) + " out of range");
      return l[static_cast<std::size_t>(i)];
    }
  }
  type_error("bad binary op");
}

}  // namespace

Value eval_expr(const ExprPtr& e, const Store& store) {
  return std::visit(
      [&](const auto& x) -> Value {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::RealLit>) {
          return Value(x.v);
        } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
          return Value(x.v);
        } else if constexpr (std::is_same_v<T, Expr::StringLit>) {
          return Value(x.v);
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          auto it = store.find(x.name);
          if (it == store.end())
            throw SimError("unbound_variable", "unbound variable " + x.name);
          return it->second;
        } else if constexpr (std::is_same_v<T, Expr::ListLit>) {
          Value::List items;
          items.reserve(x.items.size());
          for (const auto& it : x.items) items.push_back(eval_expr(it, store));
          return Value(std::move(items));
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          // Short-circuit not needed: all unaries are strict.
          return eval_unary(x.op, eval_expr(x.a, store));
        } else {
          if (x.op == BinOp::And) {
            Value a = eval_expr(x.a, store);
            if (!a.is_bool()) type_error("&&: expected bool");
            if (!a.as_bool()) return Value(false);
            return eval_expr(x.b, store);
          }
          if (x.op == BinOp::Or) {
            Value a = eval_expr(x.a, store);
            if (!a.is_bool()) type_error("||: expected bool");
            if (a.as_bool()) return Value(true);
            return eval_expr(x.b, store);
          }
          return eval_binary(x.op, eval_expr(x.a, store), eval_expr(x.b, store));
        }
      },
      e->node);
}

bool eval_bool(const ExprPtr& e, const Store& store) {
  Value v = eval_expr(e, store);
  if (!v.is_bool())
    throw SimError("runtime_type_error",
                   std::string("condition evaluated to ") + v.kind_name());
  return v.as_bool();
}

double eval_real(const ExprPtr& e, const Store& store) {
  Value v = eval_expr(e, store);
  if (!v.is_real())
    throw SimError("runtime_type_error",
                   std::string("expected real, got ") + v.kind_name());
  return v.as_real();
}

}  // namespace hcsp
