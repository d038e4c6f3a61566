#include "hcsp/pretty.hpp"

#include <sstream>

#include "hcsp/value.hpp"

namespace hcsp {

namespace {

// Precedence levels, loosest first. Unary operators bind tighter than any
// binary operator; `not` tighter than relational per the grammar.
int binop_prec(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
    case BinOp::Eq: case BinOp::Ne: return 3;
    case BinOp::Add: case BinOp::Sub: return 4;
    case BinOp::Mul: case BinOp::Div: case BinOp::Mod: return 5;
    default: return 7;  // call syntax
  }
}

bool is_call_binop(BinOp op) {
  return op == BinOp::Min || op == BinOp::Max || op == BinOp::Push || op == BinOp::Get;
}

bool is_call_unop(UnOp op) { return op != UnOp::Neg && op != UnOp::Not; }

void print_expr(std::ostream& os, const ExprPtr& e, int parent_prec, bool in_ode = false);

// `in_ode` marks positions inside an evolution statement head, where a bare
// '>' would close the statement; such comparisons print parenthesized.
void print_binary(std::ostream& os, const Expr::Binary& b, int parent_prec, bool in_ode) {
  if (is_call_binop(b.op)) {
    os << binop_name(b.op) << "(";
    print_expr(os, b.a, 0);
    os << ", ";
    print_expr(os, b.b, 0);
    os << ")";
    return;
  }
  int prec = binop_prec(b.op);
  bool relational = prec == 3;  // non-chaining: parenthesize nested comparisons
  bool paren = prec < parent_prec;
  if (in_ode && !paren && (b.op == BinOp::Gt || b.op == BinOp::Ge)) paren = true;
  if (paren) os << "(";
  print_expr(os, b.a, relational ? prec + 1 : prec, in_ode && !paren);
  os << " " << binop_name(b.op) << " ";
  print_expr(os, b.b, prec + 1, in_ode && !paren);  // left associative
  if (paren) os << ")";
}

void print_expr(std::ostream& os, const ExprPtr& e, int parent_prec, bool in_ode) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::RealLit>) {
          os << format_real(x.v);
        } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
          os << (x.v ? "true" : "false");
        } else if constexpr (std::is_same_v<T, Expr::StringLit>) {
          os << '"' << x.v << '"';
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          os << x.name;
        } else if constexpr (std::is_same_v<T, Expr::ListLit>) {
          os << "[";
          for (std::size_t i = 0; i < x.items.size(); ++i) {
            if (i) os << ", ";
            print_expr(os, x.items[i], 0);
          }
          os << "]";
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          if (is_call_unop(x.op)) {
            os << unop_name(x.op) << "(";
            print_expr(os, x.a, 0);
            os << ")";
          } else {
            os << unop_name(x.op);
            print_expr(os, x.a, 6, in_ode);
          }
        } else {
          print_binary(os, x, parent_prec, in_ode);
        }
      },
      e->node);
}

std::string indent_str(int n) { return std::string(2 * n, ' '); }

void print_chan(std::ostream& os, const ChannelRef& ch) {
  os << ch.name;
  for (const auto& a : ch.args) os << "[" << channel_arg_str(a) << "]";
}

void print_comm(std::ostream& os, const CommEvent& c) {
  print_chan(os, c.chan);
  if (c.is_input) {
    os << "?" << c.var;
  } else {
    os << "!";
    if (c.value) print_expr(os, c.value, 0);
  }
}

void print_proc(std::ostream& os, const ProcPtr& p, int indent);

void print_odes(std::ostream& os, const std::vector<OdeEquation>& eqs,
                const ExprPtr& domain) {
  os << "<";
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (i) os << ", ";
    os << eqs[i].first << "_dot = ";
    print_expr(os, eqs[i].second, 0, /*in_ode=*/true);
  }
  if (!eqs.empty()) os << " ";
  os << "& ";
  print_expr(os, domain, 0, /*in_ode=*/true);
  os << ">";
}

void print_arms(std::ostream& os, const std::vector<std::pair<CommEvent, ProcPtr>>& arms,
                int indent) {
  os << "(\n";
  for (std::size_t i = 0; i < arms.size(); ++i) {
    os << indent_str(indent + 1);
    print_comm(os, arms[i].first);
    os << " -->";
    if (is_skip(arms[i].second)) {
      os << " skip;";
    } else {
      os << "\n";
      print_proc(os, arms[i].second, indent + 2);
    }
    if (i + 1 < arms.size()) os << ",";
    os << "\n";
  }
  os << indent_str(indent) << ")";
}

// A single statement. Sequences print one statement per line.
void print_stmt(std::ostream& os, const ProcPtr& p, int indent) {
  const std::string pad = indent_str(indent);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Process::Skip>) {
          os << pad << "skip;";
        } else if constexpr (std::is_same_v<T, Process::Assign>) {
          os << pad << x.var << " := ";
          print_expr(os, x.value, 0);
          os << ";";
        } else if constexpr (std::is_same_v<T, Process::MultiAssign>) {
          os << pad << "(";
          for (std::size_t i = 0; i < x.vars.size(); ++i) {
            if (i) os << ", ";
            os << x.vars[i];
          }
          os << ") := (";
          for (std::size_t i = 0; i < x.values.size(); ++i) {
            if (i) os << ", ";
            print_expr(os, x.values[i], 0);
          }
          os << ");";
        } else if constexpr (std::is_same_v<T, Process::Input>) {
          os << pad;
          print_chan(os, x.chan);
          os << "?" << x.var << ";";
        } else if constexpr (std::is_same_v<T, Process::Output>) {
          os << pad;
          print_chan(os, x.chan);
          os << "!";
          if (x.value) print_expr(os, x.value, 0);
          os << ";";
        } else if constexpr (std::is_same_v<T, Process::Seq>) {
          for (std::size_t i = 0; i < x.items.size(); ++i) {
            if (i) os << "\n";
            print_stmt(os, x.items[i], indent);
          }
        } else if constexpr (std::is_same_v<T, Process::Guard>) {
          os << pad;
          print_expr(os, x.cond, 0);
          os << " --> ";
          if (std::holds_alternative<Process::Seq>(x.body->node)) {
            os << "(\n";
            print_proc(os, x.body, indent + 1);
            os << "\n" << pad << ");";
          } else {
            std::ostringstream sub;
            print_stmt(sub, x.body, 0);
            os << sub.str();
          }
        } else if constexpr (std::is_same_v<T, Process::IfElse>) {
          for (std::size_t i = 0; i < x.branches.size(); ++i) {
            os << (i == 0 ? pad + "if " : pad + "elif ");
            print_expr(os, x.branches[i].first, 0);
            os << " then\n";
            print_proc(os, x.branches[i].second, indent + 1);
            os << "\n";
          }
          if (!is_skip(x.else_branch)) {
            os << pad << "else\n";
            print_proc(os, x.else_branch, indent + 1);
            os << "\n";
          }
          os << pad << "endif;";
        } else if constexpr (std::is_same_v<T, Process::ExternalChoice>) {
          os << pad << "[] ";
          print_arms(os, x.arms, indent);
          os << ";";
        } else if constexpr (std::is_same_v<T, Process::InternalChoice>) {
          os << pad << "(\n";
          print_proc(os, x.left, indent + 1);
          os << "\n" << pad << ") |~| (\n";
          print_proc(os, x.right, indent + 1);
          os << "\n" << pad << ");";
        } else if constexpr (std::is_same_v<T, Process::Repeat>) {
          os << pad << "(\n";
          print_proc(os, x.body, indent + 1);
          os << "\n" << pad << ")**;";
        } else if constexpr (std::is_same_v<T, Process::Ode>) {
          os << pad;
          print_odes(os, x.equations, x.domain);
          os << ";";
        } else if constexpr (std::is_same_v<T, Process::Interrupt>) {
          os << pad;
          print_odes(os, x.equations, x.domain);
          os << " |> [] ";
          print_arms(os, x.arms, indent);
          os << ";";
        } else if constexpr (std::is_same_v<T, Process::Wait>) {
          os << pad << "wait(";
          print_expr(os, x.duration, 0);
          os << ");";
        } else {
          os << pad << x.name << ";";
        }
      },
      p->node);
}

void print_proc(std::ostream& os, const ProcPtr& p, int indent) {
  print_stmt(os, p, indent);
}

}  // namespace

std::string pretty_print(const ExprPtr& e) {
  std::ostringstream os;
  print_expr(os, e, 0);
  return os.str();
}

std::string pretty_print(const ProcPtr& p, int indent) {
  std::ostringstream os;
  print_proc(os, p, indent);
  return os.str();
}

std::string pretty_print(const Module& m) {
  std::ostringstream os;
  os << "module " << m.name << "(";
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    if (i) os << ", ";
    os << m.params[i];
  }
  os << "):\nbegin\n";
  if (!m.outputs.empty()) {
    os << "  output ";
    for (std::size_t i = 0; i < m.outputs.size(); ++i) {
      if (i) os << ", ";
      os << m.outputs[i];
    }
    os << ";\n";
  }
  for (const auto& [name, body] : m.procedures) {
    os << "  procedure " << name << " begin\n";
    os << pretty_print(body, 2) << "\n";
    os << "  end\n";
  }
  os << pretty_print(m.body, 1) << "\n";
  os << "end\nendmodule\n";
  return os.str();
}

std::string pretty_print(const System& sys) {
  std::ostringstream os;
  for (const auto& [name, m] : sys.modules) os << pretty_print(m) << "\n";
  os << "system";
  for (std::size_t i = 0; i < sys.instances.size(); ++i) {
    const auto& inst = sys.instances[i];
    os << (i == 0 ? " " : " || ") << inst.id << " = " << inst.module << "(";
    for (std::size_t j = 0; j < inst.args.size(); ++j) {
      if (j) os << ", ";
      os << inst.args[j].str();
    }
    os << ")";
  }
  os << ";\n";
  return os.str();
}

}  // namespace hcsp
