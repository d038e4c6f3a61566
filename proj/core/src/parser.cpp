#include "hcsp/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace hcsp {

namespace {

enum class Tok {
  End, Ident, Number, String,
  // punctuation / operators
  Assign,      // :=
  Semi, Comma, LParen, RParen, LBracket, RBracket,
  Lt, Le, Gt, Ge, EqEq, Ne,
  Plus, Minus, Star, Slash, Percent,
  AndAnd, OrOr,
  Amp,         // &
  Arrow,       // -->
  Interrupt,   // |>
  StarStar,    // **
  IntChoice,   // |~|
  Query,       // ?
  Bang,        // !
  Colon,
  Eq,          // =
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::Assign: return "':='";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::EqEq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Amp: return "'&'";
    case Tok::Arrow: return "'-->'";
    case Tok::Interrupt: return "'|>'";
    case Tok::StarStar: return "'**'";
    case Tok::IntChoice: return "'|~|'";
    case Tok::Query: return "'?'";
    case Tok::Bang: return "'!'";
    case Tok::Colon: return "':'";
    case Tok::Eq: return "'='";
  }
  return "?";
}

class Lexer {
 public:
  Lexer(const std::string& text, std::string file)
      : text_(text), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    return out;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) {
    SourceSpan span{file_, line_, col_, line_, col_};
    throw ParseError(span, msg);
  }

  Token next() {
    Token t;
    t.span.file = file_;
    t.span.start_line = line_;
    t.span.start_col = col_;
    if (pos_ >= text_.size()) {
      t.kind = Tok::End;
      t.span.end_line = line_;
      t.span.end_col = col_;
      return t;
    }
    char c = text_[pos_];
    std::size_t start = pos_;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        advance();
      t.kind = Tok::Ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        advance();
      if (pos_ < text_.size() && text_[pos_] == '.') {
        advance();
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          advance();
      }
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        std::size_t save = pos_;
        int save_col = col_;
        advance();
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            advance();
        } else {
          pos_ = save;  // 'e' was an identifier boundary, not an exponent
          col_ = save_col;
        }
      }
      t.kind = Tok::Number;
    } else if (c == '"') {
      advance();
      std::size_t body = pos_;
      while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') advance();
      if (pos_ >= text_.size() || text_[pos_] != '"') fail("unterminated string literal");
      t.kind = Tok::String;
      t.text = text_.substr(body, pos_ - body);
      advance();
      t.span.end_line = line_;
      t.span.end_col = col_ - 1;
      return t;
    } else {
      auto two = [&](char a, char b) {
        return c == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
      };
      if (two(':', '=')) { t.kind = Tok::Assign; advance(); advance(); }
      else if (two('<', '=')) { t.kind = Tok::Le; advance(); advance(); }
      else if (two('>', '=')) { t.kind = Tok::Ge; advance(); advance(); }
      else if (two('=', '=')) { t.kind = Tok::EqEq; advance(); advance(); }
      else if (two('!', '=')) { t.kind = Tok::Ne; advance(); advance(); }
      else if (two('&', '&')) { t.kind = Tok::AndAnd; advance(); advance(); }
      else if (c == '-' && pos_ + 2 < text_.size() && text_[pos_ + 1] == '-' &&
               text_[pos_ + 2] == '>') {
        t.kind = Tok::Arrow; advance(); advance(); advance();
      }
      else if (c == '|' && pos_ + 2 < text_.size() && text_[pos_ + 1] == '~' &&
               text_[pos_ + 2] == '|') {
        t.kind = Tok::IntChoice; advance(); advance(); advance();
      }
      else if (two('|', '|')) { t.kind = Tok::OrOr; advance(); advance(); }
      else if (two('|', '>')) { t.kind = Tok::Interrupt; advance(); advance(); }
      else if (two('*', '*')) { t.kind = Tok::StarStar; advance(); advance(); }
      else {
        switch (c) {
          case ';': t.kind = Tok::Semi; break;
          case ',': t.kind = Tok::Comma; break;
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case '[': t.kind = Tok::LBracket; break;
          case ']': t.kind = Tok::RBracket; break;
          case '<': t.kind = Tok::Lt; break;
          case '>': t.kind = Tok::Gt; break;
          case '+': t.kind = Tok::Plus; break;
          case '-': t.kind = Tok::Minus; break;
          case '*': t.kind = Tok::Star; break;
          case '/': t.kind = Tok::Slash; break;
          case '%': t.kind = Tok::Percent; break;
          case '!': t.kind = Tok::Bang; break;
          case '?': t.kind = Tok::Query; break;
          case '&': t.kind = Tok::Amp; break;
          case ':': t.kind = Tok::Colon; break;
          case '=': t.kind = Tok::Eq; break;
          default:
            fail(std::string("unexpected character '") + c + "'");
        }
        advance();
      }
    }
    if (t.text.empty()) t.text = text_.substr(start, pos_ - start);
    t.span.end_line = line_;
    t.span.end_col = col_ > 1 ? col_ - 1 : 1;
    return t;
  }

  const std::string& text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {
      "skip", "wait", "if", "then", "elif", "else", "endif", "module",
      "begin", "end", "endmodule", "procedure", "output", "system",
      "true", "false"};
  return kw.count(s) > 0;
}

class Parser {
 public:
  Parser(const std::string& text, const std::string& file)
      : toks_(Lexer(text, file).run()), file_(file) {}

  ProcPtr parse_process_all() {
    ProcPtr p = parse_stmts({});
    expect(Tok::End);
    return p;
  }

  ExprPtr parse_expr_all() {
    ExprPtr e = parse_expr();
    expect(Tok::End);
    return e;
  }

  System parse_system_all() {
    System sys;
    if (!(peek().kind == Tok::Ident && peek().text == "module")) {
      Module m;
      m.name = "Main";
      m.body = parse_stmts({});
      expect(Tok::End);
      sys.modules["Main"] = std::move(m);
      sys.instances.push_back({"main", "Main", {}});
      return sys;
    }
    while (peek().kind == Tok::Ident && peek().text == "module") {
      Module m = parse_module();
      if (sys.modules.count(m.name))
        throw Error("duplicate_module", "duplicate module " + m.name);
      sys.modules[m.name] = std::move(m);
    }
    if (peek().kind == Tok::Ident && peek().text == "system") {
      get();
      for (;;) {
        Instance inst;
        inst.id = expect_ident("instance id");
        expect_eq();
        inst.module = expect_ident("module name");
        expect(Tok::LParen);
        if (peek().kind != Tok::RParen) {
          for (;;) {
            inst.args.push_back(parse_value());
            if (peek().kind == Tok::Comma) { get(); continue; }
            break;
          }
        }
        expect(Tok::RParen);
        sys.instances.push_back(std::move(inst));
        if (peek().kind == Tok::OrOr) { get(); continue; }
        break;
      }
      expect(Tok::Semi);
    }
    expect(Tok::End);
    return sys;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    std::size_t i = pos_ + k;
    if (i >= toks_.size()) i = toks_.size() - 1;
    return toks_[i];
  }
  Token get() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {}) {
    throw ParseError(peek().span, msg, std::move(expected));
  }

  Token expect(Tok kind) {
    if (peek().kind != kind)
      fail(std::string("expected ") + tok_name(kind) + ", found '" + peek().text + "'",
           {tok_name(kind)});
    return get();
  }

  std::string expect_ident(const std::string& what) {
    if (peek().kind != Tok::Ident || is_keyword(peek().text))
      fail("expected " + what + ", found '" + peek().text + "'", {what});
    return get().text;
  }

  void expect_eq() {
    if (peek().kind == Tok::EqEq) fail("expected '=', found '=='");
    if (peek().kind == Tok::Assign) fail("expected '=', found ':='");
    if (peek().kind != Tok::Eq) fail("expected '='", {"="});
    get();
  }

  bool at_ident(const char* word) const {
    return peek().kind == Tok::Ident && peek().text == word;
  }

  // ---- expressions ----

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr e = parse_and();
    while (peek().kind == Tok::OrOr) {
      get();
      e = mk_binary(BinOp::Or, e, parse_and());
    }
    return e;
  }

  ExprPtr parse_and() {
    ExprPtr e = parse_rel();
    while (peek().kind == Tok::AndAnd) {
      get();
      e = mk_binary(BinOp::And, e, parse_rel());
    }
    return e;
  }

  // Relational operators do not chain; nested comparisons need parentheses.
  // Inside an ODE domain, '>' and '>=' would collide with the closing '>'
  // of the evolution statement, so they must appear parenthesized there.
  ExprPtr parse_rel() {
    ExprPtr e = parse_add();
    BinOp op;
    switch (peek().kind) {
      case Tok::Lt: op = BinOp::Lt; break;
      case Tok::Le: op = BinOp::Le; break;
      case Tok::Gt:
        if (no_gt_) return e;
        op = BinOp::Gt;
        break;
      case Tok::Ge:
        if (no_gt_) return e;
        op = BinOp::Ge;
        break;
      case Tok::EqEq: op = BinOp::Eq; break;
      case Tok::Ne: op = BinOp::Ne; break;
      default: return e;
    }
    get();
    return mk_binary(op, e, parse_add());
  }

  ExprPtr parse_add() {
    ExprPtr e = parse_mul();
    for (;;) {
      if (peek().kind == Tok::Plus) {
        get();
        e = mk_binary(BinOp::Add, e, parse_mul());
      } else if (peek().kind == Tok::Minus) {
        get();
        e = mk_binary(BinOp::Sub, e, parse_mul());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_mul() {
    ExprPtr e = parse_unary();
    for (;;) {
      BinOp op;
      if (peek().kind == Tok::Star) op = BinOp::Mul;
      else if (peek().kind == Tok::Slash) op = BinOp::Div;
      else if (peek().kind == Tok::Percent) op = BinOp::Mod;
      else return e;
      get();
      e = mk_binary(op, e, parse_unary());
    }
  }

  ExprPtr parse_unary() {
    if (peek().kind == Tok::Minus) {
      get();
      ExprPtr a = parse_unary();
      if (const auto* r = std::get_if<Expr::RealLit>(&a->node))
        return mk_real(-r->v);  // fold negative literals
      return mk_unary(UnOp::Neg, a);
    }
    if (peek().kind == Tok::Bang) {
      get();
      return mk_unary(UnOp::Not, parse_unary());
    }
    return parse_primary();
  }

  // Parentheses and argument lists reset the domain '>' restriction.
  struct GtScope {
    explicit GtScope(bool& flag) : flag_(flag), saved_(flag) { flag_ = false; }
    ~GtScope() { flag_ = saved_; }
    bool& flag_;
    bool saved_;
  };

  ExprPtr parse_call(UnOp op) {
    GtScope scope(no_gt_);
    expect(Tok::LParen);
    ExprPtr a = parse_expr();
    expect(Tok::RParen);
    return mk_unary(op, a);
  }

  ExprPtr parse_call2(BinOp op) {
    GtScope scope(no_gt_);
    expect(Tok::LParen);
    ExprPtr a = parse_expr();
    expect(Tok::Comma);
    ExprPtr b = parse_expr();
    expect(Tok::RParen);
    return mk_binary(op, a, b);
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        get();
        return mk_real(std::strtod(t.text.c_str(), nullptr));
      }
      case Tok::String:
        get();
        return mk_string(t.text);
      case Tok::LParen: {
        GtScope scope(no_gt_);
        get();
        ExprPtr e = parse_expr();
        expect(Tok::RParen);
        return e;
      }
      case Tok::LBracket: {
        GtScope scope(no_gt_);
        get();
        std::vector<ExprPtr> items;
        if (peek().kind != Tok::RBracket) {
          for (;;) {
            items.push_back(parse_expr());
            if (peek().kind == Tok::Comma) { get(); continue; }
            break;
          }
        }
        expect(Tok::RBracket);
        return mk_list(std::move(items));
      }
      case Tok::Ident: {
        const std::string& w = t.text;
        if (w == "true") { get(); return mk_bool(true); }
        if (w == "false") { get(); return mk_bool(false); }
        if (w == "abs") { get(); return parse_call(UnOp::Abs); }
        if (w == "sqrt") { get(); return parse_call(UnOp::Sqrt); }
        if (w == "sin") { get(); return parse_call(UnOp::Sin); }
        if (w == "cos") { get(); return parse_call(UnOp::Cos); }
        if (w == "exp") { get(); return parse_call(UnOp::Exp); }
        if (w == "head") { get(); return parse_call(UnOp::Head); }
        if (w == "tail") { get(); return parse_call(UnOp::Tail); }
        if (w == "len") { get(); return parse_call(UnOp::Length); }
        if (w == "pop") { get(); return parse_call(UnOp::Pop); }
        if (w == "min") { get(); return parse_call2(BinOp::Min); }
        if (w == "max") { get(); return parse_call2(BinOp::Max); }
        if (w == "push") { get(); return parse_call2(BinOp::Push); }
        if (w == "get") { get(); return parse_call2(BinOp::Get); }
        if (is_keyword(w)) fail("unexpected keyword '" + w + "' in expression");
        get();
        return mk_var(w);
      }
      default:
        fail("expected expression, found '" + t.text + "'", {"expression"});
    }
  }

  Value parse_value() {
    ExprPtr e = parse_unary();
    if (const auto* r = std::get_if<Expr::RealLit>(&e->node)) return Value(r->v);
    if (const auto* b = std::get_if<Expr::BoolLit>(&e->node)) return Value(b->v);
    if (const auto* s = std::get_if<Expr::StringLit>(&e->node)) return Value(s->v);
    if (const auto* l = std::get_if<Expr::ListLit>(&e->node)) {
      Value::List items;
      for (const auto& it : l->items) {
        if (const auto* ri = std::get_if<Expr::RealLit>(&it->node))
          items.push_back(Value(ri->v));
        else if (const auto* si = std::get_if<Expr::StringLit>(&it->node))
          items.push_back(Value(si->v));
        else
          fail("instance arguments must be literal values");
      }
      return Value(std::move(items));
    }
    fail("instance arguments must be literal values");
  }

  // ---- channels and communication ----

  ChannelRef parse_chanref(std::string name) {
    ChannelRef ch;
    ch.name = std::move(name);
    while (peek().kind == Tok::LBracket) {
      get();
      const Token& t = peek();
      if (t.kind == Tok::Number) {
        if (t.text.find('.') != std::string::npos ||
            t.text.find('e') != std::string::npos ||
            t.text.find('E') != std::string::npos)
          fail("channel index must be an integer, string, or name");
        ch.args.push_back(static_cast<std::int64_t>(std::strtoll(t.text.c_str(), nullptr, 10)));
        get();
      } else if (t.kind == Tok::String) {
        ch.args.push_back(t.text);
        get();
      } else if (t.kind == Tok::Ident && !is_keyword(t.text)) {
        ch.args.push_back(ChanVar{t.text});
        get();
      } else {
        fail("channel index must be an integer, string, or name");
      }
      expect(Tok::RBracket);
    }
    return ch;
  }

  CommEvent parse_comm() {
    std::string name = expect_ident("channel name");
    ChannelRef ch = parse_chanref(std::move(name));
    CommEvent ev;
    ev.chan = std::move(ch);
    if (peek().kind == Tok::Query) {
      get();
      ev.is_input = true;
      if (peek().kind == Tok::Ident && !is_keyword(peek().text)) ev.var = get().text;
    } else if (peek().kind == Tok::Bang) {
      get();
      ev.is_input = false;
      // Payload expression is optional; absence means a pure signal.
      switch (peek().kind) {
        case Tok::Comma: case Tok::RParen: case Tok::Semi: case Tok::Arrow:
          break;
        default:
          ev.value = parse_expr();
      }
    } else {
      fail("expected '?' or '!' after channel reference", {"'?'", "'!'"});
    }
    return ev;
  }

  // ---- statements ----

  static const std::set<std::string>& stmt_stoppers() {
    static const std::set<std::string> s = {"end", "endmodule", "elif", "else",
                                            "endif", "procedure", "system", "module"};
    return s;
  }

  bool at_stopper(const std::set<Tok>& extra) const {
    const Token& t = peek();
    if (t.kind == Tok::End) return true;
    if (extra.count(t.kind)) return true;
    if (t.kind == Tok::Ident && stmt_stoppers().count(t.text)) return true;
    return false;
  }

  ProcPtr parse_stmts(const std::set<Tok>& extra) {
    std::vector<ProcPtr> items;
    while (!at_stopper(extra)) items.push_back(parse_stmt());
    if (items.empty()) return mk_skip();
    return mk_seq(std::move(items));
  }

  std::vector<std::pair<CommEvent, ProcPtr>> parse_arms() {
    expect(Tok::LParen);
    std::vector<std::pair<CommEvent, ProcPtr>> arms;
    for (;;) {
      CommEvent ev = parse_comm();
      expect(Tok::Arrow);
      ProcPtr body = parse_stmts({Tok::Comma, Tok::RParen});
      arms.emplace_back(std::move(ev), std::move(body));
      if (peek().kind == Tok::Comma) { get(); continue; }
      break;
    }
    expect(Tok::RParen);
    return arms;
  }

  // <v_dot = e, ... & B>  (equations may be empty: <& B>)
  std::pair<std::vector<OdeEquation>, ExprPtr> parse_ode_head() {
    expect(Tok::Lt);
    no_gt_ = true;
    std::vector<OdeEquation> eqs;
    if (peek().kind != Tok::Amp) {
      for (;;) {
        std::string name = expect_ident("ODE variable");
        if (name.size() < 5 || name.substr(name.size() - 4) != "_dot")
          fail("ODE equation variable must end in _dot");
        std::string var = name.substr(0, name.size() - 4);
        for (const auto& [v, rhs] : eqs)
          if (v == var) fail("duplicate ODE variable " + var);
        expect_assign_eq();
        eqs.emplace_back(var, parse_expr());
        if (peek().kind == Tok::Comma) { get(); continue; }
        break;
      }
    }
    expect(Tok::Amp);
    ExprPtr domain = parse_expr();
    no_gt_ = false;
    expect(Tok::Gt);
    return {std::move(eqs), std::move(domain)};
  }

  void expect_assign_eq() {
    if (peek().kind == Tok::EqEq) fail("expected '=' in ODE equation, found '=='");
    if (peek().kind != Tok::Eq) fail("expected '=' in ODE equation");
    get();
  }

  ProcPtr parse_stmt() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      const std::string& w = t.text;
      if (w == "skip") {
        get();
        expect(Tok::Semi);
        return mk_skip();
      }
      if (w == "wait") {
        get();
        expect(Tok::LParen);
        ExprPtr e = parse_expr();
        expect(Tok::RParen);
        expect(Tok::Semi);
        return mk_wait(std::move(e));
      }
      if (w == "if") return parse_if();
      if (is_keyword(w)) fail("unexpected keyword '" + w + "'");
      // ident-led: assignment, communication, procedure call, or guard.
      if (peek(1).kind == Tok::Assign) {
        get();
        get();
        ExprPtr e = parse_expr();
        expect(Tok::Semi);
        return mk_assign(w, std::move(e));
      }
      if (peek(1).kind == Tok::Query || peek(1).kind == Tok::Bang ||
          peek(1).kind == Tok::LBracket) {
        CommEvent ev = parse_comm();
        expect(Tok::Semi);
        if (ev.is_input) return mk_input(std::move(ev.chan), std::move(ev.var));
        return mk_output(std::move(ev.chan), std::move(ev.value));
      }
      if (peek(1).kind == Tok::Semi) {
        get();
        get();
        return mk_call(w);
      }
      return parse_guard_stmt();
    }
    switch (t.kind) {
      case Tok::Lt: {
        auto [eqs, domain] = parse_ode_head();
        if (peek().kind == Tok::Interrupt) {
          get();
          expect(Tok::LBracket);
          expect(Tok::RBracket);
          auto arms = parse_arms();
          expect(Tok::Semi);
          return mk_interrupt(std::move(eqs), std::move(domain), std::move(arms));
        }
        expect(Tok::Semi);
        return mk_ode(std::move(eqs), std::move(domain));
      }
      case Tok::LBracket: {
        if (peek(1).kind == Tok::RBracket && peek(2).kind == Tok::LParen) {
          get();
          get();
          auto arms = parse_arms();
          expect(Tok::Semi);
          return mk_external_choice(std::move(arms));
        }
        return parse_guard_stmt();  // list-literal-led guard
      }
      case Tok::LParen:
        return parse_paren_stmt();
      case Tok::Number:
      case Tok::String:
      case Tok::Minus:
      case Tok::Bang:
        return parse_guard_stmt();
      default:
        fail("expected statement, found '" + t.text + "'", {"statement"});
    }
  }

  ProcPtr parse_guard_stmt() {
    ExprPtr cond = parse_expr();
    expect(Tok::Arrow);
    ProcPtr body = parse_stmt();
    return mk_guard(std::move(cond), std::move(body));
  }

  ProcPtr parse_if() {
    get();  // if
    std::vector<std::pair<ExprPtr, ProcPtr>> branches;
    ExprPtr cond = parse_expr();
    if (!at_ident("then")) fail("expected 'then'", {"then"});
    get();
    ProcPtr body = parse_stmts({});
    branches.emplace_back(std::move(cond), std::move(body));
    ProcPtr else_branch = mk_skip();
    for (;;) {
      if (at_ident("elif")) {
        get();
        ExprPtr c = parse_expr();
        if (!at_ident("then")) fail("expected 'then'", {"then"});
        get();
        branches.emplace_back(std::move(c), parse_stmts({}));
        continue;
      }
      if (at_ident("else")) {
        get();
        else_branch = parse_stmts({});
      }
      break;
    }
    if (!at_ident("endif")) fail("expected 'endif'", {"endif"});
    get();
    expect(Tok::Semi);
    return mk_if(std::move(branches), std::move(else_branch));
  }

  // '(' ... : multi-assignment, grouped block, repetition, or internal choice.
  ProcPtr parse_paren_stmt() {
    // Lookahead for "(x, y) := ".
    std::size_t save = pos_;
    get();  // (
    bool is_multi = false;
    if (peek().kind == Tok::Ident && !is_keyword(peek().text)) {
      std::size_t k = 0;
      for (;;) {
        if (peek(k).kind != Tok::Ident) break;
        if (peek(k + 1).kind == Tok::Comma) { k += 2; continue; }
        if (peek(k + 1).kind == Tok::RParen && peek(k + 2).kind == Tok::Assign)
          is_multi = true;
        break;
      }
    }
    if (is_multi) {
      std::vector<std::string> vars;
      for (;;) {
        vars.push_back(expect_ident("variable"));
        if (peek().kind == Tok::Comma) { get(); continue; }
        break;
      }
      expect(Tok::RParen);
      expect(Tok::Assign);
      expect(Tok::LParen);
      std::vector<ExprPtr> values;
      for (;;) {
        values.push_back(parse_expr());
        if (peek().kind == Tok::Comma) { get(); continue; }
        break;
      }
      expect(Tok::RParen);
      expect(Tok::Semi);
      if (vars.size() != values.size())
        throw ParseError(peek().span, "multi-assignment arity mismatch");
      return mk_multi_assign(std::move(vars), std::move(values));
    }
    pos_ = save;
    get();  // (
    ProcPtr body = parse_stmts({Tok::RParen});
    expect(Tok::RParen);
    if (peek().kind == Tok::StarStar) {
      get();
      expect(Tok::Semi);
      return mk_repeat(std::move(body));
    }
    if (peek().kind == Tok::IntChoice) {
      get();
      expect(Tok::LParen);
      ProcPtr right = parse_stmts({Tok::RParen});
      expect(Tok::RParen);
      expect(Tok::Semi);
      return mk_internal_choice(std::move(body), std::move(right));
    }
    expect(Tok::Semi);
    return body;
  }

  // ---- modules ----

  Module parse_module() {
    get();  // module
    Module m;
    m.name = expect_ident("module name");
    if (peek().kind == Tok::LParen) {
      get();
      if (peek().kind != Tok::RParen) {
        for (;;) {
          m.params.push_back(expect_ident("parameter"));
          if (peek().kind == Tok::Comma) { get(); continue; }
          break;
        }
      }
      expect(Tok::RParen);
    }
    if (peek().kind == Tok::Colon) get();
    if (!at_ident("begin")) fail("expected 'begin'", {"begin"});
    get();
    while (at_ident("output")) {
      get();
      for (;;) {
        m.outputs.push_back(expect_ident("output variable"));
        if (peek().kind == Tok::Comma) { get(); continue; }
        break;
      }
      expect(Tok::Semi);
    }
    while (at_ident("procedure")) {
      get();
      std::string name = expect_ident("procedure name");
      if (!at_ident("begin")) fail("expected 'begin'", {"begin"});
      get();
      ProcPtr body = parse_stmts({});
      if (!at_ident("end")) fail("expected 'end'", {"end"});
      get();
      if (m.procedures.count(name))
        fail("duplicate procedure " + name);
      m.procedures[name] = std::move(body);
    }
    m.body = parse_stmts({});
    if (at_ident("end")) get();
    if (!at_ident("endmodule")) fail("expected 'endmodule'", {"endmodule"});
    get();
    return m;
  }

  std::vector<Token> toks_;
  std::string file_;
  std::size_t pos_ = 0;
  bool no_gt_ = false;
};

}  // namespace

ProcPtr parse_process(const std::string& text, const std::string& filename) {
  return Parser(text, filename).parse_process_all();
}

ExprPtr parse_expr_text(const std::string& text, const std::string& filename) {
  return Parser(text, filename).parse_expr_all();
}

System parse_system(const std::string& text, const std::string& filename) {
  System sys = Parser(text, filename).parse_system_all();
  validate_system(sys);
  return sys;
}

System parse_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str(), path);
}

}  // namespace hcsp
