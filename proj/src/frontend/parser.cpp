#include "twist/parser.hpp"

#include <charconv>
#include <sstream>

namespace twist {

namespace {

std::int64_t parse_integer(const Token& t) {
  std::int64_t v = 0;
  const char* first = t.lexeme.data();
  const char* last = first + t.lexeme.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw CompileError("integer literal out of range: " + t.lexeme, t.pos);
  }
  return v;
}

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : toks_(tokens) {}

  SurfaceModule module() {
    SurfaceModule m;
    std::vector<std::string> ns;
    while (!at_end()) {
      if (peek().is_keyword("import")) {
        Position pos = take().pos;
        const Token& file = expect(TokenKind::Text, "a file name");
        m.imports.push_back({decode_text(file.lexeme), pos});
        continue;
      }
      if (peek().is_punct(")")) {
        throw CompileError("unbalanced namespace parentheses: unexpected ')'",
                           peek().pos);
      }
      declaration(ns, m.decls);
    }
    return m;
  }

  Expr whole_expression() {
    if (at_end()) throw CompileError("expected an expression", end_pos());
    Expr e = expression();
    if (!at_end()) fail("end of input");
    return e;
  }

 private:
  bool at_end() const { return i_ >= toks_.size(); }
  const Token& peek(std::size_t ahead = 0) const {
    static const Token eof{TokenKind::Punctuation, "", {}, 0};
    return i_ + ahead < toks_.size() ? toks_[i_ + ahead] : eof;
  }
  const Token& take() { return toks_[i_++]; }

  Position end_pos() const {
    if (toks_.empty()) return {};
    Position p = toks_.back().pos;
    p.column += static_cast<int>(toks_.back().lexeme.size());
    return p;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    if (at_end()) {
      throw CompileError("expected " + expected + " but found end of input",
                         end_pos());
    }
    throw CompileError(
        "expected " + expected + " but found " + to_string(peek().kind) +
            " '" + peek().lexeme + "'",
        peek().pos);
  }

  const Token& expect(TokenKind kind, const std::string& what) {
    if (at_end() || peek().kind != kind) fail(what);
    return take();
  }

  void expect_punct(std::string_view p) {
    if (!peek().is_punct(p) || at_end()) fail("'" + std::string(p) + "'");
    take();
  }

  // Upper ( '::' Upper )*
  std::vector<std::string> namespace_path() {
    std::vector<std::string> path;
    path.push_back(expect(TokenKind::UpperIdent, "a namespace name").lexeme);
    while (peek().is_punct("::") && peek(1).kind == TokenKind::UpperIdent) {
      take();
      path.push_back(take().lexeme);
    }
    return path;
  }

  void declaration(std::vector<std::string>& ns, std::vector<Decl>& out) {
    const Token& t = peek();
    if (t.is_keyword("namespace")) {
      take();
      auto path = namespace_path();
      expect_punct("(");
      ns.insert(ns.end(), path.begin(), path.end());
      while (!peek().is_punct(")")) {
        if (at_end()) {
          throw CompileError(
              "unbalanced namespace parentheses: missing ')' for namespace",
              t.pos);
        }
        if (peek().is_keyword("import")) {
          throw CompileError("import is only allowed at top level", peek().pos);
        }
        declaration(ns, out);
      }
      take();
      ns.resize(ns.size() - path.size());
      return;
    }
    Decl d;
    d.ns = ns;
    d.pos = t.pos;
    if (t.is_keyword("using")) {
      take();
      d.kind = Decl::Kind::Using;
      d.names = namespace_path();
    } else if (t.is_keyword("data")) {
      take();
      d.kind = Decl::Kind::Data;
      d.names.push_back(expect(TokenKind::LowerIdent, "a data name").lexeme);
      while (peek().is_punct(",") && !at_end()) {
        take();
        d.names.push_back(expect(TokenKind::LowerIdent, "a data name").lexeme);
      }
    } else if (t.is_keyword("def")) {
      take();
      d.kind = Decl::Kind::Def;
      if (peek().kind == TokenKind::LowerIdent ||
          (peek().kind == TokenKind::Operator && peek().lexeme != "=")) {
        d.name = take().lexeme;
      } else {
        fail("a definition name");
      }
      if (!peek().is(TokenKind::Operator, "=")) fail("'='");
      take();
      d.body = expression();
    } else {
      fail("a declaration");
    }
    out.push_back(std::move(d));
  }

  // [Upper '::']* (lower | operator), with the leading token already checked.
  std::string qualified_constant(bool allow_operator) {
    std::string name;
    while (peek().kind == TokenKind::UpperIdent && peek(1).is_punct("::")) {
      name += take().lexeme;
      name += take().lexeme;
    }
    if (peek().kind == TokenKind::LowerIdent ||
        (allow_operator && peek().kind == TokenKind::Operator && !name.empty())) {
      return name + take().lexeme;
    }
    fail("a constant name");
  }

  bool starts_qualified() const {
    return peek().kind == TokenKind::UpperIdent && peek(1).is_punct("::");
  }

  bool starts_atom() const {
    if (at_end()) return false;
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Integer:
      case TokenKind::Text:
      case TokenKind::UpperIdent:
      case TokenKind::LowerIdent:
        return true;
      case TokenKind::Punctuation:
        return t.lexeme == "(" || t.lexeme == "[";
      default:
        return false;
    }
  }

  Expr expression() {
    if (peek().is_keyword("try") && !at_end()) {
      Position pos = take().pos;
      Expr body = expression();
      if (!peek().is_keyword("catch") || at_end()) fail("'catch'");
      take();
      Expr handler = expression();
      Expr e = Expr::try_catch(std::move(body), std::move(handler));
      e.pos = pos;
      return e;
    }
    Expr lhs = application();
    while (!at_end() && peek().kind == TokenKind::Operator &&
           peek().lexeme != "=") {
      std::string op = take().lexeme;
      Expr rhs = application();
      lhs = Expr::binary(std::move(op), std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr application() {
    if (!starts_atom()) fail("an expression");
    Expr e = atom();
    while (starts_atom()) e = Expr::apply(std::move(e), atom());
    return e;
  }

  Expr atom() {
    const Token& t = peek();
    Position pos = t.pos;
    Expr e;
    switch (t.kind) {
      case TokenKind::Integer:
        e = Expr::int_lit(parse_integer(take()));
        break;
      case TokenKind::Text:
        e = Expr::text_lit(decode_text(take().lexeme));
        break;
      case TokenKind::UpperIdent:
        if (starts_qualified()) {
          e = Expr::constant(qualified_constant(false));
        } else {
          e = Expr::variable(take().lexeme);
        }
        break;
      case TokenKind::LowerIdent:
        e = Expr::constant(take().lexeme);
        break;
      default:
        if (t.lexeme == "[") {
          e = abstraction();
        } else {
          e = parenthesized();
        }
    }
    e.pos = pos;
    return e;
  }

  Expr parenthesized() {
    expect_punct("(");
    // (op) and (Ns::op) name an operator as a value.
    if (peek().kind == TokenKind::Operator && peek(1).is_punct(")")) {
      Expr e = Expr::constant(take().lexeme);
      take();
      return e;
    }
    if (starts_qualified()) {
      std::size_t save = i_;
      while (peek().kind == TokenKind::UpperIdent && peek(1).is_punct("::")) {
        i_ += 2;
      }
      bool op = peek().kind == TokenKind::Operator && peek(1).is_punct(")");
      i_ = save;
      if (op) {
        Expr e = Expr::constant(qualified_constant(true));
        take();
        return e;
      }
    }
    Expr e = expression();
    expect_punct(")");
    return e;
  }

  Expr abstraction() {
    expect_punct("[");
    std::vector<Clause> clauses;
    while (true) {
      Clause c;
      c.pos = peek().pos;
      while (!peek().is_punct("->")) {
        if (at_end()) fail("'->'");
        c.patterns.push_back(pattern(true));
      }
      take();
      c.body = expression();
      clauses.push_back(std::move(c));
      if (peek().is_punct("|") && !at_end()) {
        take();
        continue;
      }
      expect_punct("]");
      break;
    }
    return Expr::abstraction(std::move(clauses));
  }

  Pattern pattern(bool top) {
    const Token& t = peek();
    Pattern p;
    p.pos = t.pos;
    switch (t.kind) {
      case TokenKind::UpperIdent:
        if (starts_qualified()) {
          p.kind = Pattern::Kind::Tag;
          p.name = qualified_constant(false);
        } else {
          p.kind = Pattern::Kind::Var;
          p.name = take().lexeme;
        }
        return p;
      case TokenKind::LowerIdent:
        p.kind = Pattern::Kind::Tag;
        p.name = take().lexeme;
        return p;
      case TokenKind::Integer:
        p.kind = Pattern::Kind::Int;
        p.integer = parse_integer(take());
        return p;
      case TokenKind::Text:
        p.kind = Pattern::Kind::Text;
        p.text = decode_text(take().lexeme);
        return p;
      default:
        break;
    }
    if (!t.is_punct("(") || at_end()) fail(top ? "a pattern or '->'" : "a pattern");
    take();
    Pattern head = pattern(false);
    if (peek().is_punct(")")) {
      take();
      return head;
    }
    if (head.kind != Pattern::Kind::Tag) {
      throw CompileError("the head of a compound pattern must be a constant",
                         head.pos);
    }
    p.kind = Pattern::Kind::Compound;
    p.name = head.name;
    while (!peek().is_punct(")")) {
      if (at_end()) fail("')'");
      p.items.push_back(pattern(false));
    }
    take();
    return p;
  }

  std::span<const Token> toks_;
  std::size_t i_ = 0;
};

// ---- printing -------------------------------------------------------------

bool is_operator_name(const std::string& name) {
  auto sep = name.rfind("::");
  char c = name[sep == std::string::npos ? 0 : sep + 2];
  return is_operator_char(c);
}

void print_int(std::ostream& os, std::int64_t v) {
  if (v < 0) {
    os << '(' << v << ')';
  } else {
    os << v;
  }
}

// level 0: anywhere, 1: operand of a binary operator, 2: function position,
// 3: argument position
void print_expr_to(std::ostream& os, const Expr& e, int level);

void print_clauses(std::ostream& os, const std::vector<Clause>& clauses) {
  os << "[ ";
  bool first = true;
  for (const Clause& c : clauses) {
    if (!first) os << " | ";
    first = false;
    for (const Pattern& p : c.patterns) os << print_pattern(p) << ' ';
    os << "-> ";
    print_expr_to(os, c.body, 0);
  }
  os << " ]";
}

void print_expr_to(std::ostream& os, const Expr& e, int level) {
  switch (e.kind) {
    case Expr::Kind::Variable:
      os << e.name;
      return;
    case Expr::Kind::Constant:
      if (is_operator_name(e.name)) {
        os << '(' << e.name << ')';
      } else {
        os << e.name;
      }
      return;
    case Expr::Kind::Int:
      print_int(os, e.integer);
      return;
    case Expr::Kind::Text:
      os << encode_text(e.text);
      return;
    case Expr::Kind::Abstraction:
      print_clauses(os, e.clauses);
      return;
    case Expr::Kind::Apply:
      if (level == 3) os << '(';
      print_expr_to(os, e.items[0], 2);
      os << ' ';
      print_expr_to(os, e.items[1], 3);
      if (level == 3) os << ')';
      return;
    case Expr::Kind::BinaryOp:
      if (level >= 1) os << '(';
      print_expr_to(os, e.items[0],
                    e.items[0].kind == Expr::Kind::BinaryOp ? 0 : 1);
      os << ' ' << e.name << ' ';
      print_expr_to(os, e.items[1], 1);
      if (level >= 1) os << ')';
      return;
    case Expr::Kind::Try:
      if (level >= 1) os << '(';
      os << "try ";
      print_expr_to(os, e.items[0], 0);
      os << " catch ";
      print_expr_to(os, e.items[1], 0);
      if (level >= 1) os << ')';
      return;
  }
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

SurfaceModule parse_module(std::span<const Token> tokens) {
  return Parser(tokens).module();
}

SurfaceModule parse_source(std::string_view source, std::string file) {
  try {
    auto tokens = tokenize(source);
    SurfaceModule m = parse_module(tokens);
    m.file = std::move(file);
    return m;
  } catch (const CompileError& e) {
    throw e.in_file(file);
  }
}

Expr parse_expression(std::span<const Token> tokens) {
  return Parser(tokens).whole_expression();
}

std::string print_pattern(const Pattern& p) {
  std::ostringstream os;
  switch (p.kind) {
    case Pattern::Kind::Var:
    case Pattern::Kind::Tag:
      os << p.name;
      break;
    case Pattern::Kind::Int:
      print_int(os, p.integer);
      break;
    case Pattern::Kind::Text:
      os << encode_text(p.text);
      break;
    case Pattern::Kind::Compound:
      os << '(' << p.name;
      for (const Pattern& sub : p.items) os << ' ' << print_pattern(sub);
      os << ')';
      break;
  }
  return os.str();
}

std::string print_expr(const Expr& expr) {
  std::ostringstream os;
  print_expr_to(os, expr, 0);
  return os.str();
}

std::string print_module(const SurfaceModule& module) {
  std::ostringstream os;
  for (const Import& i : module.imports) {
    os << "import " << encode_text(i.path) << '\n';
  }
  for (const Decl& d : module.decls) {
    if (!d.ns.empty()) os << "namespace " << join(d.ns, "::") << " ( ";
    switch (d.kind) {
      case Decl::Kind::Data:
        os << "data " << join(d.names, ", ");
        break;
      case Decl::Kind::Using:
        os << "using " << join(d.names, "::");
        break;
      case Decl::Kind::Def:
        os << "def " << d.name << " = " << print_expr(d.body);
        break;
    }
    if (!d.ns.empty()) os << " )";
    os << '\n';
  }
  return os.str();
}

}  // namespace twist
