#include <doctest.h>

#include <random>

#include "../support/generator.hpp"
#include "../support/util.hpp"

using namespace twist;

namespace {

const char* kFibScript = R"(import "prelude.eg"

namespace Fibonacci (
    using System

    def fib =
        [ 0 -> 1
        | 1 -> 1
        | N -> fib (N - 2) + fib (N - 1) ]
)

using Fibonacci

def main = fib 5
)";

const char* kListSource = R"(namespace List (
    data nil, cons

    def ++ =
        [ nil YY -> YY
        | (cons X XX) YY -> cons X (XX ++ YY) ]
)
)";

std::size_t count(const std::vector<Token>& tokens, std::string_view punct) {
  std::size_t n = 0;
  for (const Token& t : tokens) n += t.is_punct(punct);
  return n;
}

}  // namespace

TEST_CASE("tokenize def main") {
  auto tokens = tokenize("def main = fib 5");
  REQUIRE(tokens.size() == 5);
  CHECK(tokens[0].is(TokenKind::Keyword, "def"));
  CHECK(tokens[1].is(TokenKind::LowerIdent, "main"));
  CHECK(tokens[2].is(TokenKind::Operator, "="));
  CHECK(tokens[3].is(TokenKind::LowerIdent, "fib"));
  CHECK(tokens[4].is(TokenKind::Integer, "5"));
}

TEST_CASE("tokenize fib body") {
  auto tokens = tokenize("[ 0 -> 1 | 1 -> 1 | N -> fib (N - 2) + fib (N - 1) ]");
  CHECK(count(tokens, "[") + count(tokens, "]") == 2);
  CHECK(count(tokens, "|") == 2);
  CHECK(count(tokens, "->") == 3);
  CHECK(tokens[9].is(TokenKind::UpperIdent, "N"));
}

TEST_CASE("tokenize lexemes are exact slices and positions advance") {
  std::string src = "def f = [ X -> \"a\\\"b\" ] # trailing\n  f";
  for (const Token& t : tokenize(src)) {
    CHECK(src.substr(t.offset, t.lexeme.size()) == t.lexeme);
  }
  auto tokens = tokenize(src);
  CHECK(tokens.back().pos.line == 2);
  CHECK(tokens.back().pos.column == 3);
  CHECK(decode_text(tokens[6].lexeme) == "a\"b");
}

TEST_CASE("tokenize signed literals versus subtraction") {
  auto sub = tokenize("N - 2");
  REQUIRE(sub.size() == 3);
  CHECK(sub[1].is(TokenKind::Operator, "-"));
  auto tight = tokenize("N-2");
  REQUIRE(tight.size() == 3);
  auto neg = tokenize("f (-2)");
  REQUIRE(neg.size() == 4);
  CHECK(neg[2].is(TokenKind::Integer, "-2"));
  auto after_operator = tokenize("1 + -2");
  REQUIRE(after_operator.size() == 3);
  CHECK(after_operator[2].is(TokenKind::Integer, "-2"));
}

TEST_CASE("tokenize qualified names") {
  auto tokens = tokenize("List::cons System::+");
  REQUIRE(tokens.size() == 6);
  CHECK(tokens[0].is(TokenKind::UpperIdent, "List"));
  CHECK(tokens[1].is_punct("::"));
  CHECK(tokens[2].is(TokenKind::LowerIdent, "cons"));
  CHECK(tokens[5].is(TokenKind::Operator, "+"));
}

TEST_CASE("tokenize errors") {
  CHECK_THROWS_AS(tokenize("\"open"), CompileError);
  CHECK_THROWS_AS(tokenize("def x = `"), CompileError);
  try {
    tokenize("def x =\n  1 ` 2");
  } catch (const CompileError& e) {
    CHECK(e.position().line == 2);
    CHECK(e.position().column == 5);
  }
}

TEST_CASE("parse the fib script") {
  SurfaceModule m = parse_source(kFibScript);
  REQUIRE(m.imports.size() == 1);
  CHECK(m.imports[0].path == "prelude.eg");
  REQUIRE(m.decls.size() == 4);
  CHECK(m.decls[0].kind == Decl::Kind::Using);
  CHECK(m.decls[0].ns == std::vector<std::string>{"Fibonacci"});
  const Decl& fib = m.decls[1];
  CHECK(fib.kind == Decl::Kind::Def);
  CHECK(fib.name == "fib");
  REQUIRE(fib.body.kind == Expr::Kind::Abstraction);
  REQUIRE(fib.body.clauses.size() == 3);
  const Expr& rec = fib.body.clauses[2].body;
  CHECK(rec.kind == Expr::Kind::BinaryOp);
  CHECK(rec.name == "+");
  CHECK(m.decls[2].kind == Decl::Kind::Using);
  CHECK(m.decls[3].name == "main");
}

TEST_CASE("parse the List namespace") {
  SurfaceModule m = parse_source(kListSource);
  REQUIRE(m.decls.size() == 2);
  CHECK(m.decls[0].kind == Decl::Kind::Data);
  CHECK(m.decls[0].names == std::vector<std::string>{"nil", "cons"});
  CHECK(m.decls[1].name == "++");
  const Clause& c = m.decls[1].body.clauses[1];
  REQUIRE(c.patterns.size() == 2);
  CHECK(c.patterns[0] == Pattern::compound("cons", {Pattern::var("X"), Pattern::var("XX")}));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_source("def = 1"), CompileError);
  CHECK_THROWS_AS(parse_source("def f = [ X -> ]"), CompileError);
  CHECK_THROWS_AS(parse_source("namespace A ( def x = 1"), CompileError);
  try {
    parse_source("def f = 1\ndef g = (1 + )");
    FAIL("expected an error");
  } catch (const CompileError& e) {
    CHECK(e.position().line == 2);
  }
}

TEST_CASE("application is left associative and operators bind looser") {
  Expr e = parse_expression(tokenize("f a b + g c"));
  REQUIRE(e.kind == Expr::Kind::BinaryOp);
  const Expr& lhs = e.items[0];
  REQUIRE(lhs.kind == Expr::Kind::Apply);
  CHECK(lhs.items[0].kind == Expr::Kind::Apply);
  CHECK(lhs.items[1] == Expr::constant("b"));
}

TEST_CASE("print then parse is the identity on the samples") {
  for (const char* src : {kFibScript, kListSource}) {
    SurfaceModule m = parse_source(src);
    CHECK(parse_source(print_module(m)) == m);
  }
}

TEST_CASE("print then parse round trip on generated programs") {
  std::mt19937_64 rng(20240611);
  gen::Options options;
  options.print = true;
  options.parallel = true;
  for (int i = 0; i < 150; ++i) {
    std::string src = gen::program(rng, options);
    SurfaceModule m = parse_source(src);
    std::string printed = print_module(m);
    INFO(src);
    CHECK(parse_source(printed) == m);
    CHECK(print_module(parse_source(printed)) == printed);
  }
}

TEST_CASE("resolve qualifies through usings and namespaces") {
  ResolvedProgram p = testutil::resolve_text(kFibScript);
  const ResolvedDef* fib = p.find_def("Fibonacci::fib");
  REQUIRE(fib);
  REQUIRE(fib->body.kind == Term::Kind::Lambda);
  const Term& rec = fib->body.clauses[2].body;
  REQUIRE(rec.kind == Term::Kind::Apply);
  CHECK(rec.items[0] == Term::constant("System::+"));
  CHECK(rec.items[1].items[0] == Term::constant("Fibonacci::fib"));
  const ResolvedDef* main = p.find_def("main");
  REQUIRE(main);
  CHECK(main->body.items[0] == Term::constant("Fibonacci::fib"));
  REQUIRE(p.find("List::cons"));
  CHECK(p.find("List::cons")->kind == SymbolKind::Data);
}

TEST_CASE("resolve binds variables to unique ids") {
  ResolvedProgram p = testutil::resolve_text("def f = [ X Y -> X ]\ndef g = [ X -> X ]\n");
  const Term& f = p.find_def("f")->body;
  const Term& g = p.find_def("g")->body;
  CHECK(f.clauses[0].patterns[0].var == f.clauses[0].body.var);
  CHECK(f.clauses[0].patterns[0].var != g.clauses[0].patterns[0].var);
}

TEST_CASE("resolve errors") {
  CHECK_THROWS_AS(testutil::resolve_text("def main = nothere 1"), CompileError);
  CHECK_THROWS_AS(testutil::resolve_text("def f = 1\ndef f = 2"), CompileError);
  CHECK_THROWS_AS(testutil::resolve_text("using Nowhere\ndef main = 1"), CompileError);
  CHECK_THROWS_AS(testutil::resolve_text("def f = [ X X -> X ]"), CompileError);
  CHECK_THROWS_AS(testutil::resolve_text("def main = Y"), CompileError);
  CHECK_THROWS_AS(testutil::resolve_text("def main = [ X -> X ]"), CompileError);
  CHECK_THROWS_AS(testutil::resolve_text(
                      "namespace A ( def x = 1 )\nnamespace B ( def x = 2 )\n"
                      "using A\nusing B\ndef main = x"),
                  CompileError);
}

TEST_CASE("innermost namespace wins over usings") {
  ResolvedProgram p = testutil::resolve_text(
      "namespace A ( def x = 1 )\n"
      "namespace B ( using A\n def x = 2\n def y = x )\n");
  CHECK(p.find_def("B::y")->body == Term::constant("B::x"));
}
