#include <doctest.h>

#include <random>

#include "../support/generator.hpp"
#include "../support/reference.hpp"
#include "../support/util.hpp"

using namespace twist;

namespace {

const char* kFib = R"(
namespace Fibonacci (
    def fib =
        [ 0 -> 1
        | 1 -> 1
        | N -> fib (N - 2) + fib (N - 1) ]
)
using Fibonacci
def main = fib 5
)";

const char* kAppend = R"(
namespace List (
    data nil, cons
    def ++ =
        [ nil YY -> YY
        | (cons X XX) YY -> cons X (XX ++ YY) ]
)
using List
def main = (cons 1 nil) ++ (cons 2 nil)
)";

std::size_t count_thunks(const ClauseProgram& p) {
  std::size_t n = 0;
  for (const BuildInstr& b : p.build) n += std::holds_alternative<MakeThunk>(b);
  return n;
}

}  // namespace

TEST_CASE("lifting a nested abstraction") {
  ResolvedProgram lifted = lift_lambdas(testutil::resolve_text("def f = [X -> [Y -> X]]"));
  const ResolvedDef* f = lifted.find_def("f");
  const ResolvedDef* inner = lifted.find_def("f/lift0");
  REQUIRE(f);
  REQUIRE(inner);
  // f X = f/lift0 X
  const Term& body = f->body.clauses[0].body;
  REQUIRE(body.kind == Term::Kind::Apply);
  CHECK(body.items[0] == Term::constant("f/lift0"));
  CHECK(body.items[1].var == f->body.clauses[0].patterns[0].var);
  // f/lift0 X Y = X
  REQUIRE(inner->body.kind == Term::Kind::Lambda);
  const TermClause& c = inner->body.clauses[0];
  REQUIRE(c.patterns.size() == 2);
  CHECK(c.patterns[0].name == "X");
  CHECK(c.patterns[1].name == "Y");
  CHECK(c.body.var == c.patterns[0].var);
  CHECK(lifted.find("f/lift0"));

  auto r = testutil::run("def f = [X -> [Y -> X]]\ndef main = f 1 2");
  CHECK(r.value == "1");
}

TEST_CASE("lifting leaves only top-level abstractions") {
  ResolvedProgram lifted = lift_lambdas(testutil::resolve_text(
      "def g = [ X -> [ Y -> [ Z -> X + Y + Z ] ] ]\n"
      "def main = try g 1 2 3 catch [ E -> E ]"));
  std::function<bool(const Term&)> nested = [&](const Term& t) {
    if (t.kind == Term::Kind::Lambda || t.kind == Term::Kind::Try) return true;
    for (const Term& i : t.items) {
      if (nested(i)) return true;
    }
    return false;
  };
  for (const ResolvedDef& d : lifted.defs) {
    for (const TermClause& c : definition_clauses(d.body)) CHECK_FALSE(nested(c.body));
  }
  CHECK(testutil::run("def g = [ X -> [ Y -> [ Z -> X + Y + Z ] ] ]\n"
                      "def main = try g 1 2 3 catch [ E -> E ]").value == "6");
}

TEST_CASE("compile the literal clause of fib") {
  Program p = compile_text(kFib);
  const Combinator& fib = p.at("Fibonacci::fib");
  REQUIRE(fib.clauses.size() == 3);
  const ClauseProgram& c0 = fib.clauses[0];
  REQUIRE(c0.match.size() == 2);
  auto bind = std::get<BindArg>(c0.match[0]);
  CHECK(bind.arg == 0);
  CHECK(bind.reg == 0);
  auto test = std::get<TestLiteral>(c0.match[1]);
  CHECK(test.reg == 0);
  CHECK(render(*test.literal) == "0");
  REQUIRE(c0.build.size() == 2);
  auto load = std::get<LoadConst>(c0.build[0]);
  CHECK(render(*load.value) == "1");
  CHECK(load.reg == 1);
  CHECK(std::get<ReturnValue>(c0.build[1]).reg == 1);
}

TEST_CASE("the recursive fib clause builds five thunks") {
  Program p = compile_text(kFib);
  const ClauseProgram& c2 = p.at("Fibonacci::fib").clauses[2];
  CHECK(count_thunks(c2) == 5);
  CHECK(std::holds_alternative<ReturnChain>(c2.build.back()));
  // The first thunk evaluates N - 1: arguments run right to left.
  for (const BuildInstr& b : c2.build) {
    if (auto* t = std::get_if<MakeThunk>(&b)) {
      CHECK(t->args.size() == 2);
      break;
    }
  }
  CHECK(verify(c2).empty());
}

TEST_CASE("compound patterns test the tag and project the fields") {
  Program p = compile_text(kAppend);
  const ClauseProgram& c1 = p.at("List::++").clauses[1];
  REQUIRE(c1.match.size() >= 4);
  auto tag = std::get<TestTag>(c1.match[1]);
  CHECK(tag.tag->name == "List::cons");
  CHECK(tag.arity == 2);
  auto f0 = std::get<Project>(c1.match[2]);
  auto f1 = std::get<Project>(c1.match[3]);
  CHECK(f0.reg == tag.reg);
  CHECK(f0.field == 0);
  CHECK(f1.field == 1);
  const ClauseProgram& c0 = p.at("List::++").clauses[0];
  auto nil = std::get<TestTag>(c0.match[1]);
  CHECK(nil.tag->name == "List::nil");
  CHECK(nil.arity == 0);
}

TEST_CASE("disassembly listing") {
  Program p = compile_text(kAppend);
  CHECK(disassemble(p.at("List::nil")) == "combinator List::nil: data-tag, 0 clauses\n");
  CHECK(disassemble(p.at("System::+")).find("builtin") != std::string::npos);
  std::string fib = disassemble(compile_text(kFib).at("Fibonacci::fib"));
  CHECK(fib.find("combinator Fibonacci::fib: defined, 3 clauses\n"
                 "  clause 0 arity 1 registers 2\n"
                 "    match\n"
                 "      bind_arg 0 r0\n"
                 "      test_literal r0 0\n"
                 "    build\n"
                 "      load_const 1 r1\n"
                 "      return_value r1\n") == 0);
}

TEST_CASE("assemble reverses disassemble") {
  for (const char* src : {kFib, kAppend,
                          "def main = try \"a\\\"b\" catch [ E -> (-4) ]",
                          "def k = [ X Y -> X ]\ndef main = k (k 1) 2 3"}) {
    Program p = compile_text(src);
    std::string listing = disassemble(p);
    auto back = assemble(listing, p);
    REQUIRE(back.size() == p.combinators().size());
    std::string again;
    for (std::size_t i = 0; i < back.size(); ++i) {
      Combinator c;
      c.name = back[i].name;
      c.kind = back[i].kind;
      c.clauses = back[i].clauses;
      c.builtin_arity = p.combinators()[i]->builtin_arity;
      CHECK(c.name == p.combinators()[i]->name);
      again += disassemble(c);
    }
    CHECK(again == listing);
  }
  Program p = compile_text(kFib);
  CHECK_THROWS_AS(assemble("combinator nowhere: defined, 0 clauses\n", p), CompileError);
  CHECK_THROWS_AS(assemble("garbage\n", p), CompileError);
}

TEST_CASE("compiled programs pass the static verifier") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 60; ++i) {
    Program p = compile_text(gen::program(rng));
    for (const auto& c : p.combinators()) {
      for (const ClauseProgram& clause : c->clauses) {
        auto problems = verify(clause);
        INFO(c->name);
        CHECK(problems.empty());
      }
    }
  }
}

TEST_CASE("the static verifier rejects malformed clauses") {
  ClauseProgram unread;
  unread.arity = 1;
  unread.registers = 2;
  unread.build.push_back(ReturnValue{1});
  CHECK_FALSE(verify(unread).empty());

  ClauseProgram unguarded;
  unguarded.arity = 1;
  unguarded.registers = 2;
  unguarded.match.push_back(BindArg{0, 0});
  unguarded.match.push_back(Project{0, 0, 1});
  unguarded.build.push_back(ReturnValue{1});
  CHECK_FALSE(verify(unguarded).empty());

  ClauseProgram no_return;
  no_return.arity = 1;
  no_return.registers = 1;
  no_return.match.push_back(BindArg{0, 0});
  CHECK_FALSE(verify(no_return).empty());

  ClauseProgram dangling;
  dangling.arity = 1;
  dangling.registers = 3;
  dangling.match.push_back(BindArg{0, 0});
  dangling.build.push_back(MakeThunk{0, {0}, 1});
  dangling.build.push_back(MakeThunk{0, {0}, 2});
  dangling.build.push_back(ReturnChain{2, 2});
  CHECK_FALSE(verify(dangling).empty());
}

TEST_CASE("lifting preserves meaning") {
  std::mt19937_64 rng(4242);
  gen::Options options;
  options.print = true;
  int compared = 0;
  for (int i = 0; i < 150; ++i) {
    std::string src = gen::program(rng, options);
    ResolvedProgram resolved = testutil::resolve_text(src);
    ref::Result before = ref::evaluate(resolved);
    if (before.status == ref::Status::Diverged) continue;
    ref::Result after = ref::evaluate(lift_lambdas(resolved));
    INFO(src);
    CHECK(static_cast<int>(after.status) == static_cast<int>(before.status));
    CHECK(after.value == before.value);
    CHECK(after.output == before.output);
    ++compared;
  }
  CHECK(compared >= 140);
}
