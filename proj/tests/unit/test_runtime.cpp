#include <doctest.h>

#include <random>

#include "../support/generator.hpp"
#include "../support/reference.hpp"
#include "../support/util.hpp"

using namespace twist;

namespace {

const char* kFib = R"(
def fib =
    [ 0 -> 1
    | 1 -> 1
    | N -> fib (N - 2) + fib (N - 1) ]
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

ThunkPtr thunk(std::vector<NodePtr> cells) {
  return std::make_shared<Thunk>(std::move(cells));
}

std::size_t chain_length(const RewriteState& s) {
  std::size_t n = 0;
  for (const Thunk* t = s.root.get(); t; t = t->next.get()) ++n;
  return n;
}

// Live node count of a whole run, taken after everything it made is gone.
std::int64_t residue(const Program& p, const std::string& def = "main") {
  const std::int64_t before = live_nodes();
  {
    std::ostringstream sink;
    RunOptions options;
    options.out = &sink;
    Engine engine(p, options);
    Outcome out = engine.run_definition(def);
  }
  return live_nodes() - before;
}

}  // namespace

TEST_CASE("nodes are counted and released") {
  const auto base = live_nodes();
  {
    NodePtr a = make_int(1);
    NodePtr c = make_compound(make_text("t"), {a, make_int(2)});
    CHECK(live_nodes() == base + 4);
    NodePtr flat = make_compound(c, {make_int(3)});
    auto& fc = static_cast<const CompoundNode&>(*flat);
    CHECK(fc.args.size() == 3);
    CHECK(fc.head->kind() == NodeKind::Text);
    CHECK(make_compound(a, {}) == a);
  }
  CHECK(live_nodes() == base);
}

TEST_CASE("releasing a very deep structure does not recurse") {
  const auto base = live_nodes();
  {
    NodePtr list = make_text("end");
    for (int i = 0; i < 1'000'000; ++i) list = make_compound(make_int(i), {list});
    ThunkPtr chain;
    for (int i = 0; i < 200'000; ++i) {
      auto t = thunk({make_int(i)});
      t->next = chain;
      chain = t;
    }
  }
  CHECK(live_nodes() == base);
}

TEST_CASE("write_result fills a hole exactly once") {
  RewriteState s;
  auto t = thunk({make_int(1), nullptr});
  write_result(s, {t, 1}, make_int(5));
  CHECK(render(*t->cells[1]) == "5");
  CHECK_THROWS_AS(write_result(s, {t, 1}, make_int(6)), InternalFault);
  CHECK_THROWS_AS(write_result(s, {t, 0}, make_int(6)), InternalFault);
  write_result(s, {}, make_int(7));
  CHECK(render(*s.result) == "7");
  CHECK_THROWS_AS(write_result(s, {}, make_int(8)), InternalFault);
  CHECK_THROWS_AS(write_result(s, {t, 3}, make_int(8)), InternalFault);
}

TEST_CASE("wiring the running example") {
  Program p = compile_text("def main = mul (1 + 2) (inc 1)");
  RewriteState s = wire_root(p.lifted.find_def("main")->body, p);
  REQUIRE(chain_length(s) == 3);
  const Thunk& inc = *s.root;
  const Thunk& plus = *inc.next;
  const Thunk& mul = *plus.next;
  CHECK(render(*inc.cells[0]) == "inc");
  CHECK(render(*inc.cells[1]) == "1");
  CHECK(render(*plus.cells[0]) == "+");
  CHECK(render(*mul.cells[0]) == "mul");
  CHECK(inc.target.thunk.get() == &mul);
  CHECK(inc.target.slot == 2);
  CHECK(plus.target.thunk.get() == &mul);
  CHECK(plus.target.slot == 1);
  CHECK(mul.target.is_root());
  CHECK(mul.next == nullptr);
  CHECK_FALSE(mul.filled());
}

TEST_CASE("step delivers a builtin result into its target") {
  Program p = compile_text("def main = 0");
  Engine engine(p);
  RewriteState s;
  auto mul = thunk({p.at("System::mul").ref, make_int(3), nullptr});
  auto inc = thunk({p.at("System::inc").ref, make_int(1)});
  inc->next = mul;
  inc->target = {mul, 2};
  s.root = inc;
  inc.reset();
  engine.step(s);
  CHECK(s.root == mul);
  CHECK(render(*mul->cells[2]) == "2");
  engine.step(s);
  CHECK(s.done());
  CHECK(render(*s.result) == "6");
  CHECK(s.steps == 2);
}

TEST_CASE("step splices the chain of a matched clause") {
  Program p = compile_text(kFib);
  Engine engine(p);
  RewriteState s;
  s.root = thunk({p.at("fib").ref, make_int(5)});
  engine.step(s);
  CHECK(chain_length(s) == 5);
  const Thunk* last = s.root.get();
  while (last->next) last = last->next.get();
  CHECK(last->target.is_root());
  CHECK(render(*last->cells[0]) == "+");
  CHECK(check(s).ok());
}

TEST_CASE("step turns stuck applications into inert compounds") {
  Program p = compile_text("data f\ndef main = 0");
  Engine engine(p);
  for (auto cells : {std::vector<NodePtr>{make_int(1), make_int(2)},
                     std::vector<NodePtr>{p.at("f").ref, make_int(2)},
                     std::vector<NodePtr>{p.at("System::+").ref, make_int(2)}}) {
    RewriteState s;
    s.root = thunk(cells);
    engine.step(s);
    REQUIRE(s.done());
    CHECK(s.result->kind() == NodeKind::Compound);
  }
  RewriteState s;
  s.root = thunk({make_int(1), make_int(2)});
  engine.step(s);
  CHECK(render(*s.result) == "(1 2)");
}

TEST_CASE("match_clauses") {
  Program p = compile_text(std::string(kAppend) + "\ndef fib = [ 0 -> 1 | 1 -> 1 | N -> N ]\n"
                                                  "def k = [ X Y -> X ]");
  const Combinator& fib = p.at("fib");
  std::vector<NodePtr> zero{make_int(0)};
  std::vector<NodePtr> seven{make_int(7)};
  auto m0 = match_clauses(fib, zero);
  CHECK(m0.kind == MatchKind::Matched);
  CHECK(m0.clause == 0);
  auto m7 = match_clauses(fib, seven);
  CHECK(m7.kind == MatchKind::Matched);
  CHECK(m7.clause == 2);

  const Combinator& append = p.at("List::++");
  NodePtr one = make_compound(p.at("List::cons").ref, {make_int(1), p.at("List::nil").ref});
  std::vector<NodePtr> args{one, make_int(9)};
  auto ma = match_clauses(append, args);
  CHECK(ma.kind == MatchKind::Matched);
  CHECK(ma.clause == 1);
  std::vector<NodePtr> bad{make_int(1), make_int(2)};
  CHECK(match_clauses(append, bad).kind == MatchKind::NoClause);
  std::vector<NodePtr> few{make_int(1)};
  CHECK(match_clauses(p.at("k"), few).kind == MatchKind::TooFewArgs);
}

TEST_CASE("run examples") {
  CHECK(testutil::run(kFib).value == "8");
  CHECK(testutil::run("def main = mul (1 + 2) (inc 1)").value == "6");
  CHECK(testutil::run(kAppend).value == "(cons 1 (cons 2 nil))");
  CHECK(testutil::run("def main = 1 2").value == "(1 2)");
  CHECK(testutil::run("def main = \"a\" + 1").status == RunStatus::Uncaught);
  CHECK(testutil::run("def main = \"a\" + 1").value == "\"+ expects integers\"");
  CHECK(testutil::run("def main = div 7 0").value == "\"division by zero\"");
  CHECK(testutil::run("def main = 9223372036854775807 + 1").value == "-9223372036854775808");
  CHECK(testutil::run("def main = div (-7) 2").value == "-3");
}

TEST_CASE("partial and surplus application") {
  CHECK(testutil::run("def k = [ X -> [ Y -> X + Y ] ]\ndef main = k 1 2").value == "3");
  CHECK(testutil::run("def id = [ X -> X ]\ndef main = id id 5").value == "5");
  CHECK(testutil::run("def main = (+) 1 2 3").value == "(3 3)");
  CHECK(testutil::run("def main = (+) 1").value == "(+ 1)");
  CHECK(testutil::run("def add = (+) 1\ndef main = add 2").value == "3");
  CHECK(testutil::run("def k = [ X Y -> X ]\ndef main = k 1").value == "(k 1)");
  CHECK(testutil::run("def k = [ X Y -> X ]\ndef p = k 1\ndef main = p 2").value == "1");
  CHECK(testutil::run("def f = [ 0 -> 1 | X Y -> Y ]\ndef main = f 0 7").value == "(1 7)");
  CHECK(testutil::run("def f = [ 1 -> 1 | X Y -> Y ]\ndef main = f 0 7").value == "7");
  CHECK(testutil::run("def x = 1 + 2\ndef main = x * x").value == "9");
  CHECK(testutil::run("def main = 1 2 3").value == "(1 2 3)");
}

TEST_CASE("comparisons and equality") {
  CHECK(testutil::run("def main = 1 < 2").value == "true");
  CHECK(testutil::run("def main = 2 <= 1").value == "false");
  CHECK(testutil::run("def main = \"a\" < \"b\"").value == "true");
  CHECK(testutil::run("data c\ndef main = (c 1 (c 2)) == (c 1 (c 2))").value == "true");
  CHECK(testutil::run("data c\ndef main = (c 1) == (c 2)").value == "false");
  CHECK(testutil::run("def main = nop < 1").status == RunStatus::Uncaught);
}

TEST_CASE("arguments are evaluated right to left") {
  auto r = testutil::run("data f\ndef main = f (print 1) (print 2)");
  CHECK(r.output == "2\n1\n");
  CHECK(r.value == "(f nop nop)");
  auto s = testutil::run("def main = (print \"a\") + (print \"b\")");
  CHECK(s.output == "b\na\n");
}

TEST_CASE("raise examples") {
  CHECK(testutil::run("def main = try throw 42 catch [ E -> E ]").value == "42");
  CHECK(testutil::run("def main = try 1 + throw 7 catch [ E -> E + 1 ]").value == "8");
  auto u = testutil::run("def main = throw 9");
  CHECK(u.status == RunStatus::Uncaught);
  CHECK(u.value == "9");
  // Nested handlers: the inner one rethrows to the outer one.
  CHECK(testutil::run("def main = try (try throw 1 catch [ E -> throw (E + 1) ]) catch "
                      "[ E -> E * 10 ]").value == "20");
  // A handler applies to the body only, not to the code after the try.
  CHECK(testutil::run("def main = (try 1 catch [ E -> 0 ]) + throw 3").status ==
        RunStatus::Uncaught);
  CHECK(testutil::run("def f = [ X -> throw X ]\ndef main = 100 + (try f 5 catch [ E -> E ])")
            .value == "105");
}

TEST_CASE("an abandoned chain is reclaimed") {
  Program throwing = compile_text("def main = try 1 + (2 * throw 7) catch [ E -> E + 1 ]");
  Program plain = compile_text("def main = try 1 + 7 catch [ E -> E + 1 ]");
  CHECK(residue(throwing) == 0);
  CHECK(residue(plain) == 0);
}

TEST_CASE("par examples") {
  CHECK(testutil::run("def main = par [ _ -> 1 + 1 ] [ _ -> 2 + 2 ]").value == "(tuple 2 4)");
  auto e = testutil::run("def main = par [ _ -> throw 1 ] [ _ -> 2 ]");
  CHECK(e.status == RunStatus::Uncaught);
  CHECK(e.value == "1");
  CHECK(testutil::run("def main = par [ _ -> throw 1 ] [ _ -> throw 2 ]").value == "1");
  CHECK(testutil::run("def main = par [ _ -> 0 ] [ _ -> throw 2 ]").value == "2");
  CHECK(testutil::run("def main = try par [ _ -> throw 5 ] [ _ -> 1 ] catch [ E -> E + 100 ]")
            .value == "105");
  auto nested = testutil::run("def main = par [ _ -> par [ _ -> 1 ] [ _ -> 2 ] ] [ _ -> 3 ]", true);
  CHECK(nested.value == "(tuple (tuple 1 2) 3)");
}

TEST_CASE("par under checked mode and step limits") {
  std::string src = std::string(
                        "def fib = [ 0 -> 1 | 1 -> 1 | N -> fib (N - 2) + fib (N - 1) ]\n") +
                    "def main = par [ _ -> fib 12 ] [ _ -> par [ _ -> fib 11 ] [ _ -> 3 ] ]";
  auto r = testutil::run(src, true);
  CHECK(r.value == "(tuple 233 (tuple 144 3))");
  auto limited = testutil::run(src, false, 100);
  CHECK(limited.status == RunStatus::StepLimit);
  auto loop = testutil::run("def loop = loop\ndef main = loop", true, 500);
  CHECK(loop.status == RunStatus::StepLimit);
  CHECK(loop.steps == 500);
}

TEST_CASE("engine agrees with the reference evaluator") {
  std::mt19937_64 rng(909);
  gen::Options options;
  options.print = true;
  options.parallel = true;
  int compared = 0;
  for (int i = 0; i < 120; ++i) {
    std::string src = gen::program(rng, options);
    ref::Result expect = ref::evaluate(testutil::resolve_text(src));
    if (expect.status == ref::Status::Diverged) continue;
    auto got = testutil::run(src, i % 4 == 0);
    INFO(src);
    CHECK(got.value == expect.value);
    CHECK((got.status == RunStatus::Uncaught) == (expect.status == ref::Status::Uncaught));
    CHECK(got.output == expect.output);
    ++compared;
  }
  CHECK(compared >= 110);
}
