#include <doctest.h>

#include <random>

#include "cosmop/error.hpp"
#include "cosmop/logic.hpp"
#include "oracles.hpp"

using namespace cosmop;
using namespace cosmop::logic;

namespace {

Trace counter_trace() {
  Trace rho;
  rho.K = 3;
  rho.int_vars["x"] = {0, 1, 2, 3};
  rho.bool_vars["p"] = {false, false, true, false};
  return rho;
}

}  // namespace

TEST_CASE("next is strong and prev is false at the origin") {
  Trace rho = counter_trace();
  CHECK(eval(next(truth(true)), rho, 2));
  CHECK_FALSE(eval(next(truth(true)), rho, 3));
  CHECK_FALSE(eval(prev(truth(true)), rho, 0));
  CHECK(eval(prev(atom("p")), rho, 3));
}

TEST_CASE("until searches forward, since searches backward") {
  Trace rho = counter_trace();
  Formula small = lt(var("x"), constant(2));
  CHECK(eval(until(small, atom("p")), rho, 0));
  CHECK_FALSE(eval(until(lt(var("x"), constant(1)), atom("p")), rho, 0));
  CHECK(eval(since(truth(true), atom("p")), rho, 3));
  CHECK_FALSE(eval(since(truth(true), atom("p")), rho, 1));
  CHECK_FALSE(eval(until(truth(true), truth(false)), rho, 0));
}

TEST_CASE("last reads the final instant from anywhere") {
  Trace rho = counter_trace();
  for (int k = 0; k <= 3; ++k) CHECK(eval(last(eq(var("x"), constant(3))), rho, k));
}

TEST_CASE("shifted terms and the difference form") {
  Trace rho = counter_trace();
  CHECK(eval(always(implies(next(truth(true)), eq(next(var("x")) - var("x"), constant(1)))), rho, 0));
  CHECK(eval_term(max(var("x"), constant(2)), rho, 0) == 2);
  CHECK(eval_term(min(prev(var("x")), constant(5)), rho, 2) == 1);
  CHECK(eval_term(3 * var("x") + 4, rho, 1) == 7);
}

TEST_CASE("evaluation errors are never false") {
  Trace rho = counter_trace();
  CHECK_THROWS_AS(eval(atom("missing"), rho, 0), EvalError);
  CHECK_THROWS_AS(eval(eq(var("y"), constant(0)), rho, 0), EvalError);
  CHECK_THROWS_AS(eval(eq(next(var("x")), constant(0)), rho, 3), EvalError);
  CHECK_THROWS_AS(eval(atom("p"), rho, 4), EvalError);
  rho.int_vars["x"].pop_back();
  CHECK_THROWS_AS(eval(eq(var("x"), constant(0)), rho, 0), EvalError);
}

TEST_CASE("atom offsets") {
  Trace rho = counter_trace();
  CHECK(eval(atom("p", 1), rho, 1));
  CHECK(eval(atom("p", -1), rho, 3));
  CHECK_THROWS_AS(eval(atom("p", 1), rho, 3), EvalError);
}

TEST_CASE("parser builds the expected trees") {
  CHECK(parse_formula("F(x >= 2) & !p") == land({eventually(ge(var("x"), constant(2))), !atom("p")}));
  CHECK(parse_formula("a U b U c") == until(atom("a"), until(atom("b"), atom("c"))));
  CHECK(parse_formula("X(x) - x = 1") == eq(next(var("x")) - var("x"), constant(1)));
  CHECK(parse_formula("X p") == next(atom("p")));
  CHECK(parse_formula("Last[obj[1].x = 5]") == last(eq(var("obj[1].x"), constant(5))));
  CHECK(parse_formula("p@-1 -> q") == implies(atom("p", -1), atom("q")));
  CHECK(parse_term("min(x, 2*Y(y))") == min(var("x"), scale(2, prev(var("y")))));
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_formula("p &\n  & q");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(parse_formula("F p"), ParseError);
  CHECK_THROWS_AS(parse_formula("x <"), ParseError);
  CHECK_THROWS_AS(parse_formula("(p"), ParseError);
}

TEST_CASE("printing round-trips through the parser") {
  std::mt19937_64 rng(7);
  oracle::FormulaGen gen(rng, {{"p", "q"}, {"x", "y"}});
  for (int i = 0; i < 500; ++i) {
    Formula f = gen.formula(4);
    INFO(to_string(f));
    CHECK(parse_formula(to_string(f)) == f);
  }
}

TEST_CASE("collect_symbols reports offsets") {
  auto syms = collect_symbols(land({eq(next(var("x")), prev(var("x"))), atom("p", 2)}));
  REQUIRE(syms.size() == 2);
  CHECK(syms[0] == SymbolUse{"p", SymbolSort::Bool, 2, 2});
  CHECK(syms[1] == SymbolUse{"x", SymbolSort::Int, -1, 1});
  CHECK(term_offsets(next(next(var("x"))) - prev(var("x"))) == std::pair{-1, 2});
}

TEST_CASE("library evaluator agrees with the bottom-up oracle") {
  std::mt19937_64 rng(11);
  oracle::Alphabet a{{"p", "q"}, {"x"}};
  oracle::FormulaGen gen(rng, a);
  for (int i = 0; i < 2000; ++i) {
    Formula f = gen.formula(4);
    const int K = int(rng() % 6);
    Trace rho = oracle::random_trace(rng, a, K);
    const int k = int(rng() % uint64_t(K + 1));
    INFO(to_string(f));
    CHECK(eval(f, rho, k) == oracle::holds(f, rho, k));
    CHECK(eval(normalize(f), rho, k) == eval(f, rho, k));
  }
}

TEST_CASE("normalize leaves only core operators") {
  std::function<void(const Formula&)> core = [&](const Formula& f) {
    const FormulaKind k = f.kind();
    CHECK((k != FormulaKind::Or && k != FormulaKind::Implies && k != FormulaKind::Eventually &&
           k != FormulaKind::Always && k != FormulaKind::Last));
    for (const Formula& g : f.args()) core(g);
  };
  core(normalize(parse_formula("G(p -> F(q)) | Last[p] | (q S p)")));
}
