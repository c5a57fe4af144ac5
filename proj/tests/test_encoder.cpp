#include <doctest.h>

#include <random>

#include "cosmop/encoder.hpp"
#include "cosmop/error.hpp"
#include "oracles.hpp"

using namespace cosmop;
using namespace cosmop::logic;

namespace {

// Model assigning every state variable of `ctx` from the trace.
smt::Model model_of(const Trace& rho, const encode::EncodingContext& ctx) {
  smt::Model m;
  for (const auto& [name, sort] : ctx.symbols())
    for (int k = 0; k <= rho.K; ++k) {
      const std::string v = encode::EncodingContext::var_name(name, k);
      if (sort == SymbolSort::Int)
        m[v] = rho.int_vars.at(name)[size_t(k)];
      else
        m[v] = bool(rho.bool_vars.at(name)[size_t(k)]);
    }
  return m;
}

}  // namespace

TEST_CASE("array encoding declares one variable per symbol and instant") {
  encode::EncodingContext ctx(3);
  auto set = encode::encode(land({atom("p"), always(ge(var("x"), constant(0)))}), ctx);
  CHECK(set.declarations.size() == 8);
  CHECK(encode::EncodingContext::var_name("robot.x", 2) == "robot.x@2");
  // One assertion for the atom plus one per instant of the Always.
  CHECK(set.assertions.size() == 5);
  CHECK(smt::to_smtlib(ctx.state_var("x", SymbolSort::Int, 1)) == "|x@1|");
}

TEST_CASE("encoding outside the window is an error") {
  encode::EncodingContext ctx(2);
  CHECK_THROWS_AS(encode::encode_term(next(var("x")), 2, ctx), EncodeError);
  CHECK_THROWS_AS(encode::encode_at(atom("p", -1), 0, ctx), EncodeError);
  CHECK_THROWS_AS(encode::encode_at(land({atom("x"), eq(var("x"), constant(0))}), 0, ctx),
                  EncodeError);
  CHECK_THROWS_AS(encode::EncodingContext(-1), EncodeError);
}

TEST_CASE("guarded shifts drop out at the boundary") {
  encode::EncodingContext ctx(2);
  auto t = encode::encode_at(implies(next(truth(true)), eq(next(var("x")), var("x"))), 2, ctx);
  CHECK(t.is_true());
}

TEST_CASE("fresh witnesses are range constrained") {
  encode::EncodingContext ctx(4);
  auto set = encode::encode(eventually(atom("p")), ctx);
  bool has_aux = false;
  for (const auto& d : set.declarations) has_aux = has_aux || d.name.rfind("aux!", 0) == 0;
  CHECK(has_aux);
  CHECK(set.assertions.size() >= 2);
}

TEST_CASE("split and ite lowering of min/max agree on every assignment") {
  std::mt19937_64 rng(5);
  oracle::Alphabet a{{}, {"x", "y"}, -3, 3};
  oracle::FormulaGen gen(rng, a);
  for (int i = 0; i < 2000; ++i) {
    Formula f = rel(gen.term(3), RelOp(rng() % 6), gen.term(3));
    encode::EncodingContext split(0, true), ite(0, false);
    smt::Term ts = encode::encode_at(f, 0, split);
    smt::Term ti = encode::encode_at(f, 0, ite);
    Trace rho = oracle::random_trace(rng, a, 0);
    const bool expected = oracle::holds(f, rho, 0);
    INFO(to_string(f));
    CHECK(std::get<bool>(smt::evaluate(ts, model_of(rho, split))) == expected);
    CHECK(std::get<bool>(smt::evaluate(ti, model_of(rho, ite))) == expected);
  }
}

TEST_CASE("aux-free encodings evaluate like the oracle") {
  // Negative polarity everywhere (the formula sits under a negation), so the
  // encoding uses no witnesses and can be evaluated on the trace alone.
  std::mt19937_64 rng(9);
  oracle::Alphabet a{{"p", "q"}, {"x"}};
  oracle::FormulaGen gen(rng, a);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen.formula(3);
    const int K = int(rng() % 4);
    encode::EncodingContext ctx(K);
    smt::Term t = encode::encode_at(!f, 0, ctx);
    if (!ctx.take_side_assertions().empty()) continue;
    bool witnesses = false;
    for (const auto& d : ctx.declarations()) witnesses = witnesses || d.name.rfind("aux!", 0) == 0;
    if (witnesses) continue;
    Trace rho = oracle::random_trace(rng, a, K);
    smt::Model m = model_of(rho, ctx);
    INFO(to_string(f));
    CHECK(std::get<bool>(smt::evaluate(t, m)) == !oracle::holds(f, rho, 0));
    ++checked;
  }
  CHECK(checked > 300);
}

TEST_CASE("decode rebuilds the trace") {
  encode::EncodingContext ctx(1);
  encode::encode(land({atom("p"), eq(var("x"), constant(4))}), ctx);
  smt::Model m{{"p@0", true}, {"p@1", false}, {"x@0", int64_t(4)}, {"x@1", int64_t(-2)}};
  Trace rho = encode::decode_model(m, ctx);
  CHECK(rho.K == 1);
  CHECK(rho.int_vars.at("x") == std::vector<int64_t>{4, -2});
  CHECK(rho.bool_vars.at("p") == std::vector<bool>{true, false});
  m.erase("x@1");
  CHECK_THROWS(encode::decode_model(m, ctx));
}
