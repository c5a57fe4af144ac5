#include <doctest.h>

#include "cosmop/encoder.hpp"
#include "cosmop/error.hpp"
#include "cosmop/solver.hpp"

using namespace cosmop;
using namespace std::chrono_literals;

namespace {

std::string z3() { return solver::resolve_solver_command("z3 -in"); }

}  // namespace

TEST_CASE("model parsing") {
  auto m = solver::parse_model(R"((model
    (define-fun |x@0| () Int (- 7))
    (define-fun |p@1| () Bool true)
    (define-fun y () Int 12)
  ))");
  CHECK(std::get<int64_t>(m.at("x@0")) == -7);
  CHECK(std::get<bool>(m.at("p@1")));
  CHECK(std::get<int64_t>(m.at("y")) == 12);
  CHECK(solver::parse_model("((define-fun a () Int 1))").size() == 1);
  CHECK_THROWS_AS(solver::parse_model("((define-fun a () Int 1)"), SolverError);
  CHECK_THROWS_AS(solver::parse_model("((define-fun a () Real 1.5))"), SolverError);
}

TEST_CASE("session lifecycle is enforced") {
  solver::Smtlib2ProcessSession s(z3());
  smt::Term x = s.declare("x", smt::Sort::Int);
  CHECK_THROWS_AS(s.declare("x", smt::Sort::Int), SolverError);
  CHECK_THROWS_AS(s.assert_term(x), SolverError);
  CHECK_THROWS_AS(s.assert_term(smt::eq(smt::var("y", smt::Sort::Int), x)), SolverError);
  s.assert_term(smt::gt(x, smt::int_const(3)));
  auto r = s.check(10s);
  REQUIRE(r.status == solver::Status::Sat);
  CHECK(std::get<int64_t>(r.model.at("x")) > 3);
  CHECK(s.state() == solver::SessionState::CheckedSat);
  CHECK_THROWS_AS(s.check(10s), SolverError);
  CHECK_THROWS_AS(s.declare("z", smt::Sort::Bool), SolverError);
  CHECK(solver::model_satisfies(s, r.model));
}

TEST_CASE("unsat and script rendering") {
  solver::Smtlib2ProcessSession s(z3(), {{"smt.random_seed", "3"}});
  smt::Term x = s.declare("robot.x@0", smt::Sort::Int);
  s.assert_term(smt::land({smt::gt(x, smt::int_const(0)), smt::lt(x, smt::int_const(1))}));
  const std::string script = s.script();
  CHECK(script.find("(set-option :smt.random_seed 3)") == 0);
  CHECK(script.find("(declare-const |robot.x@0| Int)") != std::string::npos);
  CHECK(s.check(10s).status == solver::Status::Unsat);
}

TEST_CASE("a silent solver times out and a missing one is unknown") {
  solver::Smtlib2ProcessSession slow("sleep 30");
  slow.declare("x", smt::Sort::Int);
  const auto t0 = std::chrono::steady_clock::now();
  CHECK(slow.check(300ms).status == solver::Status::Timeout);
  CHECK(std::chrono::steady_clock::now() - t0 < 5s);

  solver::Smtlib2ProcessSession missing("/nonexistent/solver -in");
  CHECK(missing.check(1s).status == solver::Status::Unknown);
}

TEST_CASE("encoded formula round-trips through the solver") {
  using namespace logic;
  encode::EncodingContext ctx(3);
  Formula f = land({eq(var("x"), constant(0)),
                    always(implies(next(truth(true)), eq(next(var("x")), var("x") + 2))),
                    eventually(atom("p") && ge(var("x"), constant(4)))});
  auto set = encode::encode(f, ctx);
  auto session = solver::process_session_factory(z3())();
  session->load(set);
  auto r = session->check(10s);
  REQUIRE(r.status == solver::Status::Sat);
  Trace rho = encode::decode_model(r.model, ctx);
  CHECK(rho.int_vars.at("x") == std::vector<int64_t>{0, 2, 4, 6});
  CHECK(eval(f, rho, 0));
}
