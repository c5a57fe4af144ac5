#include <doctest.h>

#include "cosmop/error.hpp"
#include "cosmop/planner.hpp"
#include "cosmop/solver.hpp"

using namespace cosmop;
using namespace cosmop::planner;
using primitives::PrimitiveKind;
using namespace std::chrono_literals;

namespace {

SceneDescription example() { return load_scene_file(COSMOP_DATA_DIR "/example1_scene.json"); }

solver::SessionFactory z3() {
  return solver::process_session_factory(solver::resolve_solver_command("z3 -in"));
}

PlanStep go(int64_t x, int64_t y, int64_t a) { return {{PrimitiveKind::GoTo, 0}, {x, y, a}}; }
PlanStep act(PrimitiveKind k, int j, Pose p) { return {{k, j}, p}; }

// Session that answers with a canned result without running anything.
class CannedSession : public solver::Session {
 public:
  explicit CannedSession(solver::SatResult r) : r_(std::move(r)) {}

 protected:
  solver::SatResult run(std::chrono::milliseconds) override { return r_; }

 private:
  solver::SatResult r_;
};

solver::SessionFactory canned(solver::Status st, smt::Model model = {}) {
  return [st, model] {
    return std::make_unique<CannedSession>(solver::SatResult{st, model, "canned"});
  };
}

int first_step(const ValidationReport& r) {
  auto f = r.first_failure();
  return f ? f->step : -2;
}

}  // namespace

TEST_CASE("a hand-written plan chains") {
  SceneDescription s = example();
  Plan p = plan_from_steps(s, {go(-2000, -500, 0), act(PrimitiveKind::Push, 1, {-1000, -500, 180}),
                               go(1650, -1000, 0), act(PrimitiveKind::PickUp, 1, {1650, -1000, 0})});
  auto r = validate_plan(p, s, logic::parse_formula("Last[obj[1].p]"));
  CHECK(r.ok());
  CHECK_FALSE(validate_plan(p, s, logic::parse_formula("Last[!obj[1].p]")).ok());
}

TEST_CASE("corrupted plans are rejected at the offending step") {
  SceneDescription s = example();
  logic::Formula none = logic::truth(true);

  SUBCASE("teleport through a wall") {
    Plan p = plan_from_steps(s, {go(-2000, -500, 0), act(PrimitiveKind::Push, 1, {-1000, -500, 180}),
                                 go(-2000, 1000, 0)});
    auto r = validate_plan(p, s, none);
    CHECK_FALSE(r.ok());
    CHECK(first_step(r) == 2);
    CHECK(r.first_failure()->name.find("obstacle") != std::string::npos);
  }
  SUBCASE("second pickup while carrying") {
    Plan p = plan_from_steps(s, {go(-2000, -500, 0), act(PrimitiveKind::Push, 1, {-1000, -500, 180}),
                                 go(1650, -1000, 0), act(PrimitiveKind::PickUp, 1, {1650, -1000, 0}),
                                 go(1750, -1000, 0), act(PrimitiveKind::PickUp, 2, {1750, -1000, 0})});
    auto r = validate_plan(p, s, none);
    CHECK_FALSE(r.ok());
    CHECK(first_step(r) == 5);
  }
  SUBCASE("push with the wrong heading") {
    Plan p = plan_from_steps(s, {go(-2000, -500, 90), act(PrimitiveKind::Push, 1, {-1000, -500, 180})});
    auto r = validate_plan(p, s, none);
    CHECK_FALSE(r.ok());
    CHECK(first_step(r) == 1);
    CHECK(r.first_failure()->name.find("Push") != std::string::npos);
  }
  SUBCASE("trace tampering") {
    Plan p = plan_from_steps(s, {go(-2000, -500, 0)});
    p.full_trace.int_vars["robot.x"][1] = -1999;
    auto r = validate_plan(p, s, none);
    CHECK_FALSE(r.ok());
    CHECK(first_step(r) == 0);
  }
}

TEST_CASE("synthesis finds the shortest horizon") {
  SceneDescription s = example();
  PlanRequest req{s, logic::parse_formula("Last[robot.x = -1000 & robot.y = -500]"), 1, 4, 30s};
  auto r = synthesize(req, z3());
  REQUIRE(r.outcome == Outcome::Found);
  CHECK(r.plan->K() == 2);
  CHECK(r.attempts.size() == 2);
  CHECK(r.attempts[0].status == solver::Status::Unsat);
  CHECK(r.plan->steps[1].primitive == primitives::PrimitiveId{PrimitiveKind::Push, 1});
  CHECK(validate_plan(*r.plan, s, req.goal).ok());
}

TEST_CASE("unreachable goal is infeasible") {
  PlanRequest req{example(), logic::parse_formula("Last[robot.x = 100000]"), 1, 3, 30s};
  auto r = synthesize(req, z3());
  CHECK(r.outcome == Outcome::Infeasible);
  CHECK(r.attempts.size() == 3);
}

TEST_CASE("solver outcomes map onto planner outcomes") {
  PlanRequest req{example(), logic::truth(true), 1, 3, 1s};
  CHECK(synthesize(req, canned(solver::Status::Timeout)).outcome == Outcome::Timeout);
  CHECK(synthesize(req, canned(solver::Status::Unknown)).outcome == Outcome::Unknown);
  CHECK(synthesize(req, canned(solver::Status::Unsat)).outcome == Outcome::Infeasible);
  // A model that does not satisfy the assertions is a bug, never a plan.
  CHECK_THROWS_AS(synthesize(req, canned(solver::Status::Sat)), InternalError);
  req.k_min = 0;
  CHECK_THROWS_AS(synthesize(req, canned(solver::Status::Unsat)), ValidationError);
}

TEST_CASE("plan JSON round-trip") {
  SceneDescription s = example();
  Plan p = plan_from_steps(s, {go(-2000, -500, 0), act(PrimitiveKind::Push, 1, {-1000, -500, 180})});
  Plan q = plan_from_json(plan_to_json(p), s);
  CHECK(q.steps == p.steps);
  CHECK(q.full_trace == p.full_trace);

  Plan bare = plan_from_json(R"([{"k": 1, "primitive": "GoTo", "arg": null,
                                   "waypoint": {"x": -2000, "y": -500, "alpha": 0}}])", s);
  CHECK(bare.full_trace == plan_from_steps(s, {go(-2000, -500, 0)}).full_trace);

  CHECK_THROWS_AS(plan_from_json(R"([{"k": 1, "primitive": "Fly", "waypoint": {"x": 0, "y": 0, "alpha": 0}}])", s),
                  ParseError);
  CHECK_THROWS_AS(plan_from_json("{", s), ParseError);
}

TEST_CASE("receding horizon restarts from the current state") {
  SceneDescription s = example();
  Plan p = plan_from_steps(s, {go(-2000, -500, 0), act(PrimitiveKind::Push, 1, {-1000, -500, 180}),
                               go(1650, -1000, 0)});
  WorldState now = state_at(p, s, 2);
  CHECK(now.robot == Pose{-1000, -500, 180});

  // A person now stands on the old route.
  SceneDescription updated = s;
  updated.obstacles.push_back({{0, -1300}, {200, -700}});
  logic::Formula goal = logic::parse_formula("Last[robot.x = 1650 & robot.y = -1000 & robot.alpha = 0]");
  PlanRequest req = plan_to_receding_horizon(p, now, updated, goal, 30s);
  CHECK(req.scene.robot_initial == now.robot);
  CHECK(req.k_max == 3);
  req.k_max = 4;
  auto r = synthesize(req, z3());
  REQUIRE(r.outcome == Outcome::Found);
  CHECK(validate_plan(*r.plan, req.scene, goal).ok());
  CHECK(r.plan->K() >= 2);

  now.objects.pop_back();
  CHECK_THROWS_AS(plan_to_receding_horizon(p, now, updated, goal, 30s), ValidationError);
}
