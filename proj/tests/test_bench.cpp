#include <doctest.h>

#include <cstdlib>

#include "cosmop/bench.hpp"
#include "cosmop/config.hpp"
#include "cosmop/error.hpp"
#include "cosmop/planner.hpp"
#include "cosmop/simulate.hpp"

using namespace cosmop;
using namespace std::chrono_literals;

TEST_CASE("room grid geometry") {
  auto r = bench::make_rooms_scene(4, 9);
  CHECK(r.n == 3);
  CHECK(r.scene.obstacles.size() == 12);
  CHECK(r.scene.doors.size() == 12);
  CHECK(r.min_K == 8);
  CHECK(r.scene.workspace.l == 4000);
  auto two = bench::make_rooms_scene(4, 4);
  CHECK(two.scene.obstacles.size() == 4);
  auto sealed = bench::make_rooms_scene(32, 9, {400, 200, true});
  CHECK(sealed.scene.doors.size() == 10);
  CHECK_THROWS_AS(bench::make_rooms_scene(4, 8), ValidationError);
  CHECK_THROWS_AS(bench::make_rooms_scene(4, 1), ValidationError);
}

TEST_CASE("suites have the expected rows") {
  CHECK(bench::suite("size", 1).size() == 7);
  CHECK(bench::suite("rooms", 1).size() == 4);
  CHECK(bench::suite("k", 1).size() == 5);
  auto c = bench::suite("complexity", 2);
  REQUIRE(c.size() == 7);
  CHECK(c.back().rooms == 81);
  CHECK(c.back().K == 50);
  CHECK(c.front().repetitions == 2);
  CHECK_THROWS_AS(bench::suite("tables", 1), ValidationError);
  CHECK_THROWS_AS(bench::suite("size", 0), ValidationError);
}

TEST_CASE("small grid is sat at its minimal horizon and not before") {
  auto r = bench::make_rooms_scene(4, 4);
  auto z3 = solver::process_session_factory(solver::resolve_solver_command("z3 -in"));
  planner::PlanRequest req{r.scene, r.goal, 1, r.min_K, 60s};
  auto res = planner::synthesize(req, z3);
  REQUIRE(res.outcome == planner::Outcome::Found);
  CHECK(res.plan->K() == r.min_K);
}

TEST_CASE("bench rows and csv") {
  auto rows = bench::run_suite({{4, 4, 4, 2}}, bench::seeded_process_factory(
                                                   solver::resolve_solver_command("z3 -in"),
                                                   "smt.random_seed"),
                               60s, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].sat);
  CHECK(rows[0].mean_ms > 0);
  const std::string csv = bench::rows_csv(rows);
  CHECK(csv.rfind("env_m,rooms,K,mean_ms,std_ms,sat\n4,4,4,", 0) == 0);
  CHECK(csv.find(",true\n") != std::string::npos);
}

TEST_CASE("configuration") {
  Config c = parse_config(R"(
# comment
[solver]
cmd = "z3 -in -T:5"
timeout_ms = 5000
[dwa]
v_max = 800   # trailing comment
n_v = 7
[bench]
reps = 3
)");
  CHECK(c.solver_cmd == "z3 -in -T:5");
  CHECK(c.solver_timeout == 5000ms);
  CHECK(c.dwa.v_max == 800);
  CHECK(c.dwa.n_v == 7);
  CHECK(c.bench_reps == 3);
  CHECK_THROWS_AS(parse_config("colour = 3"), ValidationError);
  CHECK_THROWS_AS(parse_config("[dwa]\nv_max = fast"), ParseError);
  CHECK_THROWS_AS(parse_config("[dwa]\neps = 2"), ValidationError);
  CHECK_THROWS_AS(load_config_file("/nonexistent.toml"), IoError);
  Config sample = load_config_file(COSMOP_DATA_DIR "/cosmop.toml");
  CHECK(sample.bench_reps == 35);
}

TEST_CASE("simulating a hand plan") {
  SceneDescription s = load_scene_file(COSMOP_DATA_DIR "/example1_scene.json");
  using primitives::PrimitiveKind;
  planner::Plan p = planner::plan_from_steps(
      s, {{{PrimitiveKind::GoTo, 0}, {-2000, -500, 0}}, {{PrimitiveKind::Push, 1}, {-1000, -500, 180}},
          {{PrimitiveKind::GoTo, 0}, {1650, -1000, 0}}, {{PrimitiveKind::PickUp, 1}, {1650, -1000, 0}}});
  auto r = sim::simulate_plan(p, s, {}, dwa::DwaParams{}, 0, 60);
  CHECK(r.outcome == sim::SimOutcome::AllReached);
  CHECK(r.failed_step == -1);
  CHECK(r.stop_state.robot == Pose{1650, -1000, 0});
  CHECK(r.stop_state.objects[0].carried);
  CHECK(sim::render_svg(s, r).find("<svg") != std::string::npos);

  // Someone stands on the second waypoint.
  std::vector<dwa::ObstacleState> blocker{{1650, -1000, 0, 0, 150, dwa::ObstaclePolicy::Static}};
  auto blocked = sim::simulate_plan(p, s, blocker, dwa::DwaParams{}, 0, 20);
  CHECK(blocked.outcome == sim::SimOutcome::StoppedSafe);
  CHECK(blocked.failed_step == 2);
}
