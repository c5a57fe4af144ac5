#include <doctest.h>

#include <random>

#include "cosmop/error.hpp"
#include "cosmop/planner.hpp"
#include "cosmop/primitives.hpp"
#include "oracles.hpp"

using namespace cosmop;
using namespace cosmop::primitives;

namespace {

SceneDescription example() { return load_scene_file(COSMOP_DATA_DIR "/example1_scene.json"); }

logic::Trace segment(double x0, double y0, double x1, double y1) {
  logic::Trace rho;
  rho.K = 1;
  rho.int_vars[sym::kRobotX] = {int64_t(x0), int64_t(x1)};
  rho.int_vars[sym::kRobotY] = {int64_t(y0), int64_t(y1)};
  return rho;
}

}  // namespace

TEST_CASE("primitive codes are a bijection") {
  SceneDescription s = example();
  const int n = primitive_count(s);
  CHECK(n == 1 + 3 + 2 + 2);
  for (int c = 0; c < n; ++c) CHECK(PrimitiveId::from_code(c, s).code(s) == c);
  CHECK(PrimitiveId::from_code(0, s) == PrimitiveId{PrimitiveKind::GoTo, 0});
  CHECK(PrimitiveId::from_code(3, s) == PrimitiveId{PrimitiveKind::Push, 3});
  CHECK(PrimitiveId::from_code(4, s) == PrimitiveId{PrimitiveKind::PickUp, 1});
  CHECK(PrimitiveId::from_code(7, s) == PrimitiveId{PrimitiveKind::Leave, 2});
  CHECK_THROWS_AS(PrimitiveId::from_code(n, s), ValidationError);
  CHECK_THROWS_AS(PrimitiveId::from_code(-1, s), ValidationError);
  CHECK_THROWS_AS((PrimitiveId{PrimitiveKind::Push, 4}.code(s)), ValidationError);
}

TEST_CASE("primitive names") {
  for (auto k : {PrimitiveKind::GoTo, PrimitiveKind::Push, PrimitiveKind::PickUp, PrimitiveKind::Leave})
    CHECK(kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(kind_from_string("Teleport"), ParseError);
}

TEST_CASE("every_step skips the final instant") {
  logic::Trace rho = segment(0, 0, 5, 5);
  logic::Formula grows = logic::lt(logic::var(sym::kRobotX), logic::next(logic::var(sym::kRobotX)));
  CHECK(logic::eval(every_step(grows), rho, 0));
  rho.int_vars[sym::kRobotX] = {5, 0};
  CHECK_FALSE(logic::eval(every_step(grows), rho, 0));
}

TEST_CASE("corridor constraint matches the box oracle") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-30, 30), half(-60, 60), m(0, 9);
  for (int i = 0; i < 2000; ++i) {
    const double x0 = c(rng), y0 = c(rng), x1 = c(rng), y1 = c(rng);
    double a = half(rng) / 2.0, b = half(rng) / 2.0, d = half(rng) / 2.0, e = half(rng) / 2.0;
    Rect box = Rect::from_corners(a, d, b, e);
    const int twice_margin = m(rng);
    const bool want = oracle::corridor_clear(x0, y0, x1, y1, twice_margin / 2.0,
                                             {box.xmin, box.xmax, box.ymin, box.ymax});
    CHECK(logic::eval(goto_clearance(box, twice_margin), segment(x0, y0, x1, y1), 0) == want);
  }
}

TEST_CASE("the initial state pins every variable") {
  SceneDescription s = example();
  planner::Plan p = planner::plan_from_steps(s, {});
  CHECK(logic::eval(build_initial(s), p.full_trace, 0));
  p.full_trace.int_vars[sym::obj_x(2)][0] += 1;
  CHECK_FALSE(logic::eval(build_initial(s), p.full_trace, 0));
}

TEST_CASE("push moves between the door poses only") {
  SceneDescription s = example();
  using planner::PlanStep;
  PlanStep go{{PrimitiveKind::GoTo, 0}, {-2000, -500, 0}};
  PlanStep push{{PrimitiveKind::Push, 1}, {-1000, -500, 180}};
  auto good = planner::plan_from_steps(s, {go, push});
  CHECK(logic::eval(build_primitive_spec(s), good.full_trace, 0));
  push.waypoint.y = -400;
  auto bad = planner::plan_from_steps(s, {go, push});
  CHECK_FALSE(logic::eval(build_push(s), bad.full_trace, 0));
}

TEST_CASE("pickup and leave place the object in front of the robot") {
  SceneDescription s = example();
  using planner::PlanStep;
  std::vector<PlanStep> steps{{{PrimitiveKind::GoTo, 0}, {-2000, -500, 0}},
                              {{PrimitiveKind::Push, 1}, {-1000, -500, 180}},
                              {{PrimitiveKind::GoTo, 0}, {1650, -1000, 0}},
                              {{PrimitiveKind::PickUp, 1}, {1650, -1000, 0}},
                              {{PrimitiveKind::GoTo, 0}, {1000, -2000, 0}},
                              {{PrimitiveKind::Leave, 1}, {1000, -2000, 0}}};
  auto p = planner::plan_from_steps(s, steps);
  CHECK(logic::eval(build_primitive_spec(s), p.full_trace, 0));
  CHECK(p.full_trace.int_vars.at(sym::obj_x(1)).back() == 1250);
  CHECK(p.full_trace.int_vars.at(sym::obj_y(1)).back() == -2000);
  CHECK(logic::eval(build_carry(s), p.full_trace, 0));
}
