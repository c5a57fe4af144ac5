#include <doctest.h>

#include <cosmop/cosmop.h>

#include <cstring>
#include <string>

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  cosmop_string_free(s);
  return out;
}

const char* kSceneFile = COSMOP_DATA_DIR "/example1_scene.json";

}  // namespace

TEST_CASE("version and error reporting") {
  CHECK(std::strlen(cosmop_version()) > 0);
  cosmop_scene* s = nullptr;
  CHECK(cosmop_scene_load_file("/nonexistent.json", &s) == COSMOP_ERR_IO);
  CHECK(s == nullptr);
  CHECK(std::string(cosmop_last_error()).find("nonexistent") != std::string::npos);
  CHECK(cosmop_scene_load_string("{", &s) == COSMOP_ERR_PARSE);
  CHECK(cosmop_scene_load_string(nullptr, &s) == COSMOP_ERR_INVALID_ARGUMENT);
  cosmop_formula* f = nullptr;
  CHECK(cosmop_formula_parse("F(", &f) == COSMOP_ERR_PARSE);
  cosmop_config* c = nullptr;
  REQUIRE(cosmop_config_new(&c) == COSMOP_OK);
  CHECK(cosmop_config_set(c, "dwa.eps", "5") == COSMOP_ERR_VALIDATION);
  CHECK(cosmop_config_set(c, "dwa.eps", "0.05") == COSMOP_OK);
  cosmop_config_free(c);
}

TEST_CASE("plan, inspect, validate and simulate through the C API") {
  cosmop_scene* scene = nullptr;
  REQUIRE(cosmop_scene_load_file(kSceneFile, &scene) == COSMOP_OK);
  cosmop_formula* goal = nullptr;
  REQUIRE(cosmop_formula_parse("Last[robot.x = -1000 & robot.y = -500]", &goal) == COSMOP_OK);
  CHECK(take([&] {
          char* s = nullptr;
          cosmop_formula_to_string(goal, &s);
          return s;
        }()).find("Last") != std::string::npos);

  cosmop_plan_outcome outcome;
  cosmop_plan* plan = nullptr;
  REQUIRE(cosmop_synthesize(scene, goal, 1, 3, 30000, nullptr, &outcome, &plan) == COSMOP_OK);
  REQUIRE(outcome == COSMOP_PLAN_FOUND);
  REQUIRE(cosmop_plan_length(plan) == 2);
  cosmop_step st;
  REQUIRE(cosmop_plan_step(plan, 2, &st) == COSMOP_OK);
  CHECK(st.primitive == COSMOP_PRIM_PUSH);
  CHECK(st.arg == 1);
  CHECK(st.x == -1000);
  CHECK(cosmop_plan_step(plan, 3, &st) == COSMOP_ERR_INVALID_ARGUMENT);

  int ok = 0, step = -1;
  char* report = nullptr;
  REQUIRE(cosmop_plan_validate(plan, scene, goal, &ok, &step, &report) == COSMOP_OK);
  CHECK(ok == 1);
  CHECK(step == 0);
  CHECK(take(report).empty());

  cosmop_sim_report sim;
  char* csv = nullptr;
  REQUIRE(cosmop_simulate(plan, scene, nullptr, 0, nullptr, &sim, &csv, nullptr) == COSMOP_OK);
  CHECK(sim.outcome == COSMOP_SIM_ALL_REACHED);
  CHECK(sim.failed_step == 0);
  CHECK(sim.stop_x == -1000);
  CHECK(take(csv).rfind("t,x,y", 0) == 0);

  CHECK(cosmop_simulate(plan, scene, "[{\"x\": 0}]", 0, nullptr, &sim, nullptr, nullptr) ==
        COSMOP_ERR_PARSE);

  char* json = nullptr;
  REQUIRE(cosmop_plan_to_json(plan, &json) == COSMOP_OK);
  CHECK(take(json).find("\"Push\"") != std::string::npos);

  cosmop_plan_free(plan);
  cosmop_formula_free(goal);
  cosmop_scene_free(scene);
}

TEST_CASE("infeasible goals yield no plan") {
  cosmop_scene* scene = nullptr;
  REQUIRE(cosmop_scene_load_file(kSceneFile, &scene) == COSMOP_OK);
  cosmop_formula* goal = nullptr;
  REQUIRE(cosmop_formula_parse("Last[robot.x = 1000000]", &goal) == COSMOP_OK);
  cosmop_plan_outcome outcome;
  cosmop_plan* plan = reinterpret_cast<cosmop_plan*>(1);
  REQUIRE(cosmop_synthesize(scene, goal, 1, 2, 30000, nullptr, &outcome, &plan) == COSMOP_OK);
  CHECK(outcome == COSMOP_PLAN_INFEASIBLE);
  CHECK(plan == nullptr);
  CHECK(cosmop_synthesize(scene, goal, 3, 2, 30000, nullptr, &outcome, &plan) ==
        COSMOP_ERR_INVALID_ARGUMENT);
  cosmop_formula_free(goal);
  cosmop_scene_free(scene);
}
