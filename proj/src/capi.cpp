#include "cosmop/cosmop.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "cosmop/bench.hpp"
#include "cosmop/config.hpp"
#include "cosmop/dwa.hpp"
#include "cosmop/error.hpp"
#include "cosmop/logic.hpp"
#include "cosmop/planner.hpp"
#include "cosmop/scene.hpp"
#include "cosmop/simulate.hpp"
#include "io_util.hpp"

struct cosmop_config {
  cosmop::Config value;
};
struct cosmop_scene {
  cosmop::SceneDescription value;
};
struct cosmop_formula {
  cosmop::logic::Formula value;
};
struct cosmop_plan {
  cosmop::planner::Plan value;
};

namespace {

thread_local std::string g_last_error;

cosmop_status fail(cosmop_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
cosmop_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return COSMOP_OK;
  } catch (const cosmop::IoError& e) {
    return fail(COSMOP_ERR_IO, e.what());
  } catch (const cosmop::ParseError& e) {
    return fail(COSMOP_ERR_PARSE, e.what());
  } catch (const cosmop::ValidationError& e) {
    return fail(COSMOP_ERR_VALIDATION, e.what());
  } catch (const cosmop::EvalError& e) {
    return fail(COSMOP_ERR_EVAL, e.what());
  } catch (const cosmop::EncodeError& e) {
    return fail(COSMOP_ERR_ENCODE, e.what());
  } catch (const cosmop::SolverError& e) {
    return fail(COSMOP_ERR_SOLVER, e.what());
  } catch (const cosmop::InternalError& e) {
    return fail(COSMOP_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(COSMOP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(COSMOP_ERR_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const cosmop::Config& config_or_default(const cosmop_config* cfg) {
  static const cosmop::Config defaults;
  return cfg ? cfg->value : defaults;
}

#define REQUIRE(cond, what) \
  if (!(cond)) return fail(COSMOP_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* cosmop_version(void) { return COSMOP_VERSION; }

const char* cosmop_last_error(void) { return g_last_error.c_str(); }

void cosmop_string_free(char* s) { std::free(s); }

cosmop_status cosmop_config_new(cosmop_config** out) {
  REQUIRE(out, "null output pointer");
  return guarded([&] { *out = new cosmop_config{}; });
}

cosmop_status cosmop_config_load_file(const char* path, cosmop_config** out) {
  REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new cosmop_config{cosmop::load_config_file(path)}; });
}

cosmop_status cosmop_config_set(cosmop_config* cfg, const char* key, const char* value) {
  REQUIRE(cfg && key && value, "null argument");
  return guarded([&] { cfg->value.set(key, value); });
}

void cosmop_config_free(cosmop_config* cfg) { delete cfg; }

cosmop_status cosmop_scene_load_file(const char* path, cosmop_scene** out) {
  REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new cosmop_scene{cosmop::load_scene_file(path)}; });
}

cosmop_status cosmop_scene_load_string(const char* json, cosmop_scene** out) {
  REQUIRE(json && out, "null argument");
  return guarded([&] { *out = new cosmop_scene{cosmop::load_scene(json)}; });
}

cosmop_status cosmop_scene_to_json(const cosmop_scene* scene, char** out) {
  REQUIRE(scene && out, "null argument");
  return guarded([&] { *out = dup(cosmop::serialize_scene(scene->value)); });
}

void cosmop_scene_free(cosmop_scene* scene) { delete scene; }

cosmop_status cosmop_formula_parse(const char* text, cosmop_formula** out) {
  REQUIRE(text && out, "null argument");
  return guarded([&] { *out = new cosmop_formula{cosmop::logic::parse_formula(text)}; });
}

cosmop_status cosmop_formula_load_file(const char* path, cosmop_formula** out) {
  REQUIRE(path && out, "null argument");
  return guarded([&] {
    *out = new cosmop_formula{cosmop::logic::parse_formula(cosmop::detail::read_file(path))};
  });
}

cosmop_status cosmop_formula_to_string(const cosmop_formula* f, char** out) {
  REQUIRE(f && out, "null argument");
  return guarded([&] { *out = dup(cosmop::logic::to_string(f->value)); });
}

void cosmop_formula_free(cosmop_formula* f) { delete f; }

cosmop_status cosmop_synthesize(const cosmop_scene* scene, const cosmop_formula* goal, int k_min,
                                int k_max, int64_t timeout_ms, const cosmop_config* cfg,
                                cosmop_plan_outcome* outcome, cosmop_plan** plan) {
  REQUIRE(scene && goal && outcome && plan, "null argument");
  REQUIRE(k_min >= 1 && k_min <= k_max, "need 1 <= k_min <= k_max");
  *plan = nullptr;
  return guarded([&] {
    const cosmop::Config& c = config_or_default(cfg);
    cosmop::planner::PlanRequest req;
    req.scene = scene->value;
    req.goal = goal->value;
    req.k_min = k_min;
    req.k_max = k_max;
    req.timeout = timeout_ms > 0 ? std::chrono::milliseconds(timeout_ms) : c.solver_timeout;
    const auto result =
        cosmop::planner::synthesize(req, cosmop::solver::process_session_factory(c.effective_solver_cmd()));
    switch (result.outcome) {
      case cosmop::planner::Outcome::Found:
        *outcome = COSMOP_PLAN_FOUND;
        *plan = new cosmop_plan{*result.plan};
        break;
      case cosmop::planner::Outcome::Infeasible: *outcome = COSMOP_PLAN_INFEASIBLE; break;
      case cosmop::planner::Outcome::Timeout: *outcome = COSMOP_PLAN_TIMEOUT; break;
      case cosmop::planner::Outcome::Unknown: *outcome = COSMOP_PLAN_UNKNOWN; break;
    }
    g_last_error = result.diagnostic;
  });
}

int cosmop_plan_length(const cosmop_plan* plan) { return plan ? plan->value.K() : 0; }

cosmop_status cosmop_plan_step(const cosmop_plan* plan, int k, cosmop_step* out) {
  REQUIRE(plan && out, "null argument");
  REQUIRE(k >= 1 && k <= plan->value.K(), "step index out of range");
  const cosmop::planner::PlanStep& st = plan->value.steps[size_t(k - 1)];
  out->primitive = static_cast<cosmop_primitive>(st.primitive.kind);
  out->arg = st.primitive.index;
  out->x = st.waypoint.x;
  out->y = st.waypoint.y;
  out->alpha = st.waypoint.alpha;
  return COSMOP_OK;
}

cosmop_status cosmop_plan_to_json(const cosmop_plan* plan, char** out) {
  REQUIRE(plan && out, "null argument");
  return guarded([&] { *out = dup(cosmop::planner::plan_to_json(plan->value)); });
}

cosmop_status cosmop_plan_load_file(const char* path, const cosmop_scene* scene, cosmop_plan** out) {
  REQUIRE(path && scene && out, "null argument");
  return guarded([&] {
    *out = new cosmop_plan{
        cosmop::planner::plan_from_json(cosmop::detail::read_file(path), scene->value)};
  });
}

void cosmop_plan_free(cosmop_plan* plan) { delete plan; }

cosmop_status cosmop_plan_validate(const cosmop_plan* plan, const cosmop_scene* scene,
                                   const cosmop_formula* goal, int* ok, int* failed_step,
                                   char** report) {
  REQUIRE(plan && scene && ok, "null argument");
  return guarded([&] {
    const auto r = cosmop::planner::validate_plan(
        plan->value, scene->value, goal ? goal->value : cosmop::logic::truth(true));
    *ok = r.ok() ? 1 : 0;
    const auto first = r.first_failure();
    if (failed_step) *failed_step = first && first->step >= 0 ? first->step + 1 : 0;
    if (report) {
      std::string text;
      for (const auto& c : r.checks)
        if (!c.passed) text += c.name + ": " + c.detail + "\n";
      *report = dup(text);
    }
  });
}

cosmop_status cosmop_simulate(const cosmop_plan* plan, const cosmop_scene* scene,
                              const char* obstacles_json, uint64_t seed, const cosmop_config* cfg,
                              cosmop_sim_report* report, char** csv, char** svg) {
  REQUIRE(plan && scene && report, "null argument");
  return guarded([&] {
    const cosmop::Config& c = config_or_default(cfg);
    std::vector<cosmop::dwa::ObstacleState> obstacles;
    if (obstacles_json) obstacles = cosmop::dwa::load_scenario(obstacles_json);
    const auto r = cosmop::sim::simulate_plan(plan->value, scene->value, std::move(obstacles),
                                              c.dwa, seed, c.leg_max_t);
    report->outcome = static_cast<cosmop_sim_outcome>(r.outcome);
    report->failed_step = r.failed_step + 1;
    report->stop_x = r.stop_state.robot.x;
    report->stop_y = r.stop_state.robot.y;
    report->stop_alpha = r.stop_state.robot.alpha;
    report->cycles = int(r.rows.size());
    if (csv) *csv = dup(cosmop::dwa::trace_csv(r.rows));
    if (svg) *svg = dup(cosmop::sim::render_svg(scene->value, r));
    g_last_error = r.message;
  });
}

cosmop_status cosmop_bench(const char* suite, int reps, int jobs, const cosmop_config* cfg,
                           char** csv, int* all_sat) {
  REQUIRE(suite && csv && all_sat, "null argument");
  return guarded([&] {
    const cosmop::Config& c = config_or_default(cfg);
    const auto scenarios = cosmop::bench::suite(suite, reps > 0 ? reps : c.bench_reps);
    const auto rows = cosmop::bench::run_suite(
        scenarios, cosmop::bench::seeded_process_factory(c.effective_solver_cmd(), c.bench_seed_option),
        c.solver_timeout, jobs > 0 ? jobs : c.bench_jobs);
    *all_sat = 1;
    for (const auto& r : rows) *all_sat = *all_sat && r.sat;
    *csv = dup(cosmop::bench::rows_csv(rows));
  });
}

}  // extern "C"
