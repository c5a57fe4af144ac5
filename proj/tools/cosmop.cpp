// Command-line front end. Talks to the planner exclusively through the C API.
#include <cosmop/cosmop.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kInfeasible = 2;
constexpr int kNoAnswer = 3;  // timeout or unknown
constexpr int kStoppedSafe = 4;
constexpr int kViolation = 5;

struct Failure {
  std::string message;
};

void check(cosmop_status s, const std::string& what) {
  if (s != COSMOP_OK) throw Failure{what + ": " + cosmop_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ConfigPtr = std::unique_ptr<cosmop_config, Deleter<cosmop_config, cosmop_config_free>>;
using ScenePtr = std::unique_ptr<cosmop_scene, Deleter<cosmop_scene, cosmop_scene_free>>;
using FormulaPtr = std::unique_ptr<cosmop_formula, Deleter<cosmop_formula, cosmop_formula_free>>;
using PlanPtr = std::unique_ptr<cosmop_plan, Deleter<cosmop_plan, cosmop_plan_free>>;

// Takes ownership of a library-allocated string.
std::string take(char* s) {
  std::string out = s ? s : "";
  cosmop_string_free(s);
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot open '" + path + "'"};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{"cannot write '" + path + "'"};
}

ConfigPtr load_config(const std::string& path) {
  cosmop_config* c = nullptr;
  if (path.empty())
    check(cosmop_config_new(&c), "config");
  else
    check(cosmop_config_load_file(path.c_str(), &c), "config '" + path + "'");
  return ConfigPtr(c);
}

ScenePtr load_scene(const std::string& path) {
  cosmop_scene* s = nullptr;
  check(cosmop_scene_load_file(path.c_str(), &s), "scene '" + path + "'");
  return ScenePtr(s);
}

FormulaPtr load_formula(const std::string& path) {
  cosmop_formula* f = nullptr;
  check(cosmop_formula_load_file(path.c_str(), &f), "spec '" + path + "'");
  return FormulaPtr(f);
}

PlanPtr load_plan(const std::string& path, const cosmop_scene* scene) {
  cosmop_plan* p = nullptr;
  check(cosmop_plan_load_file(path.c_str(), scene, &p), "plan '" + path + "'");
  return PlanPtr(p);
}

const char* primitive_name(cosmop_primitive p) {
  switch (p) {
    case COSMOP_PRIM_GOTO: return "GoTo";
    case COSMOP_PRIM_PUSH: return "Push";
    case COSMOP_PRIM_PICKUP: return "PickUp";
    case COSMOP_PRIM_LEAVE: return "Leave";
  }
  return "?";
}

void print_steps(const cosmop_plan* plan) {
  const int K = cosmop_plan_length(plan);
  for (int k = 1; k <= K; ++k) {
    cosmop_step st;
    check(cosmop_plan_step(plan, k, &st), "plan step");
    std::fprintf(stderr, "  %2d  %-6s", k, primitive_name(st.primitive));
    if (st.primitive != COSMOP_PRIM_GOTO)
      std::fprintf(stderr, "(%d)", st.arg);
    else
      std::fprintf(stderr, "   ");
    std::fprintf(stderr, "  -> (%lld, %lld, %lld)\n", (long long)st.x, (long long)st.y,
                 (long long)st.alpha);
  }
}

struct PlanArgs {
  std::string scene, spec, out = "-", config;
  std::optional<int> K, k_min, k_max;
  int64_t timeout_ms = 0;
};

int run_plan(const PlanArgs& a) {
  int k_min, k_max;
  if (a.K) {
    if (a.k_min || a.k_max) throw Failure{"--K cannot be combined with --k-min/--k-max"};
    k_min = k_max = *a.K;
  } else {
    if (!a.k_min || !a.k_max) throw Failure{"give either --K or both --k-min and --k-max"};
    k_min = *a.k_min;
    k_max = *a.k_max;
  }
  ConfigPtr cfg = load_config(a.config);
  ScenePtr scene = load_scene(a.scene);
  FormulaPtr goal = load_formula(a.spec);

  cosmop_plan_outcome outcome;
  cosmop_plan* raw = nullptr;
  check(cosmop_synthesize(scene.get(), goal.get(), k_min, k_max, a.timeout_ms, cfg.get(), &outcome,
                          &raw),
        "synthesis");
  PlanPtr plan(raw);
  const std::string diagnostic = cosmop_last_error();
  switch (outcome) {
    case COSMOP_PLAN_FOUND: {
      std::fprintf(stderr, "plan found, K = %d\n", cosmop_plan_length(plan.get()));
      print_steps(plan.get());
      char* json = nullptr;
      check(cosmop_plan_to_json(plan.get(), &json), "plan output");
      write_text(a.out, take(json) + "\n");
      return kOk;
    }
    case COSMOP_PLAN_INFEASIBLE:
      std::fprintf(stderr, "infeasible: no plan for K in [%d, %d]\n", k_min, k_max);
      return kInfeasible;
    case COSMOP_PLAN_TIMEOUT:
      std::fprintf(stderr, "timeout: %s\n", diagnostic.c_str());
      return kNoAnswer;
    case COSMOP_PLAN_UNKNOWN:
      std::fprintf(stderr, "unknown: %s\n", diagnostic.c_str());
      return kNoAnswer;
  }
  return kError;
}

struct SimArgs {
  std::string plan, scene, obstacles, svg, csv, config;
  uint64_t seed = 0;
};

int run_simulate(const SimArgs& a) {
  ConfigPtr cfg = load_config(a.config);
  ScenePtr scene = load_scene(a.scene);
  PlanPtr plan = load_plan(a.plan, scene.get());
  const std::string obstacles = a.obstacles.empty() ? "" : read_text(a.obstacles);

  cosmop_sim_report rep;
  char* csv = nullptr;
  char* svg = nullptr;
  check(cosmop_simulate(plan.get(), scene.get(), a.obstacles.empty() ? nullptr : obstacles.c_str(),
                        a.seed, cfg.get(), &rep, a.csv.empty() ? nullptr : &csv,
                        a.svg.empty() ? nullptr : &svg),
        "simulation");
  const std::string message = cosmop_last_error();
  if (csv) write_text(a.csv, take(csv));
  if (svg) write_text(a.svg, take(svg));

  switch (rep.outcome) {
    case COSMOP_SIM_ALL_REACHED:
      std::fprintf(stderr, "all %d steps executed (%d control cycles)\n",
                   cosmop_plan_length(plan.get()), rep.cycles);
      return kOk;
    case COSMOP_SIM_STOPPED_SAFE:
      std::fprintf(stderr,
                   "stopped safely at step %d: %s\n"
                   "replan suggestion: re-run `cosmop plan` from robot pose (%lld, %lld, %lld)\n",
                   rep.failed_step, message.c_str(), (long long)rep.stop_x, (long long)rep.stop_y,
                   (long long)rep.stop_alpha);
      return kStoppedSafe;
    case COSMOP_SIM_MONITOR_VIOLATION:
      std::fprintf(stderr, "safety monitor violation at step %d: %s\n", rep.failed_step,
                   message.c_str());
      return kViolation;
  }
  return kError;
}

struct ValidateArgs {
  std::string plan, scene, spec;
};

int run_validate(const ValidateArgs& a) {
  ScenePtr scene = load_scene(a.scene);
  PlanPtr plan = load_plan(a.plan, scene.get());
  FormulaPtr goal;
  if (!a.spec.empty()) goal = load_formula(a.spec);
  int ok = 0, step = 0;
  char* report = nullptr;
  check(cosmop_plan_validate(plan.get(), scene.get(), goal.get(), &ok, &step, &report),
        "validation");
  const std::string text = take(report);
  if (ok) {
    std::fprintf(stderr, "plan valid (K = %d)\n", cosmop_plan_length(plan.get()));
    return kOk;
  }
  if (step > 0)
    std::fprintf(stderr, "plan rejected at step %d\n", step);
  else
    std::fprintf(stderr, "plan rejected\n");
  std::fputs(text.c_str(), stderr);
  return kViolation;
}

struct BenchArgs {
  std::string suite, csv = "-", config;
  int reps = 35, jobs = 1;
};

int run_bench(const BenchArgs& a) {
  ConfigPtr cfg = load_config(a.config);
  char* csv = nullptr;
  int all_sat = 0;
  check(cosmop_bench(a.suite.c_str(), a.reps, a.jobs, cfg.get(), &csv, &all_sat), "bench");
  write_text(a.csv, take(csv));
  if (!all_sat) {
    std::fprintf(stderr, "bench: some rows were not satisfiable\n");
    return kError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cosmop: temporal-logic task planning with DWA execution"};
  app.set_version_flag("--version", std::string("cosmop ") + cosmop_version());
  app.require_subcommand(1);

  PlanArgs pa;
  auto* plan = app.add_subcommand("plan", "synthesize a plan for a scene and goal formula");
  plan->add_option("--scene", pa.scene, "scene JSON")->required()->check(CLI::ExistingFile);
  plan->add_option("--spec", pa.spec, "goal formula file")->required()->check(CLI::ExistingFile);
  plan->add_option("--K", pa.K, "exact horizon")->check(CLI::PositiveNumber);
  plan->add_option("--k-min", pa.k_min, "smallest horizon to try")->check(CLI::PositiveNumber);
  plan->add_option("--k-max", pa.k_max, "largest horizon to try")->check(CLI::PositiveNumber);
  plan->add_option("--timeout", pa.timeout_ms, "solver timeout per horizon, ms (0: config)");
  plan->add_option("--out", pa.out, "plan JSON output ('-' for stdout)");
  plan->add_option("--config", pa.config, "configuration file")->check(CLI::ExistingFile);

  SimArgs sa;
  auto* sim = app.add_subcommand("simulate", "execute a plan with the DWA controller");
  sim->add_option("--plan", sa.plan, "plan JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--scene", sa.scene, "scene JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--obstacles", sa.obstacles, "moving-obstacle scenario JSON")
      ->check(CLI::ExistingFile);
  sim->add_option("--seed", sa.seed, "random seed for adversarial obstacles");
  sim->add_option("--svg", sa.svg, "write an SVG overlay");
  sim->add_option("--csv", sa.csv, "write the per-cycle trace");
  sim->add_option("--config", sa.config, "configuration file")->check(CLI::ExistingFile);

  ValidateArgs va;
  auto* val = app.add_subcommand("validate", "re-check a plan against the scene and a goal");
  val->add_option("--plan", va.plan, "plan JSON")->required()->check(CLI::ExistingFile);
  val->add_option("--scene", va.scene, "scene JSON")->required()->check(CLI::ExistingFile);
  val->add_option("--spec", va.spec, "goal formula file")->check(CLI::ExistingFile);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "run a timing suite over room-grid scenes");
  bench->add_option("--suite", ba.suite, "size | rooms | k | complexity")
      ->required()
      ->check(CLI::IsMember({"size", "rooms", "k", "complexity"}));
  bench->add_option("--reps", ba.reps, "repetitions per row")->check(CLI::PositiveNumber);
  bench->add_option("--jobs", ba.jobs, "rows run in parallel")->check(CLI::PositiveNumber);
  bench->add_option("--csv", ba.csv, "CSV output ('-' for stdout)");
  bench->add_option("--config", ba.config, "configuration file")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*plan) return run_plan(pa);
    if (*sim) return run_simulate(sa);
    if (*val) return run_validate(va);
    if (*bench) return run_bench(ba);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return kError;
  }
  return kError;
}
