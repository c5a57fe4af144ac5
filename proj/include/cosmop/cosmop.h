/* C interface to the cosmop planner: scene loading, CLTLB(D) goal parsing,
 * SMT-based plan synthesis, plan validation, DWA simulation and the room-grid
 * benchmark.
 *
 * Every object is an opaque handle released with its *_free function. Every
 * fallible call returns a cosmop_status; on failure cosmop_last_error()
 * describes the problem (per calling thread). Strings handed out through
 * `char**` parameters are owned by the caller and released with
 * cosmop_string_free. */
#ifndef COSMOP_H
#define COSMOP_H

#include <stdint.h>

#if defined(_WIN32)
#define COSMOP_API __declspec(dllexport)
#else
#define COSMOP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  COSMOP_OK = 0,
  COSMOP_ERR_INVALID_ARGUMENT = 1,
  COSMOP_ERR_IO = 2,
  COSMOP_ERR_PARSE = 3,
  COSMOP_ERR_VALIDATION = 4,
  COSMOP_ERR_EVAL = 5,
  COSMOP_ERR_ENCODE = 6,
  COSMOP_ERR_SOLVER = 7,
  COSMOP_ERR_INTERNAL = 8
} cosmop_status;

typedef enum {
  COSMOP_PLAN_FOUND = 0,
  COSMOP_PLAN_INFEASIBLE = 1,
  COSMOP_PLAN_TIMEOUT = 2,
  COSMOP_PLAN_UNKNOWN = 3
} cosmop_plan_outcome;

typedef enum {
  COSMOP_SIM_ALL_REACHED = 0,
  COSMOP_SIM_STOPPED_SAFE = 1,
  COSMOP_SIM_MONITOR_VIOLATION = 2
} cosmop_sim_outcome;

typedef enum {
  COSMOP_PRIM_GOTO = 0,
  COSMOP_PRIM_PUSH = 1,
  COSMOP_PRIM_PICKUP = 2,
  COSMOP_PRIM_LEAVE = 3
} cosmop_primitive;

typedef struct cosmop_config cosmop_config;
typedef struct cosmop_scene cosmop_scene;
typedef struct cosmop_formula cosmop_formula;
typedef struct cosmop_plan cosmop_plan;

typedef struct {
  cosmop_primitive primitive;
  int arg; /* 1-based door/object index; 0 for GoTo */
  int64_t x, y, alpha;
} cosmop_step;

typedef struct {
  cosmop_sim_outcome outcome;
  int failed_step;   /* 1-based plan step that stopped, 0 when none */
  int64_t stop_x, stop_y, stop_alpha;
  int cycles;        /* control cycles simulated */
} cosmop_sim_report;

COSMOP_API const char* cosmop_version(void);
COSMOP_API const char* cosmop_last_error(void);
COSMOP_API void cosmop_string_free(char* s);

/* Configuration: defaults, optionally overridden by a key=value file. */
COSMOP_API cosmop_status cosmop_config_new(cosmop_config** out);
COSMOP_API cosmop_status cosmop_config_load_file(const char* path, cosmop_config** out);
COSMOP_API cosmop_status cosmop_config_set(cosmop_config* cfg, const char* key, const char* value);
COSMOP_API void cosmop_config_free(cosmop_config* cfg);

COSMOP_API cosmop_status cosmop_scene_load_file(const char* path, cosmop_scene** out);
COSMOP_API cosmop_status cosmop_scene_load_string(const char* json, cosmop_scene** out);
COSMOP_API cosmop_status cosmop_scene_to_json(const cosmop_scene* scene, char** out);
COSMOP_API void cosmop_scene_free(cosmop_scene* scene);

COSMOP_API cosmop_status cosmop_formula_parse(const char* text, cosmop_formula** out);
COSMOP_API cosmop_status cosmop_formula_load_file(const char* path, cosmop_formula** out);
COSMOP_API cosmop_status cosmop_formula_to_string(const cosmop_formula* f, char** out);
COSMOP_API void cosmop_formula_free(cosmop_formula* f);

/* Searches K = k_min..k_max for the first satisfiable horizon. `plan` is set
 * only when the outcome is COSMOP_PLAN_FOUND. `cfg` may be NULL. */
COSMOP_API cosmop_status cosmop_synthesize(const cosmop_scene* scene, const cosmop_formula* goal,
                                           int k_min, int k_max, int64_t timeout_ms,
                                           const cosmop_config* cfg,
                                           cosmop_plan_outcome* outcome, cosmop_plan** plan);

COSMOP_API int cosmop_plan_length(const cosmop_plan* plan);
/* k is 1-based. */
COSMOP_API cosmop_status cosmop_plan_step(const cosmop_plan* plan, int k, cosmop_step* out);
COSMOP_API cosmop_status cosmop_plan_to_json(const cosmop_plan* plan, char** out);
COSMOP_API cosmop_status cosmop_plan_load_file(const char* path, const cosmop_scene* scene,
                                               cosmop_plan** out);
COSMOP_API void cosmop_plan_free(cosmop_plan* plan);

/* Independent re-check. `goal` may be NULL (no goal). `failed_step` is the
 * 1-based step of the first failing check, 0 when the failure is not local
 * to a step or nothing failed. `report` (optional) lists the failed checks. */
COSMOP_API cosmop_status cosmop_plan_validate(const cosmop_plan* plan, const cosmop_scene* scene,
                                              const cosmop_formula* goal, int* ok,
                                              int* failed_step, char** report);

/* Executes the plan in the DWA simulator. `obstacles_json` (optional) is a
 * moving-obstacle scenario; `csv` and `svg` are optional outputs. */
COSMOP_API cosmop_status cosmop_simulate(const cosmop_plan* plan, const cosmop_scene* scene,
                                         const char* obstacles_json, uint64_t seed,
                                         const cosmop_config* cfg, cosmop_sim_report* report,
                                         char** csv, char** svg);

/* Runs a benchmark suite ("size", "rooms", "k", "complexity"); returns the
 * CSV table and whether every row was satisfiable. reps/jobs <= 0 use the
 * configuration defaults. */
COSMOP_API cosmop_status cosmop_bench(const char* suite, int reps, int jobs,
                                      const cosmop_config* cfg, char** csv, int* all_sat);

#ifdef __cplusplus
}
#endif

#endif /* COSMOP_H */
