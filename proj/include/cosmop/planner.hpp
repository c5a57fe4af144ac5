#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "cosmop/logic.hpp"
#include "cosmop/primitives.hpp"
#include "cosmop/scene.hpp"
#include "cosmop/solver.hpp"

namespace cosmop::planner {

// One plan step s(k): the primitive that drives the robot into `waypoint`.
struct PlanStep {
  primitives::PrimitiveId primitive;
  Pose waypoint;

  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

struct Plan {
  std::vector<PlanStep> steps;  // steps[k] moves state k to state k+1
  logic::Trace full_trace;

  int K() const { return int(steps.size()); }
};

struct PlanRequest {
  SceneDescription scene;
  logic::Formula goal = logic::truth(true);
  int k_min = 1;
  int k_max = 1;
  std::chrono::milliseconds timeout{120000};
};

enum class Outcome { Found, Infeasible, Timeout, Unknown };

const char* to_string(Outcome o);

struct Attempt {
  int K;
  solver::Status status;
  double ms;
};

struct SynthesisResult {
  Outcome outcome = Outcome::Infeasible;
  std::optional<Plan> plan;
  std::vector<Attempt> attempts;
  std::string diagnostic;
};

// goal ∧ primitive spec of the scene.
logic::Formula planning_formula(const SceneDescription& scene, const logic::Formula& goal);

// Linear scan K = k_min..k_max; returns the first Sat. Every Sat model is
// re-checked against the asserted terms, the decoded trace against the formula
// under logic::eval, and the extracted plan with validate_plan; any
// disagreement raises InternalError.
SynthesisResult synthesize(const PlanRequest& req, const solver::SessionFactory& factory);

struct CheckResult {
  std::string name;
  bool passed = true;
  int step = -1;  // violating step index (0-based), -1 when not step-local
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool ok() const;
  // First failed check, ordered by step index.
  std::optional<CheckResult> first_failure() const;
};

// Independent re-check of a plan: trace ⊨ goal ∧ spec, and per-step geometric
// precondition/postcondition chaining computed directly from the scene.
ValidationReport validate_plan(const Plan& plan, const SceneDescription& scene,
                               const logic::Formula& goal);

// Builds the trace a step list induces from the scene's initial state, with
// the discrete effects of each primitive. Used for hand-written plans.
Plan plan_from_steps(const SceneDescription& scene, const std::vector<PlanStep>& steps);

struct WorldState {
  Pose robot;
  std::vector<MovableObject> objects;
};

// World state at instant k of a plan's trace.
WorldState state_at(const Plan& plan, const SceneDescription& scene, int k);

// Fresh request rooted at `current` in `scene_update`; the old plan is
// discarded and its length only bounds the new horizon. Throws
// ValidationError when the current state is not a valid initial state.
PlanRequest plan_to_receding_horizon(const Plan& plan, const WorldState& current,
                                     const SceneDescription& scene_update,
                                     const logic::Formula& goal,
                                     std::chrono::milliseconds timeout);

std::string plan_to_json(const Plan& plan);
// Throws ParseError on malformed input or unknown primitive names.
Plan plan_from_json(std::string_view text, const SceneDescription& scene);

}  // namespace cosmop::planner
