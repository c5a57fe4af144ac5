#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cosmop/dwa.hpp"
#include "cosmop/planner.hpp"
#include "cosmop/scene.hpp"

namespace cosmop::sim {

enum class SimOutcome { AllReached, StoppedSafe, MonitorViolation };

const char* to_string(SimOutcome o);

struct SimulationResult {
  SimOutcome outcome = SimOutcome::AllReached;
  int failed_step = -1;  // plan step whose leg did not reach its waypoint
  std::vector<dwa::TraceRow> rows;
  std::vector<std::vector<std::pair<double, double>>> obstacle_paths;
  std::vector<Pose> waypoints;
  // Where the robot came to rest; the root of a receding-horizon replan.
  planner::WorldState stop_state;
  std::string message;
};

// Runs every GoTo step as a DWA leg among the moving obstacles; Push, PickUp
// and Leave are discrete events that set the pose from the plan. Execution
// stops at the first leg that does not reach its waypoint.
SimulationResult simulate_plan(const planner::Plan& plan, const SceneDescription& scene,
                               std::vector<dwa::ObstacleState> obstacles,
                               const dwa::DwaParams& base, uint64_t seed, double leg_max_t);

// Static overlay of the scene, the planned waypoints, the driven path and
// the obstacle paths.
std::string render_svg(const SceneDescription& scene, const SimulationResult& result);

}  // namespace cosmop::sim
