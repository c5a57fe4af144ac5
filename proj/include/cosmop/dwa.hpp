#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace cosmop::dwa {

// Continuous robot state: millimetres, radians, mm/s, rad/s, seconds.
struct SimState {
  double x = 0;
  double y = 0;
  double heading = 0;
  double v = 0;
  double w = 0;
  double t = 0;
};

enum class ObstaclePolicy { Static, ConstantVelocity, Adversarial };

const char* to_string(ObstaclePolicy p);

// Disc obstacle. Speeds are capped at DwaParams::V whenever it moves.
struct ObstacleState {
  double x = 0;
  double y = 0;
  double vx = 0;
  double vy = 0;
  double radius = 0;
  ObstaclePolicy policy = ObstaclePolicy::Static;
};

struct DwaParams {
  double v_max = 1000;   // mm/s
  double b = 500;        // braking deceleration, mm/s^2
  double a_max = 500;    // acceleration, mm/s^2
  double eps = 0.1;      // control cycle, s
  double V = 500;        // obstacle speed bound, mm/s
  double w_max = 2.0;    // rad/s
  double alpha_max = 0;  // rad/s^2; 0 means a_max / (agent side / 2)
  double robot_radius = 0;
  double w_heading = 1.0;
  double w_clearance = 0.2;
  double w_velocity = 0.4;
  double clearance_cap = 2000;  // mm; clearance score saturates here
  int n_v = 11;
  int n_w = 21;
  double goal_tolerance = 20;  // mm

  // Throws ValidationError when a field is out of range.
  void check() const;
};

// Defaults for a square agent of side `agent_l`: disc radius l/sqrt(2) and
// rotational acceleration a_max / (l/2).
DwaParams params_for_agent(int64_t agent_l, DwaParams base = {});

struct Velocity {
  double v = 0;
  double w = 0;

  friend bool operator==(const Velocity&, const Velocity&) = default;
};

// Centre distance minus both radii.
double clearance(const SimState& s, const ObstacleState& o, double robot_radius);

// v = 0, or clearance beyond the braking distance plus what the obstacle can
// cover while the robot brakes.
bool passive_safe(const SimState& s, const ObstacleState& o, const DwaParams& p);

// The admissibility margin the window filter demands for a candidate speed v:
// braking bound plus one cycle of worst-case motion.
double window_margin(double v, const DwaParams& p);

// Acceleration-bounded (v, w) grid filtered by window_margin against every
// obstacle. The braking pair (v - b*eps clamped at 0) is always present.
std::vector<Velocity> dynamic_window(const SimState& s, const std::vector<ObstacleState>& obstacles,
                                     const DwaParams& p);

// The pair of the window that keeps the robot braking as hard as allowed.
Velocity braking_pair(const SimState& s, const DwaParams& p);

struct Goal {
  double x = 0;
  double y = 0;
};

// Weighted heading/clearance/velocity objective; ties go to lower |w| then
// lower v. The window must be non-empty.
Velocity select_velocity(const std::vector<Velocity>& window, const SimState& s, const Goal& goal,
                         const std::vector<ObstacleState>& obstacles, const DwaParams& p);

// Exact circular-arc integration of a constant command.
SimState step(const SimState& s, Velocity cmd, double dt);

// Advances an obstacle by dt under its policy, never faster than p.V.
// Adversarial obstacles head for the robot with a small random heading
// jitter drawn from `rng`.
ObstacleState advance(const ObstacleState& o, const SimState& robot, double dt, const DwaParams& p,
                      std::mt19937_64& rng);

struct TraceRow {
  double t, x, y, heading, v, w, min_dist;
  bool phi_ps;
};

enum class LegOutcome { Reached, StoppedSafe, MonitorViolation };

const char* to_string(LegOutcome o);

struct LegResult {
  LegOutcome outcome = LegOutcome::Reached;
  int violation_index = -1;  // row index where the monitor failed
  SimState final_state;
  double remaining = 0;      // distance to goal at the end
  bool contact_at_rest_only = true;
  std::vector<TraceRow> rows;
  std::vector<std::vector<std::pair<double, double>>> obstacle_paths;
};

// Closed-loop DWA until the goal is within tolerance (then braked to rest) or
// max_t elapses. The monitor checks passive_safe against every obstacle after
// every cycle. `obstacles` is updated in place.
LegResult run_leg(const SimState& start, const Goal& goal, std::vector<ObstacleState>& obstacles,
                  const DwaParams& p, double max_t, std::mt19937_64& rng);

// Scenario file: JSON list of {x, y, vx, vy, radius, policy}.
std::vector<ObstacleState> load_scenario(std::string_view json_text);

std::string trace_csv(const std::vector<TraceRow>& rows);

}  // namespace cosmop::dwa
