#include "cosmop/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace cosmop::sim {

using primitives::PrimitiveKind;

const char* to_string(SimOutcome o) {
  switch (o) {
    case SimOutcome::AllReached: return "all_reached";
    case SimOutcome::StoppedSafe: return "stopped_safe";
    case SimOutcome::MonitorViolation: return "monitor_violation";
  }
  return "?";
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Pose rounded(const dwa::SimState& s) {
  int64_t deg = std::llround(s.heading / kDeg) % 360;
  if (deg < 0) deg += 360;
  return {std::llround(s.x), std::llround(s.y), deg};
}

}  // namespace

SimulationResult simulate_plan(const planner::Plan& plan, const SceneDescription& scene,
                               std::vector<dwa::ObstacleState> obstacles,
                               const dwa::DwaParams& base, uint64_t seed, double leg_max_t) {
  const dwa::DwaParams p = dwa::params_for_agent(scene.agent.l, base);
  p.check();
  std::mt19937_64 rng(seed);
  SimulationResult out;
  out.obstacle_paths.resize(obstacles.size());

  dwa::SimState s;
  s.x = double(scene.robot_initial.x);
  s.y = double(scene.robot_initial.y);
  s.heading = double(scene.robot_initial.alpha) * kDeg;
  out.waypoints.push_back(scene.robot_initial);

  auto merge = [&](const dwa::LegResult& leg) {
    out.rows.insert(out.rows.end(), leg.rows.begin(), leg.rows.end());
    for (size_t i = 0; i < leg.obstacle_paths.size(); ++i)
      out.obstacle_paths[i].insert(out.obstacle_paths[i].end(), leg.obstacle_paths[i].begin(),
                                   leg.obstacle_paths[i].end());
  };

  for (int k = 0; k < plan.K(); ++k) {
    const planner::PlanStep& st = plan.steps[size_t(k)];
    out.waypoints.push_back(st.waypoint);
    if (st.primitive.kind == PrimitiveKind::GoTo) {
      const dwa::Goal goal{double(st.waypoint.x), double(st.waypoint.y)};
      dwa::LegResult leg = dwa::run_leg(s, goal, obstacles, p, leg_max_t, rng);
      merge(leg);
      s = leg.final_state;
      if (leg.outcome == dwa::LegOutcome::MonitorViolation) {
        out.outcome = SimOutcome::MonitorViolation;
        out.failed_step = k;
        out.message = "passive safety monitor failed during step " + std::to_string(k + 1) +
                      " at t=" + std::to_string(leg.rows[size_t(leg.violation_index)].t);
        break;
      }
      if (leg.outcome == dwa::LegOutcome::StoppedSafe) {
        out.outcome = SimOutcome::StoppedSafe;
        out.failed_step = k;
        out.message = "step " + std::to_string(k + 1) + " stopped safely " +
                      std::to_string(leg.remaining) + " mm short of its waypoint";
        break;
      }
    }
    // Discrete events (and the end of a reached leg) put the robot exactly on
    // the planned pose.
    s.x = double(st.waypoint.x);
    s.y = double(st.waypoint.y);
    s.heading = double(st.waypoint.alpha) * kDeg;
    s.v = 0;
    s.w = 0;
  }

  const int at = out.failed_step >= 0 ? out.failed_step : plan.K();
  out.stop_state = planner::state_at(plan, scene, at);
  out.stop_state.robot = rounded(s);
  return out;
}

std::string render_svg(const SceneDescription& scene, const SimulationResult& result) {
  const Rect ws = scene.workspace.box();
  const double w = ws.xmax - ws.xmin, h = ws.ymax - ws.ymin;
  const double stroke = std::max(w, h) / 400;
  std::string out;
  char buf[512];
  // y grows upward in the scene, downward in SVG.
  auto X = [&](double x) { return x - ws.xmin; };
  auto Y = [&](double y) { return ws.ymax - y; };

  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 %.0f %.0f\" "
                "width=\"800\" height=\"%.0f\">\n",
                w, h, 800 * h / w);
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<rect x=\"0\" y=\"0\" width=\"%.0f\" height=\"%.0f\" fill=\"white\" "
                "stroke=\"black\" stroke-width=\"%.1f\"/>\n",
                w, h, stroke * 2);
  out += buf;
  for (const Obstacle& o : scene.obstacles) {
    const Rect b = o.box();
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"#444\" "
                  "stroke=\"#444\" stroke-width=\"%.1f\"/>\n",
                  X(b.xmin), Y(b.ymax), b.xmax - b.xmin, b.ymax - b.ymin, stroke * 2);
    out += buf;
  }
  for (const MovableObject& b : scene.objects) {
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%ld\" height=\"%ld\" fill=\"#c90\"/>\n",
                  X(double(b.x) - double(b.l) / 2), Y(double(b.y) + double(b.l) / 2), long(b.l),
                  long(b.l));
    out += buf;
  }

  std::string pts;
  for (const Pose& q : result.waypoints) {
    std::snprintf(buf, sizeof buf, "%.1f,%.1f ", X(double(q.x)), Y(double(q.y)));
    pts += buf;
  }
  out += "<polyline fill=\"none\" stroke=\"#999\" stroke-dasharray=\"" + std::to_string(stroke * 6) +
         "\" stroke-width=\"" + std::to_string(stroke) + "\" points=\"" + pts + "\"/>\n";

  pts.clear();
  for (const dwa::TraceRow& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%.1f,%.1f ", X(r.x), Y(r.y));
    pts += buf;
  }
  out += "<polyline fill=\"none\" stroke=\"#06c\" stroke-width=\"" + std::to_string(stroke * 2) +
         "\" points=\"" + pts + "\"/>\n";

  for (const auto& path : result.obstacle_paths) {
    if (path.empty()) continue;
    pts.clear();
    for (const auto& [x, y] : path) {
      std::snprintf(buf, sizeof buf, "%.1f,%.1f ", X(x), Y(y));
      pts += buf;
    }
    out += "<polyline fill=\"none\" stroke=\"#c00\" stroke-width=\"" + std::to_string(stroke) +
           "\" points=\"" + pts + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace cosmop::sim
