#include "cosmop/dwa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <limits>
#include <numbers>

#include "cosmop/error.hpp"

namespace cosmop::dwa {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_angle(double a) {
  a = std::remainder(a, 2 * kPi);
  return a <= -kPi ? a + 2 * kPi : a;
}

double alpha_of(const DwaParams& p) { return p.alpha_max > 0 ? p.alpha_max : p.a_max; }

}  // namespace

const char* to_string(ObstaclePolicy p) {
  switch (p) {
    case ObstaclePolicy::Static: return "static";
    case ObstaclePolicy::ConstantVelocity: return "constant";
    case ObstaclePolicy::Adversarial: return "adversarial";
  }
  return "?";
}

const char* to_string(LegOutcome o) {
  switch (o) {
    case LegOutcome::Reached: return "reached";
    case LegOutcome::StoppedSafe: return "stopped_safe";
    case LegOutcome::MonitorViolation: return "monitor_violation";
  }
  return "?";
}

void DwaParams::check() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0)) throw ValidationError(std::string("dwa: ") + name + " must be positive");
  };
  positive(v_max, "v_max");
  positive(b, "b");
  positive(a_max, "a_max");
  positive(w_max, "w_max");
  positive(w_heading, "w_heading");
  positive(w_clearance, "w_clearance");
  positive(w_velocity, "w_velocity");
  positive(clearance_cap, "clearance_cap");
  positive(goal_tolerance, "goal_tolerance");
  if (V < 0) throw ValidationError("dwa: V must be non-negative");
  if (alpha_max < 0) throw ValidationError("dwa: alpha_max must be non-negative");
  if (robot_radius < 0) throw ValidationError("dwa: robot_radius must be non-negative");
  if (eps < 0.02 || eps > 0.5) throw ValidationError("dwa: eps must lie in [0.02, 0.5]");
  if (n_v < 2 || n_w < 2) throw ValidationError("dwa: window resolution must be at least 2x2");
}

DwaParams params_for_agent(int64_t agent_l, DwaParams base) {
  base.robot_radius = double(agent_l) / std::numbers::sqrt2;
  if (base.alpha_max <= 0) base.alpha_max = base.a_max / (0.5 * double(agent_l));
  return base;
}

double clearance(const SimState& s, const ObstacleState& o, double robot_radius) {
  return std::hypot(s.x - o.x, s.y - o.y) - robot_radius - o.radius;
}

bool passive_safe(const SimState& s, const ObstacleState& o, const DwaParams& p) {
  if (s.v == 0) return true;
  return clearance(s, o, p.robot_radius) > s.v * s.v / (2 * p.b) + p.V * s.v / p.b;
}

double window_margin(double v, const DwaParams& p) {
  return v * v / (2 * p.b) + p.V * v / p.b +
         (p.a_max / p.b + 1) * (p.a_max * p.eps * p.eps / 2 + p.eps * (v + p.V));
}

Velocity braking_pair(const SimState& s, const DwaParams& p) {
  const double dw = alpha_of(p) * p.eps;
  return {std::max(0.0, s.v - p.b * p.eps), std::clamp(0.0, s.w - dw, s.w + dw)};
}

std::vector<Velocity> dynamic_window(const SimState& s, const std::vector<ObstacleState>& obstacles,
                                     const DwaParams& p) {
  const double v_lo = std::max(0.0, s.v - p.b * p.eps);
  const double v_hi = std::min(p.v_max, s.v + p.a_max * p.eps);
  const double dw = alpha_of(p) * p.eps;
  const double w_lo = std::max(-p.w_max, s.w - dw);
  const double w_hi = std::min(p.w_max, s.w + dw);

  double nearest = kInf;
  for (const ObstacleState& o : obstacles) nearest = std::min(nearest, clearance(s, o, p.robot_radius));

  std::vector<Velocity> window;
  const Velocity brake = braking_pair(s, p);
  window.push_back(brake);
  for (int i = 0; i < p.n_v; ++i) {
    const double v = v_hi <= v_lo ? v_lo : v_lo + (v_hi - v_lo) * i / (p.n_v - 1);
    if (!(nearest > window_margin(v, p)) && v > 0) continue;
    // v = 0 never needs the margin: a resting robot is passively safe.
    for (int j = 0; j < p.n_w; ++j) {
      const double w = w_hi <= w_lo ? w_lo : w_lo + (w_hi - w_lo) * j / (p.n_w - 1);
      const Velocity c{v, w};
      if (!(c == brake)) window.push_back(c);
    }
    if (v_hi <= v_lo) break;
  }
  return window;
}

SimState step(const SimState& s, Velocity cmd, double dt) {
  SimState n = s;
  if (std::abs(cmd.w) < 1e-6) {
    n.x += cmd.v * std::cos(s.heading) * dt;
    n.y += cmd.v * std::sin(s.heading) * dt;
  } else {
    const double r = cmd.v / cmd.w;
    const double h1 = s.heading + cmd.w * dt;
    n.x += r * (std::sin(h1) - std::sin(s.heading));
    n.y -= r * (std::cos(h1) - std::cos(s.heading));
  }
  n.heading = wrap_angle(s.heading + cmd.w * dt);
  n.v = cmd.v;
  n.w = cmd.w;
  n.t = s.t + dt;
  return n;
}

Velocity select_velocity(const std::vector<Velocity>& window, const SimState& s, const Goal& goal,
                         const std::vector<ObstacleState>& obstacles, const DwaParams& p) {
  if (window.empty()) throw InternalError("dwa: empty dynamic window");
  const double total = p.w_heading + p.w_clearance + p.w_velocity;
  const double wh = p.w_heading / total, wc = p.w_clearance / total, wv = p.w_velocity / total;
  const double alpha = alpha_of(p);

  Velocity best = window.front();
  double best_score = 0;
  bool first = true;
  for (const Velocity& c : window) {
    const SimState n = step(s, c, p.eps);
    // Heading once the commanded rotation has been braked out, so the score
    // does not reward turning past the goal bearing.
    const double settle = n.heading + c.w * std::abs(c.w) / (2 * alpha);
    const double bearing = std::atan2(goal.y - n.y, goal.x - n.x);
    const double dist = std::hypot(goal.x - n.x, goal.y - n.y);
    const double heading = dist < 1e-9 ? 1.0 : 1.0 - std::abs(wrap_angle(bearing - settle)) / kPi;
    double clear = p.clearance_cap;
    for (const ObstacleState& o : obstacles) {
      ObstacleState q = o;
      q.x += o.vx * p.eps;
      q.y += o.vy * p.eps;
      clear = std::min(clear, std::max(0.0, clearance(n, q, p.robot_radius)));
    }
    const double score = wh * heading + wc * clear / p.clearance_cap + wv * c.v / p.v_max;
    const double tol = 1e-9 * std::max(1.0, std::abs(best_score));
    bool better = first || score > best_score + tol;
    first = false;
    if (!better && std::abs(score - best_score) <= tol) {
      if (std::abs(c.w) < std::abs(best.w) - 1e-12)
        better = true;
      else if (std::abs(std::abs(c.w) - std::abs(best.w)) <= 1e-12 && c.v < best.v)
        better = true;
    }
    if (better) {
      best = c;
      best_score = score;
    }
  }
  return best;
}

ObstacleState advance(const ObstacleState& o, const SimState& robot, double dt, const DwaParams& p,
                      std::mt19937_64& rng) {
  ObstacleState n = o;
  switch (o.policy) {
    case ObstaclePolicy::Static:
      n.vx = n.vy = 0;
      return n;
    case ObstaclePolicy::ConstantVelocity:
      break;
    case ObstaclePolicy::Adversarial: {
      std::uniform_real_distribution<double> jitter(-0.2, 0.2);
      const double dx = robot.x - o.x, dy = robot.y - o.y;
      const double dist = std::hypot(dx, dy);
      const double speed = dist < 1e-9 ? 0.0 : std::min(p.V, dist / dt);
      const double dir = std::atan2(dy, dx) + jitter(rng);
      n.vx = speed * std::cos(dir);
      n.vy = speed * std::sin(dir);
      break;
    }
  }
  const double speed = std::hypot(n.vx, n.vy);
  if (speed > p.V) {
    n.vx *= p.V / speed;
    n.vy *= p.V / speed;
  }
  n.x += n.vx * dt;
  n.y += n.vy * dt;
  return n;
}

LegResult run_leg(const SimState& start, const Goal& goal, std::vector<ObstacleState>& obstacles,
                  const DwaParams& p, double max_t, std::mt19937_64& rng) {
  p.check();
  LegResult out;
  out.obstacle_paths.resize(obstacles.size());
  SimState s = start;

  auto record = [&](const SimState& st) {
    double min_dist = kInf;
    bool safe = true;
    for (size_t i = 0; i < obstacles.size(); ++i) {
      min_dist = std::min(min_dist, clearance(st, obstacles[i], p.robot_radius));
      safe = safe && passive_safe(st, obstacles[i], p);
      out.obstacle_paths[i].emplace_back(obstacles[i].x, obstacles[i].y);
    }
    if (min_dist <= 0 && st.v != 0) out.contact_at_rest_only = false;
    out.rows.push_back({st.t, st.x, st.y, st.heading, st.v, st.w, min_dist, safe});
    return safe;
  };

  auto finish = [&](LegOutcome o) {
    out.outcome = o;
    out.final_state = s;
    out.remaining = std::hypot(goal.x - s.x, goal.y - s.y);
    return out;
  };

  if (!record(s)) {
    out.violation_index = 0;
    return finish(LegOutcome::MonitorViolation);
  }

  bool arrived = false;
  const double t_end = start.t + max_t;
  while (s.t < t_end - 1e-12) {
    const double dist = std::hypot(goal.x - s.x, goal.y - s.y);
    if (dist <= p.goal_tolerance) arrived = true;
    if (arrived && s.v == 0 && s.w == 0) return finish(LegOutcome::Reached);

    std::vector<Velocity> window = dynamic_window(s, obstacles, p);
    const Velocity brake = braking_pair(s, p);
    if (std::find(window.begin(), window.end(), brake) == window.end())
      throw InternalError("dwa: braking pair missing from the window");

    Velocity cmd = brake;
    if (!arrived) {
      // Never approach faster than the robot can stop at the goal.
      const double cap = std::sqrt(2 * p.b * dist);
      std::vector<Velocity> admissible;
      for (const Velocity& c : window)
        if (c.v <= cap || c == brake) admissible.push_back(c);
      cmd = select_velocity(admissible, s, goal, obstacles, p);
    }

    const double dt = std::min(p.eps, t_end - s.t);
    const SimState before = s;
    s = step(s, cmd, dt);
    for (ObstacleState& o : obstacles) o = advance(o, before, dt, p, rng);
    if (!record(s)) {
      out.violation_index = int(out.rows.size()) - 1;
      return finish(LegOutcome::MonitorViolation);
    }
  }
  const double dist = std::hypot(goal.x - s.x, goal.y - s.y);
  if (dist <= p.goal_tolerance && s.v == 0) return finish(LegOutcome::Reached);
  return finish(LegOutcome::StoppedSafe);
}

std::vector<ObstacleState> load_scenario(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("scenario: expected a JSON list of obstacles");
  std::vector<ObstacleState> out;
  for (size_t i = 0; i < doc.size(); ++i) {
    const json& o = doc[i];
    const std::string where = "scenario obstacle " + std::to_string(i + 1);
    auto number = [&](const char* key, double fallback, bool required) {
      if (!o.contains(key)) {
        if (required) throw ParseError(where + ": missing '" + key + "'");
        return fallback;
      }
      if (!o[key].is_number()) throw ParseError(where + ": '" + key + "' must be a number");
      return o[key].get<double>();
    };
    if (!o.is_object()) throw ParseError(where + " is not an object");
    ObstacleState s;
    s.x = number("x", 0, true);
    s.y = number("y", 0, true);
    s.vx = number("vx", 0, false);
    s.vy = number("vy", 0, false);
    s.radius = number("radius", 0, true);
    if (s.radius < 0) throw ValidationError(where + ": radius must be non-negative");
    const std::string policy = o.value("policy", std::string("constant"));
    if (policy == "static")
      s.policy = ObstaclePolicy::Static;
    else if (policy == "constant" || policy == "constant-velocity")
      s.policy = ObstaclePolicy::ConstantVelocity;
    else if (policy == "adversarial")
      s.policy = ObstaclePolicy::Adversarial;
    else
      throw ParseError(where + ": unknown policy '" + policy + "'");
    out.push_back(s);
  }
  return out;
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::string out = "t,x,y,heading,v,w,min_dist,phi_ps\n";
  char buf[256];
  for (const TraceRow& r : rows) {
    char dist[32] = "inf";
    if (!std::isinf(r.min_dist)) std::snprintf(dist, sizeof dist, "%.3f", r.min_dist);
    std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.3f,%.6f,%.3f,%.6f,%s,%d\n", r.t, r.x, r.y,
                  r.heading, r.v, r.w, dist, r.phi_ps ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace cosmop::dwa
