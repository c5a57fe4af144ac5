#include "cosmop/planner.hpp"

#include <algorithm>
#include <json.hpp>

#include "cosmop/encoder.hpp"
#include "cosmop/error.hpp"

namespace cosmop::planner {

using primitives::PrimitiveId;
using primitives::PrimitiveKind;
namespace sym = primitives::sym;

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Found: return "found";
    case Outcome::Infeasible: return "infeasible";
    case Outcome::Timeout: return "timeout";
    case Outcome::Unknown: return "unknown";
  }
  return "?";
}

logic::Formula planning_formula(const SceneDescription& scene, const logic::Formula& goal) {
  return logic::land({goal, primitives::build_primitive_spec(scene)});
}

namespace {

int64_t int_at(const logic::Trace& rho, const std::string& s, int k) {
  auto it = rho.int_vars.find(s);
  if (it == rho.int_vars.end() || k < 0 || size_t(k) >= it->second.size())
    throw EvalError("trace has no value for '" + s + "' at instant " + std::to_string(k));
  return it->second[size_t(k)];
}

bool bool_at(const logic::Trace& rho, const std::string& s, int k) {
  auto it = rho.bool_vars.find(s);
  if (it == rho.bool_vars.end() || k < 0 || size_t(k) >= it->second.size())
    throw EvalError("trace has no value for '" + s + "' at instant " + std::to_string(k));
  return it->second[size_t(k)];
}

Plan extract_plan(const logic::Trace& rho, const SceneDescription& scene) {
  Plan plan;
  plan.full_trace = rho;
  for (int k = 0; k < rho.K; ++k) {
    PlanStep step;
    step.primitive = PrimitiveId::from_code(int(int_at(rho, sym::kAct, k)), scene);
    step.waypoint = {int_at(rho, sym::kRobotX, k + 1), int_at(rho, sym::kRobotY, k + 1),
                     int_at(rho, sym::kRobotAlpha, k + 1)};
    plan.steps.push_back(step);
  }
  return plan;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SynthesisResult synthesize(const PlanRequest& req, const solver::SessionFactory& factory) {
  if (req.k_min < 1 || req.k_min > req.k_max)
    throw ValidationError("plan request needs 1 <= k_min <= k_max");
  validate(req.scene);
  const logic::Formula f = planning_formula(req.scene, req.goal);

  SynthesisResult result;
  for (int K = req.k_min; K <= req.k_max; ++K) {
    const auto t0 = std::chrono::steady_clock::now();
    encode::EncodingContext ctx(K);
    const encode::AssertionSet set = encode::encode(f, ctx);
    std::unique_ptr<solver::Session> session = factory();
    session->load(set);
    solver::SatResult r = session->check(req.timeout);
    result.attempts.push_back({K, r.status, ms_since(t0)});

    switch (r.status) {
      case solver::Status::Unsat:
        continue;
      case solver::Status::Timeout:
        result.outcome = Outcome::Timeout;
        result.diagnostic = "solver timed out at K=" + std::to_string(K);
        return result;
      case solver::Status::Unknown:
        result.outcome = Outcome::Unknown;
        result.diagnostic = "solver returned unknown at K=" + std::to_string(K) + ": " + r.reason;
        return result;
      case solver::Status::Sat:
        break;
    }

    std::string failed;
    if (!solver::model_satisfies(*session, r.model, &failed))
      throw InternalError("solver model violates asserted term " + failed);
    logic::Trace rho = encode::decode_model(r.model, ctx);
    if (!logic::eval(f, rho, 0))
      throw InternalError("decoded trace at K=" + std::to_string(K) +
                          " does not satisfy the planning formula");
    Plan plan = extract_plan(rho, req.scene);
    ValidationReport report = validate_plan(plan, req.scene, req.goal);
    if (!report.ok()) {
      const CheckResult c = *report.first_failure();
      throw InternalError("synthesized plan fails check '" + c.name + "': " + c.detail);
    }
    result.outcome = Outcome::Found;
    result.plan = std::move(plan);
    return result;
  }
  result.outcome = Outcome::Infeasible;
  result.diagnostic = "unsat for every K in [" + std::to_string(req.k_min) + ", " +
                      std::to_string(req.k_max) + "]";
  return result;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::optional<CheckResult> ValidationReport::first_failure() const {
  std::optional<CheckResult> best;
  for (const CheckResult& c : checks) {
    if (c.passed) continue;
    if (!best) {
      best = c;
    } else if (c.step >= 0 && (best->step < 0 || c.step < best->step)) {
      best = c;
    }
  }
  return best;
}

WorldState state_at(const Plan& plan, const SceneDescription& scene, int k) {
  const logic::Trace& rho = plan.full_trace;
  WorldState s;
  s.robot = {int_at(rho, sym::kRobotX, k), int_at(rho, sym::kRobotY, k),
             int_at(rho, sym::kRobotAlpha, k)};
  for (int j = 1; j <= int(scene.objects.size()); ++j) {
    MovableObject b = scene.objects[size_t(j - 1)];
    b.x = int_at(rho, sym::obj_x(j), k);
    b.y = int_at(rho, sym::obj_y(j), k);
    b.carried = bool_at(rho, sym::obj_p(j), k);
    s.objects.push_back(b);
  }
  return s;
}

namespace {

class Checker {
 public:
  explicit Checker(ValidationReport& r) : report_(r) {}

  void check(bool ok, int step, std::string name, std::string detail = {}) {
    report_.checks.push_back({std::move(name), ok, step, ok ? std::string() : std::move(detail)});
  }

 private:
  ValidationReport& report_;
};

std::string pose_str(const Pose& p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " + std::to_string(p.alpha) +
         ")";
}

int carried_count(const WorldState& s) {
  return int(std::count_if(s.objects.begin(), s.objects.end(),
                           [](const MovableObject& b) { return b.carried; }));
}

bool same_flags(const WorldState& a, const WorldState& b) {
  for (size_t i = 0; i < a.objects.size(); ++i)
    if (a.objects[i].carried != b.objects[i].carried) return false;
  return true;
}

bool objects_unchanged_except(const WorldState& a, const WorldState& b, int except) {
  for (size_t i = 0; i < a.objects.size(); ++i) {
    if (int(i) + 1 == except) continue;
    if (a.objects[i].x != b.objects[i].x || a.objects[i].y != b.objects[i].y) return false;
  }
  return true;
}

bool inside(const Rect& r, double x, double y) {
  return x >= r.xmin && x <= r.xmax && y >= r.ymin && y <= r.ymax;
}

Rect object_box(const MovableObject& b) { return Rect::centered(double(b.x), double(b.y), double(b.l)); }

void check_goto(Checker& c, int k, const WorldState& s0, const WorldState& s1,
                const SceneDescription& scene) {
  const double half = 0.5 * double(scene.agent.l);
  const Rect corridor = Rect::from_corners(double(s0.robot.x), double(s0.robot.y),
                                           double(s1.robot.x), double(s1.robot.y))
                            .inflated(half);
  for (size_t o = 0; o < scene.obstacles.size(); ++o) {
    c.check(aabb_disjoint(corridor, scene.obstacles[o].box()), k,
            "step " + std::to_string(k) + ": GoTo corridor clear of obstacle " +
                std::to_string(o + 1),
            "segment " + pose_str(s0.robot) + " -> " + pose_str(s1.robot) + " intersects it");
  }
  for (size_t j = 0; j < s0.objects.size(); ++j) {
    if (s0.objects[j].carried) continue;
    c.check(aabb_disjoint(corridor, object_box(s0.objects[j])), k,
            "step " + std::to_string(k) + ": GoTo corridor clear of object " + std::to_string(j + 1),
            "segment " + pose_str(s0.robot) + " -> " + pose_str(s1.robot) + " hits it");
  }
  c.check(same_flags(s0, s1), k, "step " + std::to_string(k) + ": GoTo keeps carry flags",
          "carry flags changed");
}

void check_push(Checker& c, int k, int door, const WorldState& s0, const WorldState& s1,
                const SceneDescription& scene) {
  const Door& d = scene.doors[size_t(door - 1)];
  auto xy = [](const Pose& p) { return Point{p.x, p.y}; };
  const bool forward = s0.robot == d.q1 && xy(s1.robot) == xy(d.q2);
  const bool backward = s0.robot == d.q2 && xy(s1.robot) == xy(d.q1);
  c.check(forward || backward, k,
          "step " + std::to_string(k) + ": Push " + std::to_string(door) + " starts at a door pose",
          "robot " + pose_str(s0.robot) + " -> " + pose_str(s1.robot) + " is not " +
              pose_str(d.q1) + " <-> " + pose_str(d.q2));
  c.check(same_flags(s0, s1), k, "step " + std::to_string(k) + ": Push keeps carry flags",
          "carry flags changed");
}

void check_pickup(Checker& c, int k, int j, const WorldState& s0, const WorldState& s1,
                  const SceneDescription& scene) {
  const std::string tag = "step " + std::to_string(k) + ": PickUp " + std::to_string(j);
  c.check(carried_count(s0) == 0, k, tag + " starts empty-handed", "already carrying an object");
  bool flags = true;
  for (size_t l = 0; l < s1.objects.size(); ++l)
    flags = flags && s1.objects[l].carried == (int(l) + 1 == j);
  c.check(flags, k, tag + " ends carrying exactly that object", "carry flags after step wrong");
  c.check(s0.robot == s1.robot, k, tag + " keeps the robot still", "robot moved");
  const MovableObject& b = s0.objects[size_t(j - 1)];
  const bool posed = s0.robot.alpha == 0 && s0.robot.y == b.y &&
                     2 * s0.robot.x == 2 * b.x - (b.l + scene.agent.l);
  c.check(posed, k, tag + " faces the object",
          "robot " + pose_str(s0.robot) + " not in front of object at (" + std::to_string(b.x) +
              ", " + std::to_string(b.y) + ")");
}

void check_leave(Checker& c, int k, int j, const WorldState& s0, const WorldState& s1,
                 const SceneDescription& scene) {
  const std::string tag = "step " + std::to_string(k) + ": Leave " + std::to_string(j);
  bool flags = true;
  for (size_t l = 0; l < s0.objects.size(); ++l)
    flags = flags && s0.objects[l].carried == (int(l) + 1 == j);
  c.check(flags, k, tag + " starts carrying exactly that object", "carry flags before step wrong");
  c.check(carried_count(s1) == 0, k, tag + " ends empty-handed", "still carrying after step");
  c.check(s0.robot == s1.robot, k, tag + " keeps the robot still", "robot moved");
  const MovableObject& b = s1.objects[size_t(j - 1)];
  const bool placed = s0.robot.alpha == 0 && b.y == s0.robot.y &&
                      2 * b.x == 2 * s0.robot.x + b.l + scene.agent.l;
  c.check(placed, k, tag + " places the object in front",
          "object at (" + std::to_string(b.x) + ", " + std::to_string(b.y) + ") for robot " +
              pose_str(s0.robot));
  const Rect box = object_box(b);
  for (size_t l = 0; l < s1.objects.size(); ++l) {
    if (int(l) + 1 == j || s0.objects[l].carried) continue;
    c.check(aabb_disjoint(box, object_box(s1.objects[l])), k,
            tag + " clear of object " + std::to_string(l + 1), "placement overlaps it");
  }
  for (size_t o = 0; o < scene.obstacles.size(); ++o)
    c.check(aabb_disjoint(box, scene.obstacles[o].box()), k,
            tag + " clear of obstacle " + std::to_string(o + 1), "placement overlaps it");
}

}  // namespace

ValidationReport validate_plan(const Plan& plan, const SceneDescription& scene,
                               const logic::Formula& goal) {
  ValidationReport report;
  Checker c(report);
  const int K = plan.K();

  if (plan.full_trace.K != K) {
    c.check(false, -1, "trace length matches plan", "trace K differs from step count");
    return report;
  }

  try {
    c.check(logic::eval(planning_formula(scene, goal), plan.full_trace, 0), -1,
            "trace satisfies goal and primitive spec", "evaluator returned false");
  } catch (const Error& e) {
    c.check(false, -1, "trace satisfies goal and primitive spec", e.what());
  }

  std::vector<WorldState> states;
  try {
    for (int k = 0; k <= K; ++k) states.push_back(state_at(plan, scene, k));
  } catch (const Error& e) {
    c.check(false, -1, "trace carries every state variable", e.what());
    return report;
  }

  const Rect region = scene.robot_region();
  for (int k = 0; k <= K; ++k) {
    const WorldState& s = states[size_t(k)];
    const int step = k == 0 ? 0 : k - 1;
    c.check(inside(region, double(s.robot.x), double(s.robot.y)), step,
            "instant " + std::to_string(k) + ": robot inside workspace",
            "robot at " + pose_str(s.robot));
    c.check(carried_count(s) <= 1, step,
            "instant " + std::to_string(k) + ": at most one object carried",
            std::to_string(carried_count(s)) + " objects carried");
  }
  c.check(states[0].robot == scene.robot_initial, 0, "instant 0: robot at initial pose",
          "robot at " + pose_str(states[0].robot));

  for (int k = 0; k < K; ++k) {
    const PlanStep& st = plan.steps[size_t(k)];
    const WorldState& s0 = states[size_t(k)];
    const WorldState& s1 = states[size_t(k + 1)];
    c.check(st.waypoint == s1.robot, k, "step " + std::to_string(k) + ": waypoint matches trace",
            "waypoint " + pose_str(st.waypoint) + " vs trace " + pose_str(s1.robot));
    int code = -1;
    try {
      code = st.primitive.code(scene);
    } catch (const Error& e) {
      c.check(false, k, "step " + std::to_string(k) + ": primitive exists", e.what());
      continue;
    }
    try {
      c.check(int_at(plan.full_trace, sym::kAct, k) == code, k,
              "step " + std::to_string(k) + ": primitive matches trace", "act differs");
    } catch (const Error& e) {
      c.check(false, k, "step " + std::to_string(k) + ": primitive matches trace", e.what());
    }
    if (st.primitive.kind != PrimitiveKind::Leave)
      c.check(objects_unchanged_except(s0, s1, 0), k,
              "step " + std::to_string(k) + ": objects stay put", "an object moved");
    else
      c.check(objects_unchanged_except(s0, s1, st.primitive.index), k,
              "step " + std::to_string(k) + ": other objects stay put", "an object moved");

    switch (st.primitive.kind) {
      case PrimitiveKind::GoTo: check_goto(c, k, s0, s1, scene); break;
      case PrimitiveKind::Push: check_push(c, k, st.primitive.index, s0, s1, scene); break;
      case PrimitiveKind::PickUp: check_pickup(c, k, st.primitive.index, s0, s1, scene); break;
      case PrimitiveKind::Leave: check_leave(c, k, st.primitive.index, s0, s1, scene); break;
    }
  }
  return report;
}

Plan plan_from_steps(const SceneDescription& scene, const std::vector<PlanStep>& steps) {
  Plan plan;
  plan.steps = steps;
  logic::Trace& rho = plan.full_trace;
  rho.K = int(steps.size());
  const int n = int(scene.objects.size());

  Pose robot = scene.robot_initial;
  std::vector<MovableObject> objs = scene.objects;
  auto record = [&] {
    rho.int_vars[sym::kRobotX].push_back(robot.x);
    rho.int_vars[sym::kRobotY].push_back(robot.y);
    rho.int_vars[sym::kRobotAlpha].push_back(robot.alpha);
    for (int j = 1; j <= n; ++j) {
      const MovableObject& b = objs[size_t(j - 1)];
      rho.int_vars[sym::obj_x(j)].push_back(b.x);
      rho.int_vars[sym::obj_y(j)].push_back(b.y);
      rho.bool_vars[sym::obj_p(j)].push_back(b.carried);
    }
  };
  record();
  for (const PlanStep& st : steps) {
    rho.int_vars[sym::kAct].push_back(st.primitive.code(scene));
    switch (st.primitive.kind) {
      case PrimitiveKind::GoTo:
      case PrimitiveKind::Push:
        robot = st.waypoint;
        break;
      case PrimitiveKind::PickUp:
        for (MovableObject& b : objs) b.carried = false;
        objs[size_t(st.primitive.index - 1)].carried = true;
        break;
      case PrimitiveKind::Leave: {
        MovableObject& b = objs[size_t(st.primitive.index - 1)];
        b.carried = false;
        b.x = robot.x + (b.l + scene.agent.l) / 2;
        b.y = robot.y;
        break;
      }
    }
    record();
  }
  // The selector at the final instant selects nothing; GoTo is the neutral
  // code.
  rho.int_vars[sym::kAct].push_back(0);
  return plan;
}

PlanRequest plan_to_receding_horizon(const Plan& plan, const WorldState& current,
                                     const SceneDescription& scene_update,
                                     const logic::Formula& goal,
                                     std::chrono::milliseconds timeout) {
  PlanRequest req;
  req.scene = scene_update;
  req.scene.robot_initial = current.robot;
  if (current.objects.size() != scene_update.objects.size())
    throw ValidationError("current state has " + std::to_string(current.objects.size()) +
                          " objects, scene has " + std::to_string(scene_update.objects.size()));
  req.scene.objects = current.objects;
  validate(req.scene);
  req.goal = goal;
  req.k_min = 1;
  req.k_max = std::max(1, plan.K());
  req.timeout = timeout;
  return req;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

std::string plan_to_json(const Plan& plan) {
  using nlohmann::json;
  json steps = json::array();
  for (int k = 0; k < plan.K(); ++k) {
    const PlanStep& st = plan.steps[size_t(k)];
    json s;
    s["k"] = k + 1;
    s["primitive"] = primitives::to_string(st.primitive.kind);
    s["arg"] = st.primitive.kind == PrimitiveKind::GoTo ? json(nullptr) : json(st.primitive.index);
    s["waypoint"] = {{"x", st.waypoint.x}, {"y", st.waypoint.y}, {"alpha", st.waypoint.alpha}};
    steps.push_back(std::move(s));
  }
  json trace;
  trace["K"] = plan.full_trace.K;
  trace["int_vars"] = plan.full_trace.int_vars;
  json bools = json::object();
  for (const auto& [name, values] : plan.full_trace.bool_vars)
    bools[name] = std::vector<bool>(values.begin(), values.end());
  trace["bool_vars"] = bools;
  json out;
  out["K"] = plan.K();
  out["steps"] = std::move(steps);
  out["trace"] = std::move(trace);
  return out.dump(2) + "\n";
}

Plan plan_from_json(std::string_view text, const SceneDescription& scene) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("plan: ") + e.what());
  }
  const json* steps_json = nullptr;
  if (doc.is_array()) {
    steps_json = &doc;
  } else if (doc.is_object() && doc.contains("steps") && doc["steps"].is_array()) {
    steps_json = &doc["steps"];
  } else {
    throw ParseError("plan: expected an array of steps or an object with 'steps'");
  }

  auto integer = [](const json& j, const char* key, const std::string& where) -> int64_t {
    if (!j.contains(key) || !j[key].is_number_integer())
      throw ParseError("plan: " + where + ": '" + key + "' must be an integer");
    return j[key].get<int64_t>();
  };

  std::vector<PlanStep> steps;
  for (size_t i = 0; i < steps_json->size(); ++i) {
    const json& s = (*steps_json)[i];
    const std::string where = "step " + std::to_string(i + 1);
    if (!s.is_object()) throw ParseError("plan: " + where + " is not an object");
    if (integer(s, "k", where) != int64_t(i + 1))
      throw ParseError("plan: " + where + ": steps must be numbered 1..K in order");
    if (!s.contains("primitive") || !s["primitive"].is_string())
      throw ParseError("plan: " + where + ": 'primitive' must be a string");
    PlanStep st;
    st.primitive.kind = primitives::kind_from_string(s["primitive"].get<std::string>());
    if (st.primitive.kind == PrimitiveKind::GoTo) {
      if (s.contains("arg") && !s["arg"].is_null())
        throw ParseError("plan: " + where + ": GoTo takes no argument");
    } else {
      st.primitive.index = int(integer(s, "arg", where));
      try {
        st.primitive.code(scene);
      } catch (const ValidationError& e) {
        throw ParseError("plan: " + where + ": " + e.what());
      }
    }
    if (!s.contains("waypoint") || !s["waypoint"].is_object())
      throw ParseError("plan: " + where + ": 'waypoint' must be an object");
    const json& w = s["waypoint"];
    st.waypoint = {integer(w, "x", where), integer(w, "y", where), integer(w, "alpha", where)};
    steps.push_back(st);
  }

  if (doc.is_object() && doc.contains("trace")) {
    Plan plan;
    plan.steps = std::move(steps);
    try {
      const json& t = doc["trace"];
      plan.full_trace.K = t.at("K").get<int>();
      plan.full_trace.int_vars = t.at("int_vars").get<std::map<std::string, std::vector<int64_t>>>();
      for (const auto& [name, values] : t.at("bool_vars").items())
        plan.full_trace.bool_vars[name] = values.get<std::vector<bool>>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("plan: malformed trace: ") + e.what());
    }
    return plan;
  }
  return plan_from_steps(scene, steps);
}

}  // namespace cosmop::planner
