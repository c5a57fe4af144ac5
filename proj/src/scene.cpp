#include "cosmop/scene.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cosmop/error.hpp"
#include "io_util.hpp"

namespace cosmop {

using nlohmann::json;

Rect Rect::from_corners(double x0, double y0, double x1, double y1) {
  return Rect{std::min(x0, x1), std::max(x0, x1), std::min(y0, y1), std::max(y0, y1)};
}

Rect Rect::centered(double cx, double cy, double side) {
  return Rect{cx - side / 2, cx + side / 2, cy - side / 2, cy + side / 2};
}

Rect Rect::inflated(double margin) const {
  return Rect{xmin - margin, xmax + margin, ymin - margin, ymax + margin};
}

bool aabb_disjoint(const Rect& a, const Rect& b) {
  return a.xmax <= b.xmin || b.xmax <= a.xmin || a.ymax <= b.ymin || b.ymax <= a.ymin;
}

Rect Obstacle::box() const {
  return Rect::from_corners(double(p_i.x), double(p_i.y), double(p_f.x), double(p_f.y));
}

namespace {

bool contains(const Rect& r, double x, double y) {
  return r.xmin <= x && x <= r.xmax && r.ymin <= y && y <= r.ymax;
}

std::string pose_str(const Pose& q) {
  std::ostringstream os;
  os << "(" << q.x << ", " << q.y << ", " << q.alpha << ")";
  return os.str();
}

void check_angle(int64_t alpha, const std::string& where) {
  if (alpha < 0 || alpha >= 360)
    throw ValidationError(where + ": angle " + std::to_string(alpha) + " outside [0, 360)");
}

int64_t get_int(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(where + ": missing key '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_integer())
    throw ParseError(where + "." + key + ": expected an integer");
  return v.get<int64_t>();
}

const json& get_array(const json& j, const char* key) {
  static const json empty = json::array();
  if (!j.contains(key)) return empty;
  const json& v = j.at(key);
  if (!v.is_array()) throw ParseError(std::string(key) + ": expected an array");
  return v;
}

Pose get_pose(const json& j, const std::string& where) {
  return Pose{get_int(j, "x", where), get_int(j, "y", where), get_int(j, "alpha", where)};
}

json pose_json(const Pose& q) { return json{{"x", q.x}, {"y", q.y}, {"alpha", q.alpha}}; }

}  // namespace

void validate(const SceneDescription& scene) {
  if (scene.agent.l <= 0) throw ValidationError("agent.l must be > 0");
  if (scene.workspace.l <= 2 * scene.agent.l)
    throw ValidationError("workspace.l must exceed 2 * agent.l");

  const Rect ws = scene.workspace.box();
  const Rect robot_region = scene.robot_region();

  check_angle(scene.robot_initial.alpha, "robot");
  if (!contains(robot_region, double(scene.robot_initial.x), double(scene.robot_initial.y)))
    throw ValidationError("robot initial pose " + pose_str(scene.robot_initial) +
                          " violates workspace containment");

  for (size_t j = 0; j < scene.doors.size(); ++j) {
    const Door& d = scene.doors[j];
    const std::string where = "door " + std::to_string(j + 1);
    if (d.q1 == d.q2) throw ValidationError(where + ": q1 and q2 are the same pose");
    check_angle(d.q1.alpha, where + ".q1");
    check_angle(d.q2.alpha, where + ".q2");
    for (const Pose* q : {&d.q1, &d.q2}) {
      if (!contains(robot_region, double(q->x), double(q->y)))
        throw ValidationError(where + ": pose " + pose_str(*q) + " outside the workspace");
    }
  }

  for (size_t j = 0; j < scene.objects.size(); ++j) {
    const MovableObject& b = scene.objects[j];
    const std::string where = "object " + std::to_string(j + 1);
    if (b.l <= 0) throw ValidationError(where + ": l must be > 0");
    if (!contains(ws, double(b.x), double(b.y)))
      throw ValidationError(where + ": initial position outside the workspace");
    if (b.carried) continue;
    const Rect box = Rect::centered(double(b.x), double(b.y), double(b.l));
    for (size_t o = 0; o < scene.obstacles.size(); ++o) {
      if (!aabb_disjoint(box, scene.obstacles[o].box()))
        throw ValidationError(where + ": overlaps obstacle " + std::to_string(o + 1));
    }
  }

  if (std::count_if(scene.objects.begin(), scene.objects.end(),
                    [](const MovableObject& b) { return b.carried; }) > 1)
    throw ValidationError("at most one object may be carried");
}

SceneDescription load_scene(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scene: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scene: top level must be an object");

  SceneDescription scene;
  if (!doc.contains("workspace")) throw ParseError("scene: missing 'workspace'");
  const json& w = doc.at("workspace");
  scene.workspace = Workspace{get_int(w, "x", "workspace"), get_int(w, "y", "workspace"),
                              get_int(w, "l", "workspace")};
  if (!doc.contains("agent")) throw ParseError("scene: missing 'agent'");
  scene.agent.l = get_int(doc.at("agent"), "l", "agent");
  if (!doc.contains("robot")) throw ParseError("scene: missing 'robot'");
  scene.robot_initial = get_pose(doc.at("robot"), "robot");

  for (const json& o : get_array(doc, "obstacles")) {
    scene.obstacles.push_back(Obstacle{{get_int(o, "xi", "obstacle"), get_int(o, "yi", "obstacle")},
                                       {get_int(o, "xf", "obstacle"), get_int(o, "yf", "obstacle")}});
  }
  for (const json& d : get_array(doc, "doors")) {
    if (!d.is_object() || !d.contains("q1") || !d.contains("q2"))
      throw ParseError("door: expected keys 'q1' and 'q2'");
    scene.doors.push_back(Door{get_pose(d.at("q1"), "door.q1"), get_pose(d.at("q2"), "door.q2")});
  }
  for (const json& b : get_array(doc, "objects")) {
    MovableObject obj{get_int(b, "l", "object"), get_int(b, "x", "object"), get_int(b, "y", "object"),
                      false};
    if (b.contains("carried")) {
      if (!b.at("carried").is_boolean()) throw ParseError("object.carried: expected a boolean");
      obj.carried = b.at("carried").get<bool>();
    }
    scene.objects.push_back(obj);
  }

  validate(scene);
  return scene;
}

SceneDescription load_scene_file(const std::string& path) {
  return load_scene(detail::read_file(path));
}

std::string serialize_scene(const SceneDescription& scene) {
  json doc;
  doc["workspace"] = {{"x", scene.workspace.x}, {"y", scene.workspace.y}, {"l", scene.workspace.l}};
  doc["agent"] = {{"l", scene.agent.l}};
  doc["robot"] = pose_json(scene.robot_initial);
  doc["obstacles"] = json::array();
  for (const Obstacle& o : scene.obstacles)
    doc["obstacles"].push_back({{"xi", o.p_i.x}, {"yi", o.p_i.y}, {"xf", o.p_f.x}, {"yf", o.p_f.y}});
  doc["doors"] = json::array();
  for (const Door& d : scene.doors)
    doc["doors"].push_back({{"q1", pose_json(d.q1)}, {"q2", pose_json(d.q2)}});
  doc["objects"] = json::array();
  for (const MovableObject& b : scene.objects)
    doc["objects"].push_back({{"l", b.l}, {"x", b.x}, {"y", b.y}, {"carried", b.carried}});
  return doc.dump(2);
}

}  // namespace cosmop
