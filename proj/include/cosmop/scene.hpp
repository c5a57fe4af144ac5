#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cosmop {

// Planar pose: millimetres and integer degrees in [0, 360).
struct Pose {
  int64_t x = 0;
  int64_t y = 0;
  int64_t alpha = 0;

  friend bool operator==(const Pose&, const Pose&) = default;
};

struct Point {
  int64_t x = 0;
  int64_t y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Closed axis-aligned box. Half-millimetre bounds occur when odd side lengths
// are inflated, so the bounds are doubles (exact for these values).
struct Rect {
  double xmin = 0;
  double xmax = 0;
  double ymin = 0;
  double ymax = 0;

  static Rect from_corners(double x0, double y0, double x1, double y1);
  static Rect centered(double cx, double cy, double side);
  Rect inflated(double margin) const;

  friend bool operator==(const Rect&, const Rect&) = default;
};

// True iff the closed boxes are separated along at least one axis. Touching
// boundaries count as separated.
bool aabb_disjoint(const Rect& a, const Rect& b);

// Axis-parallel rectangle given by two diagonal vertices. May be degenerate
// (a wall segment).
struct Obstacle {
  Point p_i;
  Point p_f;

  Rect box() const;
  friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

// The two robot poses on either side of a door; pushing moves the robot from
// one to the other.
struct Door {
  Pose q1;
  Pose q2;

  friend bool operator==(const Door&, const Door&) = default;
};

struct Agent {
  int64_t l = 0;

  friend bool operator==(const Agent&, const Agent&) = default;
};

struct MovableObject {
  int64_t l = 0;
  int64_t x = 0;
  int64_t y = 0;
  bool carried = false;

  friend bool operator==(const MovableObject&, const MovableObject&) = default;
};

// Square workspace centred at (x, y) with side l.
struct Workspace {
  int64_t x = 0;
  int64_t y = 0;
  int64_t l = 0;

  Rect box() const { return Rect::centered(double(x), double(y), double(l)); }
  friend bool operator==(const Workspace&, const Workspace&) = default;
};

struct SceneDescription {
  std::vector<Obstacle> obstacles;
  std::vector<Door> doors;
  Agent agent;
  std::vector<MovableObject> objects;
  Workspace workspace;
  Pose robot_initial;

  // Region the robot centre may occupy: the workspace shrunk by half the
  // agent side.
  Rect robot_region() const { return workspace.box().inflated(-0.5 * double(agent.l)); }

  friend bool operator==(const SceneDescription&, const SceneDescription&) = default;
};

// Checks every scene invariant; throws ValidationError naming the first one
// violated.
void validate(const SceneDescription& scene);

// Parses the JSON scene format and validates the result.
SceneDescription load_scene(std::string_view source);
SceneDescription load_scene_file(const std::string& path);

std::string serialize_scene(const SceneDescription& scene);

}  // namespace cosmop
