#pragma once

#include <string>

#include "cosmop/logic.hpp"
#include "cosmop/scene.hpp"

namespace cosmop::primitives {

enum class PrimitiveKind { GoTo, Push, PickUp, Leave };

const char* to_string(PrimitiveKind kind);
PrimitiveKind kind_from_string(const std::string& name);  // throws ParseError

// A motion primitive together with its door/object argument (1-based; 0 for
// GoTo). Dense codes: 0 = GoTo, 1..|D| = Push_j, then |B| PickUp_j codes,
// then |B| Leave_j codes.
struct PrimitiveId {
  PrimitiveKind kind = PrimitiveKind::GoTo;
  int index = 0;

  int code(const SceneDescription& scene) const;
  static PrimitiveId from_code(int code, const SceneDescription& scene);

  friend bool operator==(const PrimitiveId&, const PrimitiveId&) = default;
};

int primitive_count(const SceneDescription& scene);

// Shared state-variable naming.
namespace sym {
inline const std::string kRobotX = "robot.x";
inline const std::string kRobotY = "robot.y";
inline const std::string kRobotAlpha = "robot.alpha";
inline const std::string kAct = "act";
std::string obj_x(int j);
std::string obj_y(int j);
std::string obj_p(int j);
}  // namespace sym

// `G(X true -> body)`: body must hold at every instant that has a successor,
// i.e. for every step k -> k+1 with k in [0, K-1].
logic::Formula every_step(logic::Formula body);

// The four-way separation between the robot's swept box for one step and a
// closed box, inflated by `twice_margin / 2`.
logic::Formula goto_clearance(const Rect& box, int64_t twice_margin);

logic::Formula build_goto(const SceneDescription& scene);
logic::Formula build_push(const SceneDescription& scene);
logic::Formula build_pickup(const SceneDescription& scene);
logic::Formula build_leave(const SceneDescription& scene);
logic::Formula build_carry(const SceneDescription& scene);
logic::Formula build_initial(const SceneDescription& scene);
// act ranges over valid codes; headings stay in [0, 360).
logic::Formula build_domain(const SceneDescription& scene);

// Conjunction of every builder above.
logic::Formula build_primitive_spec(const SceneDescription& scene);

}  // namespace cosmop::primitives
