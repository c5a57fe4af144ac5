#include "cosmop/primitives.hpp"

#include <cmath>
#include <optional>

#include "cosmop/error.hpp"

namespace cosmop::primitives {

using namespace logic;

const char* to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::GoTo: return "GoTo";
    case PrimitiveKind::Push: return "Push";
    case PrimitiveKind::PickUp: return "PickUp";
    case PrimitiveKind::Leave: return "Leave";
  }
  return "?";
}

PrimitiveKind kind_from_string(const std::string& name) {
  if (name == "GoTo") return PrimitiveKind::GoTo;
  if (name == "Push") return PrimitiveKind::Push;
  if (name == "PickUp") return PrimitiveKind::PickUp;
  if (name == "Leave") return PrimitiveKind::Leave;
  throw ParseError("unknown primitive '" + name + "'");
}

int primitive_count(const SceneDescription& scene) {
  return 1 + int(scene.doors.size()) + 2 * int(scene.objects.size());
}

int PrimitiveId::code(const SceneDescription& scene) const {
  const int doors = int(scene.doors.size());
  const int objects = int(scene.objects.size());
  auto check = [&](int limit) {
    if (index < 1 || index > limit)
      throw ValidationError(std::string(to_string(kind)) + " index " + std::to_string(index) +
                            " out of range");
  };
  switch (kind) {
    case PrimitiveKind::GoTo: return 0;
    case PrimitiveKind::Push: check(doors); return index;
    case PrimitiveKind::PickUp: check(objects); return doors + index;
    case PrimitiveKind::Leave: check(objects); return doors + objects + index;
  }
  return 0;
}

PrimitiveId PrimitiveId::from_code(int code, const SceneDescription& scene) {
  const int doors = int(scene.doors.size());
  const int objects = int(scene.objects.size());
  if (code == 0) return {PrimitiveKind::GoTo, 0};
  if (code >= 1 && code <= doors) return {PrimitiveKind::Push, code};
  if (code > doors && code <= doors + objects) return {PrimitiveKind::PickUp, code - doors};
  if (code > doors + objects && code <= doors + 2 * objects)
    return {PrimitiveKind::Leave, code - doors - objects};
  throw ValidationError("primitive code " + std::to_string(code) + " out of range");
}

namespace sym {
std::string obj_x(int j) { return "obj[" + std::to_string(j) + "].x"; }
std::string obj_y(int j) { return "obj[" + std::to_string(j) + "].y"; }
std::string obj_p(int j) { return "obj[" + std::to_string(j) + "].p"; }
}  // namespace sym

namespace {

Term rx() { return var(sym::kRobotX); }
Term ry() { return var(sym::kRobotY); }
Term ra() { return var(sym::kRobotAlpha); }
Term act() { return var(sym::kAct); }

// lhs op (rhs + num/2), kept in integers by doubling both sides when num is
// odd.
Formula rel_half(Term lhs, RelOp op, std::optional<Term> rhs, int64_t num) {
  if (num % 2 == 0) {
    const int64_t c = num / 2;
    Term r = rhs ? (c == 0 ? *rhs : *rhs + c) : constant(c);
    return rel(std::move(lhs), op, std::move(r));
  }
  Term r = rhs ? scale(2, *rhs) + num : constant(num);
  return rel(scale(2, std::move(lhs)), op, std::move(r));
}

Formula iff(const Formula& a, const Formula& b) { return implies(a, b) && implies(b, a); }

Formula is_act(int code) { return eq(act(), constant(code)); }

Formula when_act(int code, Formula body) { return every_step(implies(is_act(code), std::move(body))); }

int64_t lo(int64_t a, int64_t b) { return std::min(a, b); }
int64_t hi(int64_t a, int64_t b) { return std::max(a, b); }

// Carry flags unchanged across the step.
Formula p_static(const SceneDescription& scene) {
  std::vector<Formula> parts;
  for (int l = 1; l <= int(scene.objects.size()); ++l)
    parts.push_back(iff(next(atom(sym::obj_p(l))), atom(sym::obj_p(l))));
  return land(std::move(parts));
}

Formula r_static() {
  return land({eq(rx(), next(rx())), eq(ry(), next(ry())), eq(ra(), next(ra()))});
}

Formula pose_is(const Pose& q) {
  return land({eq(rx(), constant(q.x)), eq(ry(), constant(q.y)), eq(ra(), constant(q.alpha))});
}

Formula next_xy_is(const Pose& q) {
  return land({eq(next(rx()), constant(q.x)), eq(next(ry()), constant(q.y))});
}

}  // namespace

Formula every_step(Formula body) { return always(implies(next(truth(true)), std::move(body))); }

Formula goto_clearance(const Rect& box, int64_t twice_margin) {
  const auto xmin = int64_t(std::llround(box.xmin * 2));
  const auto xmax = int64_t(std::llround(box.xmax * 2));
  const auto ymin = int64_t(std::llround(box.ymin * 2));
  const auto ymax = int64_t(std::llround(box.ymax * 2));
  // Bounds arrive doubled so half-millimetre boxes stay exact; the margin
  // folds into the same numerator.
  auto bound = [](Term lhs, RelOp op, int64_t doubled) {
    return rel_half(std::move(lhs), op, std::nullopt, doubled);
  };
  return lor({
      bound(max(next(rx()), rx()), RelOp::Le, xmin - twice_margin),
      bound(min(next(rx()), rx()), RelOp::Ge, xmax + twice_margin),
      bound(max(next(ry()), ry()), RelOp::Le, ymin - twice_margin),
      bound(min(next(ry()), ry()), RelOp::Ge, ymax + twice_margin),
  });
}

Formula build_goto(const SceneDescription& scene) {
  const int goto_code = 0;
  const int64_t al = scene.agent.l;
  const Workspace& w = scene.workspace;
  std::vector<Formula> parts;

  parts.push_back(when_act(
      goto_code,
      land({p_static(scene),
            rel_half(next(rx()), RelOp::Ge, std::nullopt, 2 * w.x - w.l + al),
            rel_half(next(rx()), RelOp::Le, std::nullopt, 2 * w.x + w.l - al),
            rel_half(next(ry()), RelOp::Ge, std::nullopt, 2 * w.y - w.l + al),
            rel_half(next(ry()), RelOp::Le, std::nullopt, 2 * w.y + w.l - al)})));

  for (const Obstacle& o : scene.obstacles) {
    const Rect box = o.box();
    parts.push_back(when_act(goto_code, goto_clearance(box, al)));
  }

  for (int j = 1; j <= int(scene.objects.size()); ++j) {
    const int64_t twice_lj = scene.objects[size_t(j - 1)].l + al;
    Term bx = var(sym::obj_x(j));
    Term by = var(sym::obj_y(j));
    Formula avoid = lor({
        rel_half(max(next(rx()), rx()), RelOp::Le, bx, -twice_lj),
        rel_half(min(next(rx()), rx()), RelOp::Ge, bx, twice_lj),
        rel_half(max(next(ry()), ry()), RelOp::Le, by, -twice_lj),
        rel_half(min(next(ry()), ry()), RelOp::Ge, by, twice_lj),
    });
    parts.push_back(
        every_step(implies(is_act(goto_code) && !atom(sym::obj_p(j)), std::move(avoid))));
  }
  return land(std::move(parts));
}

Formula build_push(const SceneDescription& scene) {
  std::vector<Formula> parts;
  for (int j = 1; j <= int(scene.doors.size()); ++j) {
    const Door& d = scene.doors[size_t(j - 1)];
    Formula push = (pose_is(d.q1) && next_xy_is(d.q2)) || (pose_is(d.q2) && next_xy_is(d.q1));
    const int code = PrimitiveId{PrimitiveKind::Push, j}.code(scene);
    parts.push_back(when_act(code, land({p_static(scene), std::move(push)})));
  }
  return land(std::move(parts));
}

Formula build_pickup(const SceneDescription& scene) {
  const int n = int(scene.objects.size());
  std::vector<Formula> parts;
  for (int j = 1; j <= n; ++j) {
    std::vector<Formula> body;
    for (int l = 1; l <= n; ++l) {
      body.push_back(!atom(sym::obj_p(l)));
      body.push_back(l == j ? next(atom(sym::obj_p(l))) : !next(atom(sym::obj_p(l))));
    }
    body.push_back(r_static());
    const int64_t twice_lj = scene.objects[size_t(j - 1)].l + scene.agent.l;
    body.push_back(eq(ra(), constant(0)));
    body.push_back(eq(ry(), var(sym::obj_y(j))));
    body.push_back(rel_half(rx(), RelOp::Eq, var(sym::obj_x(j)), -twice_lj));
    const int code = PrimitiveId{PrimitiveKind::PickUp, j}.code(scene);
    parts.push_back(when_act(code, land(std::move(body))));
  }
  return land(std::move(parts));
}

Formula build_leave(const SceneDescription& scene) {
  const int n = int(scene.objects.size());
  std::vector<Formula> parts;
  for (int j = 1; j <= n; ++j) {
    const MovableObject& bj = scene.objects[size_t(j - 1)];
    const int code = PrimitiveId{PrimitiveKind::Leave, j}.code(scene);
    Term nbx = next(var(sym::obj_x(j)));
    Term nby = next(var(sym::obj_y(j)));

    std::vector<Formula> body;
    for (int l = 1; l <= n; ++l) {
      body.push_back(l == j ? atom(sym::obj_p(l)) : !atom(sym::obj_p(l)));
      body.push_back(!next(atom(sym::obj_p(l))));
    }
    body.push_back(r_static());
    body.push_back(eq(ra(), constant(0)));
    body.push_back(eq(nby, ry()));
    body.push_back(rel_half(nbx, RelOp::Eq, rx(), bj.l + scene.agent.l));
    parts.push_back(when_act(code, land(std::move(body))));

    // No placement over other resting objects.
    for (int l = 1; l <= n; ++l) {
      if (l == j) continue;
      const int64_t twice_lb = bj.l + scene.objects[size_t(l - 1)].l;
      Term nlx = next(var(sym::obj_x(l)));
      Term nly = next(var(sym::obj_y(l)));
      Formula apart = lor({
          rel_half(nby, RelOp::Le, nly, -twice_lb),
          rel_half(nby, RelOp::Ge, nly, twice_lb),
          rel_half(nbx, RelOp::Le, nlx, -twice_lb),
          rel_half(nbx, RelOp::Ge, nlx, twice_lb),
      });
      parts.push_back(every_step(implies(is_act(code) && !atom(sym::obj_p(l)), std::move(apart))));
    }

    // Nor over obstacles; x is compared with the x extent and y with the y
    // extent.
    for (const Obstacle& o : scene.obstacles) {
      Formula apart = lor({
          rel_half(nbx, RelOp::Le, std::nullopt, 2 * lo(o.p_i.x, o.p_f.x) - bj.l),
          rel_half(nbx, RelOp::Ge, std::nullopt, 2 * hi(o.p_i.x, o.p_f.x) + bj.l),
          rel_half(nby, RelOp::Le, std::nullopt, 2 * lo(o.p_i.y, o.p_f.y) - bj.l),
          rel_half(nby, RelOp::Ge, std::nullopt, 2 * hi(o.p_i.y, o.p_f.y) + bj.l),
      });
      parts.push_back(when_act(code, std::move(apart)));
    }
  }
  return land(std::move(parts));
}

Formula build_carry(const SceneDescription& scene) {
  std::vector<Formula> parts;
  for (int j = 1; j <= int(scene.objects.size()); ++j) {
    const int code = PrimitiveId{PrimitiveKind::Leave, j}.code(scene);
    Term bx = var(sym::obj_x(j));
    Term by = var(sym::obj_y(j));
    parts.push_back(every_step(
        implies(ne(act(), constant(code)), eq(next(bx), bx) && eq(next(by), by))));
  }
  return land(std::move(parts));
}

Formula build_initial(const SceneDescription& scene) {
  std::vector<Formula> parts{pose_is(scene.robot_initial)};
  for (int j = 1; j <= int(scene.objects.size()); ++j) {
    const MovableObject& b = scene.objects[size_t(j - 1)];
    parts.push_back(eq(var(sym::obj_x(j)), constant(b.x)));
    parts.push_back(eq(var(sym::obj_y(j)), constant(b.y)));
    parts.push_back(b.carried ? atom(sym::obj_p(j)) : !atom(sym::obj_p(j)));
  }
  return land(std::move(parts));
}

Formula build_domain(const SceneDescription& scene) {
  return always(land({ge(act(), constant(0)), le(act(), constant(primitive_count(scene) - 1)),
                      ge(ra(), constant(0)), lt(ra(), constant(360))}));
}

Formula build_primitive_spec(const SceneDescription& scene) {
  return land({build_initial(scene), build_domain(scene), build_goto(scene), build_push(scene),
               build_pickup(scene), build_leave(scene), build_carry(scene)});
}

}  // namespace cosmop::primitives
