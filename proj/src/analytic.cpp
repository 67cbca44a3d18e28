#include "corridor/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "corridor/kernels.hpp"

namespace corridor {

namespace {

std::string index_text(const char* what, int j) {
  std::ostringstream s;
  s << what << " " << j;
  return s.str();
}

std::string pair_text(int a, int b) {
  std::ostringstream s;
  s << "circles " << a << " and " << b << " rotate oppositely but are closer than two turning radii";
  return s.str();
}

Vec2 heading_vec(double theta) { return unit_from_angle(theta); }

}  // namespace

NarrowTransition::NarrowTransition(int j)
    : PlanningError("circles", index_text("no turning disk fits in corridor transition", j)), index(j) {}
TangentInfeasible::TangentInfeasible(int a_, int b_) : PlanningError("tangent", pair_text(a_, b_)), a(a_), b(b_) {}

const char* to_string(PrimKind k) {
  switch (k) {
    case PrimKind::T: return "T";
    case PrimKind::C: return "C";
    case PrimKind::S: return "S";
  }
  return "?";
}

Pose Primitive::state_at(double t, const Limits& lim) const {
  t = std::clamp(t, 0.0, duration);
  switch (kind) {
    case PrimKind::T:
      return {start.x, start.y, start.theta + sign * lim.omega_max * t};
    case PrimKind::S: {
      const double d = lim.v_max * t;
      return {start.x + d * std::cos(start.theta), start.y + d * std::sin(start.theta), start.theta};
    }
    case PrimKind::C: {
      const double th = start.theta + sign * lim.omega_max * t;
      const Vec2 p = center - left_normal(heading_vec(th)) * (sign * lim.rho());
      return {p.x, p.y, th};
    }
  }
  return start;
}

Tangent circle_tangent(Vec2 ca, int sa, Vec2 cb, int sb, double r) {
  Tangent tg;
  const Vec2 D = cb - ca;
  const double d = norm(D);
  if (sa == sb) {
    if (d < 1e-12) {
      tg.ok = false;
      return tg;
    }
    tg.dir = D / d;
  } else {
    if (d < 2.0 * r) {
      tg.ok = false;
      return tg;
    }
    const double L = std::sqrt(std::max(0.0, d * d - 4.0 * r * r));
    tg.dir = heading_vec(angle_of(D) - std::atan2((sb - sa) * r, L));
  }
  tg.from = ca - left_normal(tg.dir) * (sa * r);
  tg.to = cb - left_normal(tg.dir) * (sb * r);
  tg.length = std::max(0.0, dot(tg.to - tg.from, tg.dir));
  return tg;
}

Tangent point_to_circle(Vec2 p, Vec2 c, int s, double r) {
  Tangent tg;
  const Vec2 D = c - p;
  const double d = norm(D);
  if (d < r - 1e-12) {
    tg.ok = false;
    return tg;
  }
  const double L = std::sqrt(std::max(0.0, d * d - r * r));
  tg.dir = heading_vec(angle_of(D) - std::atan2(s * r, L));
  tg.from = p;
  tg.to = c - left_normal(tg.dir) * (s * r);
  tg.length = L;
  return tg;
}

Tangent circle_to_point(Vec2 c, int s, Vec2 g, double r) {
  Tangent tg;
  const Vec2 D = g - c;
  const double d = norm(D);
  if (d < r - 1e-12) {
    tg.ok = false;
    return tg;
  }
  const double L = std::sqrt(std::max(0.0, d * d - r * r));
  tg.dir = heading_vec(angle_of(D) + std::atan2(s * r, L));
  tg.from = c - left_normal(tg.dir) * (s * r);
  tg.to = g;
  tg.length = L;
  return tg;
}

bool disk_in_union(Vec2 center, double r, const std::vector<const Rectangle*>& rects) {
  const auto inside = [&](Vec2 p) {
    for (const Rectangle* rc : rects)
      if (rc->contains(p, 1e-9)) return true;
    return false;
  };
  if (!inside(center)) return false;
  for (int k = 0; k < 64; ++k)
    if (!inside(center + heading_vec(kTwoPi * k / 64.0) * r)) return false;
  return true;
}

namespace {

int sgn(double v) { return v < 0.0 ? -1 : 1; }

// Nearest admissible disk center to `guess`, searched on a 2 cm grid then refined.
std::optional<Vec2> fit_disk(Vec2 guess, double r, const std::vector<const Rectangle*>& rects) {
  if (disk_in_union(guess, r, rects)) return guess;
  constexpr double step = 0.02;
  constexpr int n = 60;  // 1.2 m reach
  static const std::vector<std::pair<int, int>> offsets = [] {
    std::vector<std::pair<int, int>> o;
    for (int i = -n; i <= n; ++i)
      for (int j = -n; j <= n; ++j)
        if (i * i + j * j <= n * n) o.push_back({i, j});
    std::stable_sort(o.begin(), o.end(), [](auto a, auto b) {
      return a.first * a.first + a.second * a.second < b.first * b.first + b.second * b.second;
    });
    return o;
  }();
  for (auto [i, j] : offsets) {
    const Vec2 c = guess + Vec2{i * step, j * step};
    if (!disk_in_union(c, r, rects)) continue;
    // Refine toward the guess along the connecting line.
    Vec2 lo = c, hi = guess;
    for (int it = 0; it < 30; ++it) {
      const Vec2 mid = (lo + hi) * 0.5;
      if (disk_in_union(mid, r, rects)) lo = mid;
      else hi = mid;
    }
    return lo;
  }
  return std::nullopt;
}

Box box_intersection(const Rectangle& a, const Rectangle& b) {
  const Box ba = Box::of(a), bb = Box::of(b);
  return {std::max(ba.xmin, bb.xmin), std::max(ba.ymin, bb.ymin), std::min(ba.xmax, bb.xmax), std::min(ba.ymax, bb.ymax)};
}

// Coordinate of the box side facing axis direction n (a unit axis vector).
double side_of(const Box& b, Vec2 n) {
  if (n.x > 0.5) return b.xmax;
  if (n.x < -0.5) return b.xmin;
  if (n.y > 0.5) return b.ymax;
  return b.ymin;
}

bool is_x(Vec2 n) { return std::abs(n.x) > 0.5; }

}  // namespace

std::vector<Circle> place_circles(const std::vector<DirectedCorridor>& seq, const CorridorGraph& cg, Pose start,
                                  Pose goal, const Limits& lim, int* merged_count) {
  (void)start;
  std::vector<Circle> out;
  const double rho = lim.rho();
  const std::size_t n = seq.size();
  const auto rect = [&](std::size_t k) -> const Rectangle& { return cg.rects[static_cast<std::size_t>(seq[k].corridor_id)]; };
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const Vec2 dj = seq[j].direction, dk = seq[j + 1].direction;
    const double c = cross(dj, dk), dp = dot(dj, dk);
    int sigma;
    if (std::abs(c) > 1e-9) {
      sigma = sgn(c);
    } else if (dp < 0.0) {
      sigma = sgn(cross(dj, rect(j + 1).center - rect(j).center));
    } else {
      // Look ahead for the next change of direction.
      std::size_t q = j + 2;
      while (q < n && dot(seq[q].direction, dj) > 1.0 - 1e-9) ++q;
      if (q < n) {
        const double cq = cross(dj, seq[q].direction);
        sigma = std::abs(cq) > 1e-9 ? sgn(cq) : sgn(cross(dj, rect(q).center - rect(j).center));
      } else {
        sigma = sgn(cross(dj, goal.position() - rect(n - 2).center));
      }
    }
    const Rectangle& A = rect(j);
    const Rectangle& B = rect(j + 1);
    const Box I = box_intersection(A, B);
    if (I.xmin > I.xmax + 1e-9 || I.ymin > I.ymax + 1e-9) throw NarrowTransition(static_cast<int>(j));
    const Vec2 n1 = left_normal(dj) * static_cast<double>(sigma);
    const Vec2 mid{0.5 * (I.xmin + I.xmax), 0.5 * (I.ymin + I.ymax)};
    Vec2 center = mid;
    const auto set_axis = [&](Vec2 axis, double value) {
      if (is_x(axis)) center.x = value;
      else center.y = value;
    };
    if (std::abs(c) > 1e-9) {
      // Fillet at the inner corner of the turn.
      const Vec2 n2 = left_normal(dk) * static_cast<double>(sigma);
      set_axis(n1, side_of(I, n1) - rho * (is_x(n1) ? n1.x : n1.y));
      set_axis(n2, side_of(I, n2) - rho * (is_x(n2) ? n2.x : n2.y));
    } else if (dp < 0.0) {
      set_axis(dj, side_of(I, dj) - rho * (is_x(dj) ? dj.x : dj.y));
    } else {
      set_axis(n1, side_of(I, n1) - rho * (is_x(n1) ? n1.x : n1.y));
    }
    // Keep the center inside I, away from its sides where room allows.
    const auto clamp_axis = [&](double v, double lo, double hi) {
      if (hi - lo >= 2.0 * rho) return std::clamp(v, lo + rho, hi - rho);
      return 0.5 * (lo + hi);
    };
    center.x = clamp_axis(center.x, I.xmin, I.xmax);
    center.y = clamp_axis(center.y, I.ymin, I.ymax);
    const std::vector<const Rectangle*> pair_rects{&A, &B};
    const auto fitted = fit_disk(center, rho, pair_rects);
    if (!fitted) throw NarrowTransition(static_cast<int>(j));
    Circle circle;
    circle.center = *fitted;
    circle.sign = sigma;
    circle.pair = static_cast<int>(j);
    circle.corridors = {A.id, B.id};
    circle.merged_from = {static_cast<int>(j)};
    out.push_back(std::move(circle));
  }
  // Merge close circles that turn the same way.
  int merged = 0;
  for (std::size_t i = 0; i + 1 < out.size();) {
    Circle& a = out[i];
    const Circle& b = out[i + 1];
    if (a.sign != b.sign || distance(a.center, b.center) >= rho) {
      ++i;
      continue;
    }
    std::vector<int> corr = a.corridors;
    for (int k : b.corridors)
      if (std::find(corr.begin(), corr.end(), k) == corr.end()) corr.push_back(k);
    std::vector<const Rectangle*> rs;
    for (int k : corr) rs.push_back(&cg.rects[static_cast<std::size_t>(k)]);
    const auto fitted = fit_disk((a.center + b.center) * 0.5, rho, rs);
    if (!fitted) {
      ++i;
      continue;
    }
    a.center = *fitted;
    a.corridors = corr;
    a.merged_from.insert(a.merged_from.end(), b.merged_from.begin(), b.merged_from.end());
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(i + 1));
    ++merged;
  }
  if (merged_count) *merged_count = merged;
  return out;
}

namespace {

class Builder {
 public:
  Builder(const Limits& lim, Pose start) : lim_(lim), cur_(start) {}

  void rotate_to(double heading) {
    const double delta = wrap_pi(heading - cur_.theta);
    Primitive p;
    p.kind = PrimKind::T;
    p.sign = delta < 0.0 ? -1 : 1;
    p.duration = std::abs(delta) / lim_.omega_max;
    p.swept = delta;
    push(p);
  }
  void arc_to(int sign, double heading) {
    double amount = wrap_two_pi(sign * (heading - cur_.theta));
    if (amount > kTwoPi - 1e-12) amount = 0.0;
    Primitive p;
    p.kind = PrimKind::C;
    p.sign = sign;
    p.center = cur_.position() + left_normal(heading_vec(cur_.theta)) * (sign * lim_.rho());
    p.duration = amount / lim_.omega_max;
    p.swept = sign * amount;
    p.length = amount * lim_.rho();
    push(p);
  }
  void straight(double length) {
    Primitive p;
    p.kind = PrimKind::S;
    p.sign = 0;
    p.length = std::max(0.0, length);
    p.duration = p.length / lim_.v_max;
    push(p);
  }
  Pose current() const { return cur_; }
  std::vector<Primitive> take() { return std::move(prims_); }

 private:
  void push(Primitive p) {
    p.start = cur_;
    cur_ = p.end(lim_);
    prims_.push_back(p);
  }
  Limits lim_;
  Pose cur_;
  std::vector<Primitive> prims_;
};

bool strictly_cross(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  const Vec2 r = a1 - a0, s = b1 - b0;
  const double den = cross(r, s);
  if (std::abs(den) < 1e-15) return false;
  const double t = cross(b0 - a0, s) / den, u = cross(b0 - a0, r) / den;
  const double eps = 1e-9;
  return t > eps && t < 1.0 - eps && u > eps && u < 1.0 - eps;
}

}  // namespace

Trajectory assemble(const std::vector<Circle>& circles, Pose start, Pose goal, const Limits& lim, EndChoice sc,
                    EndChoice gc, bool free_goal_heading) {
  Trajectory traj;
  traj.start = start;
  traj.goal = goal;
  traj.circles = circles;
  const double r = lim.rho();
  if (free_goal_heading) gc = EndChoice::Rotate;
  struct Node {
    bool circle;
    Vec2 p;
    int sign;
  };
  std::vector<Node> nodes;
  const int s0 = sc == EndChoice::ArcCW ? -1 : 1;
  if (sc == EndChoice::Rotate) nodes.push_back({false, start.position(), 0});
  else nodes.push_back({true, start.position() + left_normal(heading_vec(start.theta)) * (s0 * r), s0});
  for (const Circle& c : circles) nodes.push_back({true, c.center, c.sign});
  const int sg = gc == EndChoice::ArcCW ? -1 : 1;
  if (gc == EndChoice::Rotate) nodes.push_back({false, goal.position(), 0});
  else nodes.push_back({true, goal.position() + left_normal(heading_vec(goal.theta)) * (sg * r), sg});

  std::vector<Tangent> tangents;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const Node& a = nodes[k];
    const Node& b = nodes[k + 1];
    Tangent t;
    if (a.circle && b.circle) {
      t = circle_tangent(a.p, a.sign, b.p, b.sign, r);
    } else if (a.circle) {
      t = circle_to_point(a.p, a.sign, b.p, r);
    } else if (b.circle) {
      t = point_to_circle(a.p, b.p, b.sign, r);
    } else {
      t.from = a.p;
      t.to = b.p;
      t.length = distance(a.p, b.p);
      t.dir = t.length > 1e-12 ? (b.p - a.p) / t.length : heading_vec(start.theta);
    }
    if (!t.ok) return Trajectory{};
    tangents.push_back(t);
  }

  Builder b(lim, start);
  // T1 C2 S3
  if (sc == EndChoice::Rotate) {
    b.rotate_to(angle_of(tangents[0].dir));
    b.arc_to(1, b.current().theta);
  } else {
    b.rotate_to(start.theta);
    b.arc_to(s0, angle_of(tangents[0].dir));
  }
  b.straight(tangents[0].length);
  for (std::size_t i = 0; i < circles.size(); ++i) {
    b.arc_to(circles[i].sign, angle_of(tangents[i + 1].dir));
    b.straight(tangents[i + 1].length);
  }
  if (gc == EndChoice::Rotate) {
    b.arc_to(1, b.current().theta);
    if (!free_goal_heading) b.rotate_to(goal.theta);
  } else {
    b.arc_to(sg, goal.theta);
    b.rotate_to(goal.theta);
  }
  traj.primitives = b.take();
  for (const Primitive& p : traj.primitives) traj.total_time += p.duration;
  return traj;
}

Trajectory eliminate_crossings(std::vector<Circle> circles, Pose start, Pose goal, const Limits& lim, EndChoice sc,
                               EndChoice gc, bool free_goal_heading) {
  int eliminated = 0;
  while (true) {
    Trajectory t = assemble(circles, start, goal, lim, sc, gc, free_goal_heading);
    if (t.primitives.empty()) return t;
    t.eliminated = eliminated;
    bool changed = false;
    for (std::size_t i = 0; i < circles.size(); ++i) {
      const Primitive& in = t.primitives[2 + 2 * i];
      const Primitive& out = t.primitives[4 + 2 * i];
      if (in.length <= 1e-12 || out.length <= 1e-12) continue;
      if (strictly_cross(in.start.position(), in.end(lim).position(), out.start.position(), out.end(lim).position())) {
        circles.erase(circles.begin() + static_cast<std::ptrdiff_t>(i));
        ++eliminated;
        changed = true;
        break;
      }
    }
    if (!changed) return t;
  }
}

namespace {

double max_exit(const std::vector<Sample>& samples, const std::vector<Rectangle>& rects) {
  if (samples.empty() || rects.empty()) return samples.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  std::vector<double> xs(samples.size()), ys(samples.size()), out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    xs[i] = samples[i].x;
    ys[i] = samples[i].y;
  }
  kernels::active().union_exit_distance(xs.data(), ys.data(), xs.size(), rects.data(), rects.size(), out.data());
  return *std::max_element(out.begin(), out.end());
}

}  // namespace

Trajectory synthesize(const std::vector<DirectedCorridor>& seq, const CorridorGraph& cg, Pose start, Pose goal,
                      const Limits& lim, const SynthOptions& opts) {
  int merged = 0;
  std::vector<Circle> circles;
  if (seq.size() >= 2) circles = place_circles(seq, cg, start, goal, lim, &merged);
  std::vector<Rectangle> uni;
  for (const DirectedCorridor& d : seq) uni.push_back(cg.rects[static_cast<std::size_t>(d.corridor_id)]);

  const EndChoice choices[3] = {EndChoice::Rotate, EndChoice::ArcCCW, EndChoice::ArcCW};
  Trajectory best;
  bool have = false, any = false;
  for (EndChoice sc : choices)
    for (EndChoice gc : choices) {
      if (opts.free_goal_heading && gc != EndChoice::Rotate) continue;
      // The crossing-free rewrite can cut a corner the kept circle avoided,
      // so the unreduced sequence stays a candidate.
      for (int pass = 0; pass < (opts.eliminate ? 2 : 1); ++pass) {
        Trajectory t = opts.eliminate && pass == 0
                           ? eliminate_crossings(circles, start, goal, lim, sc, gc, opts.free_goal_heading)
                           : assemble(circles, start, goal, lim, sc, gc, opts.free_goal_heading);
        if (t.primitives.empty()) continue;
        any = true;
        if (have && t.total_time >= best.total_time - 1e-12) continue;
        if (max_exit(sample_spacing(t, lim, opts.containment_spacing), uni) > 1e-9) continue;
        best = std::move(t);
        have = true;
      }
    }
  if (!any) {
    for (std::size_t i = 0; i + 1 < circles.size(); ++i)
      if (circles[i].sign != circles[i + 1].sign && distance(circles[i].center, circles[i + 1].center) < 2.0 * lim.rho())
        throw TangentInfeasible(static_cast<int>(i), static_cast<int>(i + 1));
    throw PlanFailed("analytic", "no start/goal maneuver admits a tangent construction");
  }
  if (!have) throw PlanFailed("analytic", "every candidate trajectory leaves the corridor sequence");
  best.initial_circles = static_cast<int>(circles.size()) + merged;
  best.merged = merged;
  return best;
}

Trajectory waypoint_trajectory(const std::vector<Vec2>& waypoints, Pose start, Pose goal, const Limits& lim,
                               bool free_goal_heading) {
  Trajectory traj;
  traj.start = start;
  traj.goal = goal;
  traj.fallback = true;
  Builder b(lim, start);
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const Vec2 d = waypoints[i + 1] - waypoints[i];
    const double len = norm(d);
    if (len <= 1e-12) continue;
    b.rotate_to(angle_of(d));
    b.straight(len);
  }
  if (!free_goal_heading) b.rotate_to(goal.theta);
  traj.primitives = b.take();
  for (const Primitive& p : traj.primitives) traj.total_time += p.duration;
  return traj;
}

std::vector<Sample> sample(const Trajectory& traj, const Limits& lim, double dt) {
  std::vector<Sample> out;
  double t0 = 0.0;
  double next = 0.0;
  for (const Primitive& p : traj.primitives) {
    while (next < t0 + p.duration) {
      const Pose s = p.state_at(next - t0, lim);
      out.push_back({next, s.x, s.y, s.theta, p.v(lim), p.omega(lim)});
      next += dt;
    }
    t0 += p.duration;
  }
  Pose end = traj.start;
  double v = 0.0, w = 0.0;
  if (!traj.primitives.empty()) {
    end = traj.primitives.back().end(lim);
    v = traj.primitives.back().v(lim);
    w = traj.primitives.back().omega(lim);
  }
  out.push_back({t0, end.x, end.y, end.theta, v, w});
  return out;
}

std::vector<Sample> sample_spacing(const Trajectory& traj, const Limits& lim, double spacing) {
  std::vector<Sample> out;
  double t0 = 0.0;
  for (const Primitive& p : traj.primitives) {
    const std::size_t n = p.kind == PrimKind::T ? 1 : std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(p.length / spacing)));
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == 0 && !out.empty()) continue;
      const double t = p.duration * static_cast<double>(k) / static_cast<double>(n);
      const Pose s = p.state_at(t, lim);
      out.push_back({t0 + t, s.x, s.y, s.theta, p.v(lim), p.omega(lim)});
    }
    t0 += p.duration;
  }
  if (out.empty()) out.push_back({0.0, traj.start.x, traj.start.y, traj.start.theta, 0.0, 0.0});
  return out;
}

Pose rk4_replay(const Trajectory& traj, const Limits& lim, double dt) {
  double x = traj.start.x, y = traj.start.y, th = traj.start.theta;
  for (const Primitive& p : traj.primitives) {
    if (p.duration <= 0.0) continue;
    const double v = p.v(lim), w = p.omega(lim);
    const auto steps = static_cast<std::size_t>(std::ceil(p.duration / dt));
    const double h = p.duration / static_cast<double>(steps);
    for (std::size_t k = 0; k < steps; ++k) {
      const double k1x = v * std::cos(th), k1y = v * std::sin(th);
      const double t2 = th + 0.5 * h * w;
      const double k2x = v * std::cos(t2), k2y = v * std::sin(t2);
      const double k4x = v * std::cos(th + h * w), k4y = v * std::sin(th + h * w);
      // k3 equals k2: heading does not depend on position.
      x += h / 6.0 * (k1x + 4.0 * k2x + k4x);
      y += h / 6.0 * (k1y + 4.0 * k2y + k4y);
      th += h * w;
    }
  }
  return {x, y, th};
}

ValidationReport validate(const Trajectory& traj, const std::vector<Rectangle>& corridors, const Limits& lim,
                          const ValidateOptions& opts) {
  ValidationReport rep;
  const auto control_violation = [&](double v, double w) {
    const double dv = std::min(std::abs(v), std::abs(v - lim.v_max));
    const double dw = std::min({std::abs(w), std::abs(w - lim.omega_max), std::abs(w + lim.omega_max)});
    return std::max(dv, dw);
  };
  const std::vector<Sample> samples = sample_spacing(traj, lim, opts.spacing);
  rep.samples = samples.size();
  for (const Sample& s : samples) rep.max_control_violation = std::max(rep.max_control_violation, control_violation(s.v, s.omega));
  for (const Primitive& p : traj.primitives) {
    rep.max_control_violation = std::max(rep.max_control_violation, control_violation(p.v(lim), p.omega(lim)));
    if (p.kind == PrimKind::T && p.v(lim) != 0.0) rep.max_control_violation = std::max(rep.max_control_violation, lim.v_max);
  }
  rep.max_exit_distance = max_exit(samples, corridors);
  Pose prev = traj.start;
  for (const Primitive& p : traj.primitives) {
    const double r = std::max(distance(prev.position(), p.start.position()), std::abs(wrap_pi(prev.theta - p.start.theta)));
    rep.max_junction_residual = std::max(rep.max_junction_residual, r);
    prev = p.end(lim);
  }
  rep.end_position_error = distance(prev.position(), traj.goal.position());
  rep.end_heading_error = opts.check_heading ? std::abs(wrap_pi(prev.theta - traj.goal.theta)) : 0.0;
  const Pose rk = rk4_replay(traj, lim, opts.rk4_dt);
  rep.rk4_error = distance(rk.position(), prev.position());
  return rep;
}

}  // namespace corridor
