#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace corridor {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr bool operator==(const Vec2&) const = default;
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
inline constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
/// Counterclockwise perpendicular.
inline constexpr Vec2 left_normal(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 normalized(Vec2 a) {
  const double n = norm(a);
  return n > 0.0 ? a / n : Vec2{};
}
inline Vec2 unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }
inline double angle_of(Vec2 a) { return std::atan2(a.y, a.x); }
inline Vec2 rotate(Vec2 a, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}
inline bool lex_less(Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

/// Wraps to (-pi, pi].
inline double wrap_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}
/// Wraps to [0, 2pi).
inline double wrap_two_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}
inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  Vec2 position() const { return {x, y}; }
};

/// Oriented rectangle r = (c, d, phi). Membership: |R_phi^T (x - c)| <= d/2 element-wise.
struct Rectangle {
  int id = -1;
  Vec2 center;
  Vec2 dims;  // width (local x), height (local y)
  double angle = 0.0;

  Vec2 to_local(Vec2 p) const { return rotate(p - center, -angle); }
  Vec2 to_world(Vec2 local) const { return center + rotate(local, angle); }
  bool contains(Vec2 p, double eps = 1e-9) const {
    const Vec2 l = to_local(p);
    return std::abs(l.x) <= 0.5 * dims.x + eps && std::abs(l.y) <= 0.5 * dims.y + eps;
  }
  /// Euclidean distance from p to the region; zero inside.
  double exit_distance(Vec2 p) const {
    const Vec2 l = to_local(p);
    const double dx = std::max(std::abs(l.x) - 0.5 * dims.x, 0.0);
    const double dy = std::max(std::abs(l.y) - 0.5 * dims.y, 0.0);
    return std::hypot(dx, dy);
  }
  /// Counterclockwise corners.
  std::vector<Vec2> corners() const {
    const double hw = 0.5 * dims.x, hh = 0.5 * dims.y;
    return {to_world({-hw, -hh}), to_world({hw, -hh}), to_world({hw, hh}), to_world({-hw, hh})};
  }
  double area() const { return dims.x * dims.y; }
};

/// Axis-aligned box, closed.
struct Box {
  double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool contains(Vec2 p, double eps = 0.0) const {
    return p.x >= xmin - eps && p.x <= xmax + eps && p.y >= ymin - eps && p.y <= ymax + eps;
  }
  Rectangle to_rectangle(int id = -1) const {
    return Rectangle{id, {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}, {width(), height()}, 0.0};
  }
  static Box of(const Rectangle& r) {
    // Exact for axis-aligned rectangles; bounding box otherwise.
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (Vec2 c : r.corners()) {
      x0 = std::min(x0, c.x); y0 = std::min(y0, c.y);
      x1 = std::max(x1, c.x); y1 = std::max(y1, c.y);
    }
    return {x0, y0, x1, y1};
  }
};

using Polygon = std::vector<Vec2>;

double polygon_area(const Polygon& poly);  // signed, CCW positive
Vec2 polygon_centroid(const Polygon& poly);
/// Clips convex `subject` against convex CCW `clip`.
Polygon clip_convex(const Polygon& subject, const Polygon& clip);
/// Radius of the largest disk inside a convex CCW polygon, with its center.
struct InscribedDisk {
  Vec2 center;
  double radius = 0.0;
};
InscribedDisk largest_inscribed_disk(const Polygon& convex_ccw);

/// Proper or touching intersection of closed segments.
bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1, double eps = 1e-12);
/// Ray origin + t*dir against segment [s0,s1]; returns t >= 0 of the hit.
std::optional<double> ray_segment_hit(Vec2 origin, Vec2 dir, Vec2 s0, Vec2 s1, double eps = 1e-9);
double point_segment_distance(Vec2 p, Vec2 s0, Vec2 s1);

}  // namespace corridor
