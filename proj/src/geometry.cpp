#include "corridor/geometry.hpp"

#include <array>

namespace corridor {

double polygon_area(const Polygon& poly) {
  double a = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

Vec2 polygon_centroid(const Polygon& poly) {
  if (poly.empty()) return {};
  const double a = polygon_area(poly);
  if (std::abs(a) < 1e-15) {
    // Degenerate: vertex average.
    Vec2 s;
    for (Vec2 p : poly) s += p;
    return s / static_cast<double>(poly.size());
  }
  Vec2 c;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = poly[i], q = poly[(i + 1) % n];
    const double w = cross(p, q);
    c += (p + q) * w;
  }
  return c / (6.0 * a);
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  Polygon out = subject;
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !out.empty(); ++e) {
    const Vec2 a = clip[e], b = clip[(e + 1) % m];
    const Vec2 ab = b - a;
    Polygon in = std::move(out);
    out.clear();
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 p = in[i], q = in[(i + 1) % n];
      const double sp = cross(ab, p - a), sq = cross(ab, q - a);
      const bool pin = sp >= -1e-12, qin = sq >= -1e-12;
      if (pin) out.push_back(p);
      if (pin != qin) {
        const double t = sp / (sp - sq);
        out.push_back(p + (q - p) * t);
      }
    }
  }
  // Drop consecutive duplicates.
  Polygon clean;
  for (Vec2 p : out) {
    if (clean.empty() || distance(clean.back(), p) > 1e-12) clean.push_back(p);
  }
  while (clean.size() > 1 && distance(clean.front(), clean.back()) <= 1e-12) clean.pop_back();
  return clean;
}

InscribedDisk largest_inscribed_disk(const Polygon& poly) {
  InscribedDisk best;
  const std::size_t n = poly.size();
  if (n < 3 || polygon_area(poly) <= 1e-15) {
    best.center = polygon_centroid(poly);
    return best;
  }
  // Constraint i: nrm_i . p - off_i >= r, with nrm_i the inward unit normal.
  std::vector<Vec2> nrm;
  std::vector<double> off;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % n];
    if (distance(a, b) < 1e-14) continue;
    const Vec2 nn = left_normal(normalized(b - a));
    nrm.push_back(nn);
    off.push_back(dot(nn, a));
  }
  const std::size_t k = nrm.size();
  best.radius = -1.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (std::size_t l = j + 1; l < k; ++l) {
        // Solve [n_x n_y -1] [px py r]^T = off for the three constraints.
        const std::array<std::size_t, 3> idx{i, j, l};
        double m[3][4];
        for (int row = 0; row < 3; ++row) {
          m[row][0] = nrm[idx[row]].x;
          m[row][1] = nrm[idx[row]].y;
          m[row][2] = -1.0;
          m[row][3] = off[idx[row]];
        }
        bool singular = false;
        for (int c = 0; c < 3 && !singular; ++c) {
          int piv = c;
          for (int r = c + 1; r < 3; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
          if (std::abs(m[piv][c]) < 1e-12) { singular = true; break; }
          for (int t = 0; t < 4; ++t) std::swap(m[c][t], m[piv][t]);
          for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            const double f = m[r][c] / m[c][c];
            for (int t = c; t < 4; ++t) m[r][t] -= f * m[c][t];
          }
        }
        if (singular) continue;
        const Vec2 p{m[0][3] / m[0][0], m[1][3] / m[1][1]};
        const double r = m[2][3] / m[2][2];
        if (r <= best.radius) continue;
        bool feasible = true;
        for (std::size_t q = 0; q < k; ++q) {
          if (dot(nrm[q], p) - off[q] < r - 1e-9) { feasible = false; break; }
        }
        if (feasible) best = {p, r};
      }
  if (best.radius < 0.0) best = {polygon_centroid(poly), 0.0};
  return best;
}

bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1, double eps) {
  const auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return cross(q - p, r - p); };
  const double d1 = orient(b0, b1, a0), d2 = orient(b0, b1, a1);
  const double d3 = orient(a0, a1, b0), d4 = orient(a0, a1, b1);
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
      ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
    return true;
  const auto on_seg = [eps](Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, q.x) - eps <= r.x && r.x <= std::max(p.x, q.x) + eps &&
           std::min(p.y, q.y) - eps <= r.y && r.y <= std::max(p.y, q.y) + eps;
  };
  if (std::abs(d1) <= eps && on_seg(b0, b1, a0)) return true;
  if (std::abs(d2) <= eps && on_seg(b0, b1, a1)) return true;
  if (std::abs(d3) <= eps && on_seg(a0, a1, b0)) return true;
  if (std::abs(d4) <= eps && on_seg(a0, a1, b1)) return true;
  return false;
}

std::optional<double> ray_segment_hit(Vec2 origin, Vec2 dir, Vec2 s0, Vec2 s1, double eps) {
  const Vec2 e = s1 - s0;
  const double den = cross(dir, e);
  if (std::abs(den) < 1e-14) return std::nullopt;  // parallel
  const Vec2 w = s0 - origin;
  const double t = cross(w, e) / den;
  const double u = cross(w, dir) / den;
  if (t < eps) return std::nullopt;
  if (u < -1e-9 || u > 1.0 + 1e-9) return std::nullopt;
  return t;
}

double point_segment_distance(Vec2 p, Vec2 s0, Vec2 s1) {
  const Vec2 e = s1 - s0;
  const double len2 = dot(e, e);
  if (len2 <= 0.0) return distance(p, s0);
  const double t = std::clamp(dot(p - s0, e) / len2, 0.0, 1.0);
  return distance(p, s0 + e * t);
}

}  // namespace corridor
