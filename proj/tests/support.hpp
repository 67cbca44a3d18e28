#pragma once

// Grid builders, random generators and brute-force oracles shared by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "corridor/geometry.hpp"
#include "corridor/grid.hpp"

namespace testing {

using corridor::OccupancyGrid;
using corridor::Vec2;

/// Rows given top to bottom as in an image; '#' is occupied.
inline OccupancyGrid ascii_grid(const std::vector<std::string>& rows, double res = 1.0) {
  const std::size_t m = rows.size(), n = rows.front().size();
  std::vector<std::uint8_t> cells(m * n);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) cells[r * n + c] = rows[m - 1 - r][c] == '#' ? 1 : 0;
  return OccupancyGrid(m, n, std::move(cells), res);
}

/// occupied(r, c) -> bool in grid orientation.
inline OccupancyGrid make_grid(std::size_t rows, std::size_t cols, double res,
                               const std::function<bool(long, long)>& occupied) {
  std::vector<std::uint8_t> cells(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) cells[r * cols + c] = occupied(static_cast<long>(r), static_cast<long>(c)) ? 1 : 0;
  return OccupancyGrid(rows, cols, std::move(cells), res);
}

/// Blocked frame of `wall` cells with blocked boxes [r0, r1) x [c0, c1).
struct BoxSpec {
  long r0, c0, r1, c1;
};
inline OccupancyGrid boxes_grid(std::size_t rows, std::size_t cols, long wall, const std::vector<BoxSpec>& blocked,
                                double res = 0.05) {
  return make_grid(rows, cols, res, [&](long r, long c) {
    if (r < wall || c < wall || r >= static_cast<long>(rows) - wall || c >= static_cast<long>(cols) - wall) return true;
    for (const BoxSpec& b : blocked)
      if (r >= b.r0 && r < b.r1 && c >= b.c0 && c < b.c1) return true;
    return false;
  });
}

/// Connected components of the graph "distance <= d" by O(n^2) BFS, as a label per point.
inline std::vector<int> brute_components(const std::vector<Vec2>& pts, double d) {
  std::vector<int> label(pts.size(), -1);
  int next = 0;
  for (std::size_t s = 0; s < pts.size(); ++s) {
    if (label[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    label[s] = next;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < pts.size(); ++j)
        if (label[j] < 0 && corridor::distance(pts[i], pts[j]) <= d) {
          label[j] = next;
          stack.push_back(j);
        }
    }
    ++next;
  }
  return label;
}

/// Two labelings describe the same partition.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

inline corridor::Rectangle random_rect(std::mt19937_64& rng, double span, double min_dim, double max_dim, bool rotated) {
  std::uniform_real_distribution<double> pos(-span, span), dim(min_dim, max_dim), ang(0.0, corridor::kTwoPi);
  corridor::Rectangle r;
  r.center = {pos(rng), pos(rng)};
  r.dims = {dim(rng), dim(rng)};
  r.angle = rotated ? ang(rng) : 0.0;
  return r;
}

/// Occupied pixels whose centers lie inside the rectangle.
inline std::size_t occupied_inside(const OccupancyGrid& g, const corridor::Rectangle& r) {
  std::size_t n = 0;
  for (corridor::PixelIndex p : corridor::rasterize_rectangle(g, r))
    if (g.occupied(p.row, p.col)) ++n;
  return n;
}

/// Every lattice point of the rectangle (resolution spacing in its own frame,
/// edges included) keeps a free disk of `radius`.
inline bool disk_safe(const OccupancyGrid& g, const corridor::Rectangle& r, double radius) {
  const double h = g.resolution();
  const long nx = static_cast<long>(std::floor(r.dims.x / h + 1e-9)), ny = static_cast<long>(std::floor(r.dims.y / h + 1e-9));
  for (long i = 0; i <= nx + 1; ++i)
    for (long j = 0; j <= ny + 1; ++j) {
      const double lx = std::min(-0.5 * r.dims.x + i * h, 0.5 * r.dims.x);
      const double ly = std::min(-0.5 * r.dims.y + j * h, 0.5 * r.dims.y);
      if (!corridor::is_free_disk(g, r.to_world({lx, ly}), radius)) return false;
    }
  return true;
}

/// Point inside a convex counterclockwise polygon (boundary included).
inline bool in_convex(const std::vector<Vec2>& poly, Vec2 p, double eps = 1e-12) {
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (corridor::cross(poly[(i + 1) % poly.size()] - poly[i], p - poly[i]) < -eps) return false;
  return true;
}

/// Lattice estimate of the overlap area of two oriented rectangles, sampled over
/// the intersection of their bounding boxes with n x n cell centers.
inline double lattice_overlap_area(const corridor::Rectangle& a, const corridor::Rectangle& b, int n) {
  const corridor::Box ba = corridor::Box::of(a), bb = corridor::Box::of(b);
  const double x0 = std::max(ba.xmin, bb.xmin), x1 = std::min(ba.xmax, bb.xmax);
  const double y0 = std::max(ba.ymin, bb.ymin), y1 = std::min(ba.ymax, bb.ymax);
  if (x1 <= x0 || y1 <= y0) return 0.0;
  const double ca = std::cos(a.angle), sa = std::sin(a.angle), cb = std::cos(b.angle), sb = std::sin(b.angle);
  const double hx = (x1 - x0) / n, hy = (y1 - y0) / n;
  std::size_t in = 0;
  for (int i = 0; i < n; ++i) {
    const double x = x0 + (i + 0.5) * hx;
    for (int j = 0; j < n; ++j) {
      const double y = y0 + (j + 0.5) * hy;
      const double ax = x - a.center.x, ay = y - a.center.y, bx = x - b.center.x, by = y - b.center.y;
      if (std::abs(ca * ax + sa * ay) <= 0.5 * a.dims.x && std::abs(-sa * ax + ca * ay) <= 0.5 * a.dims.y &&
          std::abs(cb * bx + sb * by) <= 0.5 * b.dims.x && std::abs(-sb * bx + cb * by) <= 0.5 * b.dims.y)
        ++in;
    }
  }
  return static_cast<double>(in) * hx * hy;
}

}  // namespace testing
