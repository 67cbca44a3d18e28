#include "corridor/walls.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>

namespace corridor {

namespace {

// Crack directions on the pixel-corner lattice.
enum Dir : int { kEast = 0, kNorth = 1, kWest = 2, kSouth = 3 };
constexpr long kDi[4] = {0, 1, 0, -1};
constexpr long kDj[4] = {1, 0, -1, 0};

double orientation_deg(Vec2 d) {
  double a = rad2deg(std::atan2(d.y, d.x));
  a = std::fmod(a, 180.0);
  if (a < 0.0) a += 180.0;
  if (a >= 180.0) a -= 180.0;
  return a;
}

double orientation_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), 180.0);
  return std::min(d, 180.0 - d);
}

}  // namespace

std::vector<BoundaryLoop> trace_boundaries(const OccupancyGrid& grid, bool open_borders) {
  const long rows = static_cast<long>(grid.rows()), cols = static_cast<long>(grid.cols());
  const long vcols = cols + 1;
  // -1: outside and ignored, 0: free, 1: blocked
  const auto state = [&](long r, long c) -> int {
    if (!grid.in_bounds(r, c)) return open_borders ? -1 : 1;
    return grid.occupied(r, c) ? 1 : 0;
  };
  std::vector<std::uint8_t> out(static_cast<std::size_t>((rows + 1) * vcols), 0);
  const auto vid = [vcols](long i, long j) { return static_cast<std::size_t>(i * vcols + j); };

  for (long i = 0; i <= rows; ++i)
    for (long c = 0; c < cols; ++c) {
      const int below = state(i - 1, c), above = state(i, c);
      if (below < 0 || above < 0 || below == above) continue;
      if (above == 0) out[vid(i, c)] |= 1u << kEast;
      else out[vid(i, c + 1)] |= 1u << kWest;
    }
  for (long j = 0; j <= cols; ++j)
    for (long r = 0; r < rows; ++r) {
      const int left = state(r, j - 1), right = state(r, j);
      if (left < 0 || right < 0 || left == right) continue;
      if (left == 0) out[vid(r, j)] |= 1u << kNorth;
      else out[vid(r + 1, j)] |= 1u << kSouth;
    }

  // With open borders some chains start and end at the border; trace those first.
  std::vector<std::uint8_t> in(out.size(), 0);
  for (long i = 0; i <= rows; ++i)
    for (long j = 0; j <= cols; ++j)
      for (int d = 0; d < 4; ++d)
        if (out[vid(i, j)] & (1u << d)) ++in[vid(i + kDi[d], j + kDj[d])];

  std::vector<BoundaryLoop> loops;
  const auto trace = [&](long i, long j, bool open) {
    const std::uint8_t mask = out[vid(i, j)];
    int d = 0;
    while (!(mask & (1u << d))) ++d;
    BoundaryLoop loop;
    loop.closed = !open;
    switch (d) {
      case kEast: loop.blocked_cell = {i - 1, j}; break;
      case kNorth: loop.blocked_cell = {i, j}; break;
      case kWest: loop.blocked_cell = {i, j - 1}; break;
      default: loop.blocked_cell = {i - 1, j - 1}; break;
    }
    const auto vertex = [](long vi, long vj) { return Vec2{static_cast<double>(vj) - 0.5, static_cast<double>(vi) - 0.5}; };
    long ci = i, cj = j;
    int prev = -1;
    while (true) {
      std::uint8_t& m = out[vid(ci, cj)];
      if (m == 0) break;
      int nd;
      if (prev < 0) {
        nd = d;
      } else {
        const int right = (prev + 3) % 4, straight = prev, left = (prev + 1) % 4;
        if (m & (1u << right)) nd = right;
        else if (m & (1u << straight)) nd = straight;
        else if (m & (1u << left)) nd = left;
        else break;
      }
      if (nd != prev) loop.vertices.push_back(vertex(ci, cj));
      m = static_cast<std::uint8_t>(m & ~(1u << nd));
      ci += kDi[nd];
      cj += kDj[nd];
      prev = nd;
      if (ci == i && cj == j) break;
    }
    if (open) {
      loop.vertices.push_back(vertex(ci, cj));
      if (loop.vertices.size() >= 2) loops.push_back(std::move(loop));
      return;
    }
    // The start vertex is a corner only if the loop turns there.
    if (loop.vertices.size() >= 2 && prev == d) loop.vertices.erase(loop.vertices.begin());
    if (loop.vertices.size() >= 3) loops.push_back(std::move(loop));
  };
  if (open_borders)
    for (long i = 0; i <= rows; ++i)
      for (long j = 0; j <= cols; ++j) {
        const std::size_t v = vid(i, j);
        const int outs = std::popcount(out[v]);
        for (int k = in[v]; k < outs; ++k) trace(i, j, true);
      }
  for (long i = 0; i <= rows; ++i)
    for (long j = 0; j <= cols; ++j)
      while (out[vid(i, j)] != 0) trace(i, j, false);
  return loops;
}

namespace {

void douglas_peucker(const std::vector<Vec2>& pts, std::size_t first, std::size_t last, double tol,
                     std::vector<char>& keep) {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{first, last}};
  while (!stack.empty()) {
    const auto [a, b] = stack.back();
    stack.pop_back();
    if (b <= a + 1) continue;
    double worst = -1.0;
    std::size_t idx = a;
    for (std::size_t k = a + 1; k < b; ++k) {
      const double d = point_segment_distance(pts[k], pts[a], pts[b % pts.size()]);
      if (d > worst) {
        worst = d;
        idx = k;
      }
    }
    if (worst > tol) {
      keep[idx] = 1;
      stack.push_back({a, idx});
      stack.push_back({idx, b});
    }
  }
}

}  // namespace

std::vector<Vec2> simplify_closed(const std::vector<Vec2>& loop, double tolerance) {
  const std::size_t n = loop.size();
  if (n < 4) return loop;
  // Anchor at the lexicographically smallest vertex and the vertex farthest from it.
  std::size_t anchor = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (lex_less(loop[k], loop[anchor])) anchor = k;
  std::vector<Vec2> pts(n);
  for (std::size_t k = 0; k < n; ++k) pts[k] = loop[(anchor + k) % n];
  std::size_t far = 0;
  double best = -1.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double d = distance(pts[k], pts[0]);
    if (d > best) {
      best = d;
      far = k;
    }
  }
  std::vector<char> keep(n, 0);
  keep[0] = 1;
  keep[far] = 1;
  douglas_peucker(pts, 0, far, tolerance, keep);
  pts.push_back(pts[0]);
  keep.push_back(0);
  douglas_peucker(pts, far, n, tolerance, keep);
  std::vector<Vec2> out;
  for (std::size_t k = 0; k < n; ++k)
    if (keep[k]) out.push_back(pts[k]);
  return out;
}

std::vector<Vec2> simplify_open(const std::vector<Vec2>& chain, double tolerance) {
  const std::size_t n = chain.size();
  if (n < 3) return chain;
  std::vector<char> keep(n, 0);
  keep[0] = keep[n - 1] = 1;
  douglas_peucker(chain, 0, n - 1, tolerance, keep);
  std::vector<Vec2> out;
  for (std::size_t k = 0; k < n; ++k)
    if (keep[k]) out.push_back(chain[k]);
  return out;
}

std::vector<RawSegment> detect_segments(const OccupancyGrid& grid, const DetectOptions& opts) {
  return detect_segments(grid, opts, nullptr);
}

std::vector<RawSegment> detect_segments(const OccupancyGrid& grid, const DetectOptions& opts,
                                        std::vector<BoundaryLoop>* loops_out) {
  std::vector<BoundaryLoop> loops = trace_boundaries(grid, opts.open_borders);
  std::vector<RawSegment> segs;
  for (std::size_t li = 0; li < loops.size(); ++li) {
    const bool closed = loops[li].closed;
    const std::vector<Vec2> poly = closed ? simplify_closed(loops[li].vertices, opts.simplify_tolerance)
                                          : simplify_open(loops[li].vertices, opts.simplify_tolerance);
    const std::size_t n = poly.size();
    if (n < 2) continue;
    for (std::size_t k = 0; k + (closed ? 0 : 1) < n; ++k) {
      const Vec2 p = poly[k], q = poly[(k + 1) % n];
      const double len = distance(p, q);
      if (len >= opts.min_length && len > 0.0) segs.push_back({p, q, len, static_cast<int>(li)});
    }
  }
  if (loops_out) *loops_out = std::move(loops);
  return segs;
}

std::vector<WallLine> straighten(const std::vector<RawSegment>& segments, const StraightenOptions& opts) {
  const std::size_t n = segments.size();
  std::vector<double> orient(n), snapped(n, -1.0);
  std::vector<std::size_t> loose;
  for (std::size_t i = 0; i < n; ++i) {
    orient[i] = orientation_deg(segments[i].q - segments[i].p);
    double best_gap = 1e9;
    for (double d : opts.canonical_deg) {
      const double g = orientation_gap(orient[i], d);
      if (g <= opts.tolerance_deg && g < best_gap) {
        best_gap = g;
        snapped[i] = std::fmod(std::fmod(d, 180.0) + 180.0, 180.0);
      }
    }
    if (snapped[i] < 0.0) loose.push_back(i);
  }
  // Single-link clustering of the remaining orientations on the 180-degree circle.
  if (!loose.empty()) {
    std::sort(loose.begin(), loose.end(), [&](std::size_t a, std::size_t b) {
      return orient[a] < orient[b] || (orient[a] == orient[b] && a < b);
    });
    std::vector<std::vector<std::size_t>> clusters{{loose[0]}};
    for (std::size_t k = 1; k < loose.size(); ++k) {
      if (orient[loose[k]] - orient[loose[k - 1]] <= opts.cluster_gap_deg) clusters.back().push_back(loose[k]);
      else clusters.push_back({loose[k]});
    }
    if (clusters.size() > 1 &&
        orient[loose.front()] + 180.0 - orient[loose.back()] <= opts.cluster_gap_deg) {
      auto& last = clusters.back();
      last.insert(last.end(), clusters.front().begin(), clusters.front().end());
      clusters.erase(clusters.begin());
    }
    for (const auto& cl : clusters) {
      // Mean of axial data: average the doubled angles.
      double sx = 0.0, sy = 0.0;
      for (std::size_t i : cl) {
        sx += std::cos(deg2rad(2.0 * orient[i]));
        sy += std::sin(deg2rad(2.0 * orient[i]));
      }
      double mean = 0.5 * rad2deg(std::atan2(sy, sx));
      if (mean < 0.0) mean += 180.0;
      if (mean >= 180.0) mean -= 180.0;
      for (std::size_t i : cl) snapped[i] = mean;
    }
  }
  std::vector<WallLine> walls;
  walls.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RawSegment& s = segments[i];
    Vec2 u = unit_from_angle(deg2rad(snapped[i]));
    // Exact axis directions for canonical angles.
    if (snapped[i] == 0.0) u = {1.0, 0.0};
    else if (snapped[i] == 90.0) u = {0.0, 1.0};
    if (dot(s.q - s.p, u) < 0.0) u = -u;
    const Vec2 m = (s.p + s.q) * 0.5;
    WallLine w;
    w.aligned_p = m + u * dot(s.p - m, u);
    w.aligned_q = m + u * dot(s.q - m, u);
    w.p = w.aligned_p;
    w.q = w.aligned_q;
    w.direction = u;
    w.angle_deg = snapped[i];
    w.loop = s.loop;
    walls.push_back(w);
  }
  return walls;
}

std::optional<Vec2> inward_normal(const OccupancyGrid& grid, const WallLine& wall, const NormalOptions& opts) {
  const Vec2 left = left_normal(wall.direction);
  const auto free_count = [&](Vec2 n, double offset) {
    int count = 0;
    for (int k = 0; k < opts.n_samples; ++k) {
      const double t = static_cast<double>(k + 1) / static_cast<double>(opts.n_samples + 1);
      const Vec2 s = wall.aligned_p + (wall.aligned_q - wall.aligned_p) * t + n * offset;
      if (!grid.occupied(std::lround(s.y), std::lround(s.x))) ++count;
    }
    return count;
  };
  const int a = free_count(left, opts.probe), b = free_count(-left, opts.probe);
  if (a == 0 && b == 0) return std::nullopt;
  if (a != b) return a > b ? left : -left;
  const int a2 = free_count(left, 2.0 * opts.probe), b2 = free_count(-left, 2.0 * opts.probe);
  if (a2 != b2) return a2 > b2 ? left : -left;
  return lex_less(left, -left) ? left : -left;
}

WallLine shift_inward(const WallLine& wall, double rho) {
  WallLine w = wall;
  w.clearance = rho;
  w.p = wall.aligned_p + wall.normal * rho;
  w.q = wall.aligned_q + wall.normal * rho;
  return w;
}

int clearance_pixels(double robot_radius, double resolution) {
  // Guard against 0.34/0.05 = 6.800000000000001 style noise.
  return static_cast<int>(std::ceil(robot_radius / resolution - 1e-9));
}

WallExtraction extract_walls(const OccupancyGrid& grid, const WallOptions& opts) {
  WallExtraction ex;
  const std::vector<RawSegment> segs = detect_segments(grid, opts.detect, &ex.loops);
  std::vector<WallLine> walls = straighten(segs, opts.straighten);
  for (WallLine& w : walls) {
    const auto n = inward_normal(grid, w, opts.normal);
    if (!n) {
      ++ex.degenerate;
      continue;
    }
    w.normal = *n;
    ex.walls.push_back(shift_inward(w, opts.clearance_px));
  }
  std::sort(ex.walls.begin(), ex.walls.end(), [](const WallLine& a, const WallLine& b) {
    if (a.aligned_p != b.aligned_p) return lex_less(a.aligned_p, b.aligned_p);
    return lex_less(a.aligned_q, b.aligned_q);
  });
  return ex;
}

}  // namespace corridor
