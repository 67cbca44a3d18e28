#pragma once

// Wall extraction: boundary tracing, orientation snapping, inward normals and
// clearance shifting. All coordinates are continuous pixel coordinates
// (x = column, y = row); pixel centers sit on integers.

#include <optional>
#include <vector>

#include "corridor/geometry.hpp"
#include "corridor/grid.hpp"

namespace corridor {

struct RawSegment {
  Vec2 p;
  Vec2 q;
  double length = 0.0;
  int loop = -1;  // boundary loop this segment was traced from
};

struct WallLine {
  Vec2 aligned_p;  // P' (before shift)
  Vec2 aligned_q;  // Q'
  Vec2 p;          // shifted endpoints
  Vec2 q;
  Vec2 direction;  // unit, aligned_p -> aligned_q
  Vec2 normal;     // unit, points into free space
  double clearance = 0.0;
  double angle_deg = 0.0;  // undirected orientation in [0, 180)
  int loop = -1;
  double length() const { return distance(p, q); }
  Vec2 midpoint() const { return (p + q) * 0.5; }
};

struct DetectOptions {
  double min_length = 10.0;
  double simplify_tolerance = 1.5;
  bool open_borders = false;
};

/// A traced free/blocked boundary loop with free space on its left.
struct BoundaryLoop {
  std::vector<Vec2> vertices;  // corner vertices, closed implicitly unless `closed` is false
  PixelIndex blocked_cell;     // a blocked cell adjacent to the loop (may be out of bounds)
  bool closed = true;          // false for chains that end on an open border
};

std::vector<BoundaryLoop> trace_boundaries(const OccupancyGrid& grid, bool open_borders);
std::vector<Vec2> simplify_closed(const std::vector<Vec2>& loop, double tolerance);
std::vector<Vec2> simplify_open(const std::vector<Vec2>& chain, double tolerance);

std::vector<RawSegment> detect_segments(const OccupancyGrid& grid, const DetectOptions& opts = {});
/// Same, but also returns the traced loops (indexed by RawSegment::loop).
std::vector<RawSegment> detect_segments(const OccupancyGrid& grid, const DetectOptions& opts,
                                        std::vector<BoundaryLoop>* loops);

struct StraightenOptions {
  std::vector<double> canonical_deg{0.0, 90.0};
  double tolerance_deg = 10.0;
  double cluster_gap_deg = 5.0;
};

/// Unshifted walls (p == aligned_p, normal unset).
std::vector<WallLine> straighten(const std::vector<RawSegment>& segments, const StraightenOptions& opts = {});

struct NormalOptions {
  int n_samples = 9;
  double probe = 3.0;
};

/// Inward normal by free-sample majority; nullopt when both sides are fully occupied.
std::optional<Vec2> inward_normal(const OccupancyGrid& grid, const WallLine& wall, const NormalOptions& opts = {});

WallLine shift_inward(const WallLine& wall, double rho);

/// Clearance in pixels for a robot radius in meters: ceil(a / delta).
int clearance_pixels(double robot_radius, double resolution);

struct WallOptions {
  DetectOptions detect;
  StraightenOptions straighten;
  NormalOptions normal;
  double clearance_px = 7.0;
};

struct WallExtraction {
  std::vector<WallLine> walls;  // sorted by (P', Q')
  std::vector<BoundaryLoop> loops;
  int degenerate = 0;           // walls dropped for having no free side
};

WallExtraction extract_walls(const OccupancyGrid& grid, const WallOptions& opts);

}  // namespace corridor
