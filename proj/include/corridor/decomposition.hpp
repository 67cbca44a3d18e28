#pragma once

// Rectangle generation, obstacle carving, size filtering and the corridor
// connectivity graph.

#include <optional>
#include <vector>

#include "corridor/geometry.hpp"
#include "corridor/grid.hpp"
#include "corridor/snap_graph.hpp"
#include "corridor/walls.hpp"

namespace corridor {

/// Inclusive pixel-center box [c0, c1] x [r0, r1] (continuous pixel coordinates).
struct PixelBox {
  double c0 = 0, r0 = 0, c1 = 0, r1 = 0;
  double width() const { return c1 - c0; }
  double height() const { return r1 - r0; }
  bool operator==(const PixelBox&) const = default;
};

/// Splits `rect` around `bbox`: full-height left/right slabs, bottom/top slabs
/// spanning the bbox's horizontal extent. Non-positive-area fragments dropped.
std::vector<Box> carve_obstacle(const Box& rect, const Box& bbox);

std::vector<Rectangle> filter_min_size(const std::vector<Rectangle>& rects, double min_w, double min_h);

/// Intersection polygon (CCW) of two oriented rectangles, or nothing when a
/// separating axis exists. Touching rectangles yield a degenerate polygon.
std::optional<Polygon> sat_overlap(const Rectangle& a, const Rectangle& b);

struct CorridorEdge {
  int i = -1, j = -1;  // i < j
  Polygon polygon;     // intersection I_ij, world meters
  bool shared_edge = false;  // connected through a shared boundary segment
};

struct CorridorGraph {
  std::vector<Rectangle> rects;
  std::vector<CorridorEdge> edges;
  std::vector<std::vector<int>> adjacency;  // rect -> edge indices

  /// Edge index between i and j, or -1.
  int edge_between(int i, int j) const;
  int component_count() const;
};

/// Tests all pairs; an edge exists iff the overlap contains a disk of radius
/// `a`, or the pair shares a boundary segment of length >= 2a.
CorridorGraph build_corridor_graph(const std::vector<Rectangle>& rects, double a);

/// Free-space raster the rectangles grow on.
struct GrowthRaster {
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint8_t> mask;  // 1 = admissible robot center
  MaskSums sums;

  GrowthRaster() = default;
  GrowthRaster(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> mask);
  bool at(long r, long c) const {
    return r >= 0 && c >= 0 && r < static_cast<long>(rows) && c < static_cast<long>(cols) &&
           mask[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c)] != 0;
  }
  bool all_set(long r0, long c0, long r1, long c1) const;
};

/// Maximal axis-aligned box through pixel (r, c); `x_first` grows columns before rows.
PixelBox grow_box(const GrowthRaster& raster, long r, long c, bool x_first);

struct GenerateOptions {
  double min_gain_px = 196.0;  // smallest new coverage worth a rectangle
  int seed_search = 3;         // neighborhood searched for an admissible seed pixel
  double min_size_px = 0.0;    // boxes narrower than this are never selected
};

/// Candidate rectangles seeded from snaps in priority order (Double, Full, Half).
std::vector<PixelBox> rectangle_candidates(const SnapGraph& graph, const GrowthRaster& raster,
                                           const GenerateOptions& opts = {});

/// Greedy cover of `target` by candidates; uncovered leftovers are seeded directly.
/// Boxes must lie inside `target`'s admissible cells, except carved fragments
/// which may end on half-integer coordinates.
std::vector<PixelBox> select_cover(std::vector<PixelBox> candidates, const GrowthRaster& target,
                                   const GenerateOptions& opts = {});

struct DecomposeOptions {
  double robot_radius = 0.34;
  int rho_px = 0;                // 0: ceil(robot_radius / resolution)
  double snap_distance_px = 0.0;  // 0: 2 rho
  bool include_obstacles = true;
  WallOptions walls;  // clearance_px is derived from robot_radius
  GenerateOptions generate;
  bool auto_gain = true;  // min_gain_px = (2 rho)^2
};

struct DecomposeStats {
  int rho_px = 0;
  std::size_t pixels = 0;
  std::size_t wall_count = 0;
  std::size_t snap_count = 0;
  std::size_t candidate_count = 0;
  std::size_t obstacle_count = 0;
  double coverage = 0.0;  // fraction of eroded free space covered
  double seconds = 0.0;
};

struct Decomposition {
  CorridorGraph graph;
  WallExtraction walls;
  SnapGraph snaps;
  std::vector<Face> faces;
  DecomposeStats stats;
};

/// Full map-to-corridors pipeline.
Decomposition decompose(const OccupancyGrid& grid, const DecomposeOptions& opts = {});

/// Pixels of the eroded free space covered by the rectangles, over its total.
double eroded_coverage(const OccupancyGrid& grid, const std::vector<Rectangle>& rects, int rho_px);

}  // namespace corridor
