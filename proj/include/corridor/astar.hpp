#pragma once

// Baseline 8-connected grid A* on the occupancy grid inflated by the robot
// radius, Euclidean heuristic.

#include <cstdint>
#include <vector>

#include "corridor/geometry.hpp"
#include "corridor/grid.hpp"

namespace corridor {

struct GridPath {
  bool found = false;
  std::vector<PixelIndex> cells;
  std::vector<Vec2> points;  // world
  double length = 0.0;       // meters
  std::size_t expanded = 0;
};

class GridAStar {
 public:
  /// Inflates `grid` by ceil(robot_radius / resolution) pixels.
  GridAStar(const OccupancyGrid& grid, double robot_radius);
  /// Uses an already inflated mask (1 = admissible center).
  GridAStar(const OccupancyGrid& grid, std::vector<std::uint8_t> admissible);

  bool admissible(long r, long c) const {
    return r >= 0 && c >= 0 && r < rows_ && c < cols_ &&
           free_[static_cast<std::size_t>(r * cols_ + c)] != 0;
  }
  const std::vector<std::uint8_t>& mask() const { return free_; }

  /// Start and goal snap to their nearest pixel centers. Diagonal steps may not
  /// cut between two blocked orthogonal neighbours.
  GridPath plan(Vec2 start, Vec2 goal) const;

 private:
  const OccupancyGrid* grid_;
  long rows_, cols_;
  std::vector<std::uint8_t> free_;
  // Per-query scratch, reused between calls.
  mutable std::vector<double> g_;
  mutable std::vector<std::int32_t> parent_;
  mutable std::vector<std::uint32_t> stamp_;
  mutable std::vector<std::uint8_t> closed_;
  mutable std::uint32_t query_ = 0;
};

}  // namespace corridor
