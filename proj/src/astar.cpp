#include "corridor/astar.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "corridor/walls.hpp"

namespace corridor {

GridAStar::GridAStar(const OccupancyGrid& grid, double robot_radius)
    : GridAStar(grid, erode_free(grid.rows(), grid.cols(), grid.cells(),
                                 clearance_pixels(robot_radius, grid.resolution()), true)) {}

GridAStar::GridAStar(const OccupancyGrid& grid, std::vector<std::uint8_t> admissible)
    : grid_(&grid), rows_(static_cast<long>(grid.rows())), cols_(static_cast<long>(grid.cols())),
      free_(std::move(admissible)) {
  const std::size_t n = free_.size();
  g_.assign(n, 0.0);
  parent_.assign(n, -1);
  stamp_.assign(n, 0);
  closed_.assign(n, 0);
}

GridPath GridAStar::plan(Vec2 start, Vec2 goal) const {
  GridPath out;
  const PixelIndex s = grid_->pixel_of(start), t = grid_->pixel_of(goal);
  if (!admissible(s.row, s.col) || !admissible(t.row, t.col)) return out;
  if (++query_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0u);
    query_ = 1;
  }
  const auto idx = [&](long r, long c) { return static_cast<std::size_t>(r * cols_ + c); };
  const auto h = [&](long r, long c) { return std::hypot(static_cast<double>(r - t.row), static_cast<double>(c - t.col)); };
  const auto touch = [&](std::size_t i) {
    if (stamp_[i] != query_) {
      stamp_[i] = query_;
      g_[i] = INFINITY;
      parent_[i] = -1;
      closed_[i] = 0;
    }
  };

  using Entry = std::pair<double, std::int64_t>;  // (f, cell); ties by cell index
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  const std::size_t si = idx(s.row, s.col), ti = idx(t.row, t.col);
  touch(si);
  g_[si] = 0.0;
  open.push({h(s.row, s.col), static_cast<std::int64_t>(si)});
  static constexpr int dr[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dc[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  while (!open.empty()) {
    const auto [f, cell] = open.top();
    open.pop();
    const std::size_t ci = static_cast<std::size_t>(cell);
    if (closed_[ci]) continue;
    closed_[ci] = 1;
    ++out.expanded;
    if (ci == ti) break;
    const long r = cell / cols_, c = cell % cols_;
    for (int k = 0; k < 8; ++k) {
      const long nr = r + dr[k], nc = c + dc[k];
      if (!admissible(nr, nc)) continue;
      if (k >= 4 && (!admissible(r + dr[k], c) || !admissible(r, c + dc[k]))) continue;
      const std::size_t ni = idx(nr, nc);
      touch(ni);
      if (closed_[ni]) continue;
      const double ng = g_[ci] + (k >= 4 ? std::sqrt(2.0) : 1.0);
      if (ng < g_[ni]) {
        g_[ni] = ng;
        parent_[ni] = static_cast<std::int32_t>(ci);
        open.push({ng + h(nr, nc), static_cast<std::int64_t>(ni)});
      }
    }
  }
  if (stamp_[ti] != query_ || !closed_[ti]) return out;
  out.found = true;
  for (std::int64_t i = static_cast<std::int64_t>(ti); i >= 0; i = parent_[static_cast<std::size_t>(i)]) {
    out.cells.push_back({i / cols_, i % cols_});
    if (static_cast<std::size_t>(i) == si) break;
  }
  std::reverse(out.cells.begin(), out.cells.end());
  for (const PixelIndex& p : out.cells) out.points.push_back(grid_->world_of(p));
  out.length = g_[ti] * grid_->resolution();
  return out;
}

}  // namespace corridor
