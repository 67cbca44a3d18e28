#pragma once

// Layered SVG: occupancy grid, corridors, transition nodes, waypoints and the
// trajectory polyline.

#include <string>
#include <vector>

#include "corridor/analytic.hpp"
#include "corridor/decomposition.hpp"
#include "corridor/grid.hpp"
#include "corridor/route.hpp"

namespace corridor {

/// Polyline through the trajectory; arcs are subdivided so the chord error
/// stays at or below `chord_tol` meters. Endpoints are the exact primitive ends.
std::vector<Vec2> trajectory_polyline(const Trajectory& traj, const Limits& lim, double chord_tol = 1e-3);

struct RenderInput {
  const OccupancyGrid* grid = nullptr;
  const CorridorGraph* corridors = nullptr;
  const TransitionGraph* transitions = nullptr;
  const std::vector<Vec2>* waypoints = nullptr;
  const Trajectory* trajectory = nullptr;
  Limits limits;
  double pixels_per_meter = 40.0;
  double chord_tol = 1e-3;
};

std::string render_svg(const RenderInput& in);

}  // namespace corridor
