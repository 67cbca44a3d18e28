#pragma once

// Transition graph over corridor centers and overlap points, penalized
// shortest-path queries and per-corridor traversal directions.

#include <stdexcept>
#include <string>
#include <vector>

#include "corridor/decomposition.hpp"
#include "corridor/geometry.hpp"

namespace corridor {

class PlanningError : public std::runtime_error {
 public:
  PlanningError(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

class NotCovered : public PlanningError {
 public:
  explicit NotCovered(Vec2 p);
  Vec2 point;
};

class Disconnected : public PlanningError {
 public:
  Disconnected(int start_corridor, int goal_corridor);
  int start_corridor, goal_corridor;
};

enum class NodeKind { Center, Centroid, Corner, Start, Goal };
const char* to_string(NodeKind k);

struct TransitionNode {
  Vec2 position;
  NodeKind kind = NodeKind::Center;
  std::vector<int> owners;  // corridors containing the point, ascending
};

struct TransitionEdge {
  int a = -1, b = -1;
  double length = 0.0;
  int corridor = -1;  // witness corridor containing the segment
};

struct TransitionGraph {
  std::vector<TransitionNode> nodes;
  std::vector<TransitionEdge> edges;
  std::vector<std::vector<int>> adjacency;      // node -> edge ids
  std::vector<std::vector<int>> corridor_nodes;  // corridor -> node ids
};

TransitionGraph build_transition_graph(const CorridorGraph& cg);

/// Corridors containing p, ascending id.
std::vector<int> containing_corridors(const CorridorGraph& cg, Vec2 p);

struct DirectedCorridor {
  int corridor_id = -1;
  double direction_deg = 0.0;  // one of 0, 90, 180, 270 (relative to the world x axis)
  Vec2 direction;              // unit
  Vec2 entry, exit;            // chord used to pick the direction
};

struct RoutePlan {
  std::vector<Vec2> waypoints;          // p_s, t_1, ..., p_g
  std::vector<int> segment_corridors;   // corridor containing waypoint i -> i+1
  std::vector<int> sequence;            // corridor ids, no immediate repeats
  std::vector<DirectedCorridor> directed;
  double cost = 0.0;                    // penalized length found by the search
  int transitions = 0;                  // corridor changes along the searched path
  bool direct = false;
};

struct RouteOptions {
  double lambda = 0.5;
  double ratio_threshold = 2.0;
};

/// Raw search result before redundant-transition removal.
struct SearchPath {
  std::vector<Vec2> points;
  std::vector<int> corridors;  // per segment
  double cost = 0.0;
  int transitions = 0;
};

SearchPath search_route(const TransitionGraph& tg, const CorridorGraph& cg, Vec2 start, Vec2 goal, double lambda);

/// Greedy forward pass dropping waypoints whose neighbours share a corridor.
SearchPath remove_redundant(const SearchPath& path, const CorridorGraph& cg);

RoutePlan plan_route(const TransitionGraph& tg, const CorridorGraph& cg, Vec2 start, Vec2 goal,
                     const RouteOptions& opts = {});

/// Axis-snapped direction of a chord inside a corridor.
DirectedCorridor direction_for(const Rectangle& r, Vec2 entry, Vec2 exit, double ratio_threshold);

std::vector<DirectedCorridor> assign_directions(const RoutePlan& plan, const CorridorGraph& cg,
                                                double ratio_threshold);

}  // namespace corridor
