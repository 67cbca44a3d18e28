#pragma once

// Snap graph: wall endpoints clustered into corner vertices, gap-closing
// extensions, face classification, obstacle pruning and obtuse-corner
// splitting. Coordinates are continuous pixel coordinates.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corridor/geometry.hpp"
#include "corridor/grid.hpp"
#include "corridor/walls.hpp"

namespace corridor {

class SnapGraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SnapKind { Full, Half, Double, Acute };
enum class SnapSource { Clustered, Extension, ObtuseSplit };

const char* to_string(SnapKind k);
const char* to_string(SnapSource s);

struct SnapPoint {
  int id = -1;
  int node = -1;  // graph vertex; Half sisters share one
  Vec2 position;
  SnapKind kind = SnapKind::Full;
  SnapSource source = SnapSource::Clustered;
  std::vector<int> incident_walls;
  int sister = -1;
  int ray_wall = -1;  // Half: the wall whose normal it casts along (-1: continuation of a hanging end)
  Vec2 ray_dir;       // Half: cast direction
  double interior_angle_deg = 0.0;
  bool unresolved = false;
  bool extended = false;    // Half: ray already cast
  int extension_wall = -1;  // Half: wall inserted by its ray, if any
  bool removed = false;
};

struct GraphWall {
  int id = -1;
  int node_a = -1, node_b = -1;
  Vec2 a, b;
  Vec2 normal;   // inward normal; extensions use the left normal of a->b
  bool extension = false;
  int loop = -1;  // boundary loop of origin (-1 for extensions)
  bool removed = false;
  double length() const { return distance(a, b); }
};

struct GraphNode {
  Vec2 position;
  std::vector<int> walls;
  bool removed = false;
};

struct SnapGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphWall> walls;
  std::vector<SnapPoint> snaps;
  std::vector<Box> obstacle_boxes;  // pixel coordinates, clearance included
  std::vector<int> obstacle_loops;  // boundary loops classified as obstacles
  std::vector<std::string> diagnostics;

  int add_node(Vec2 p);
  int add_wall(int node_a, int node_b, Vec2 normal, bool extension, int loop);
  /// Splits wall `w` at point `p` (on the wall); returns the new node.
  int split_wall(int w, Vec2 p);
  std::vector<int> active_walls_at(int node) const;
  std::size_t active_wall_count() const;
  std::size_t active_snap_count() const;
};

struct EndpointCluster {
  std::vector<int> endpoints;  // 2*wall + (0: p, 1: q)
  Vec2 centroid;
};

/// Single-link clustering of wall endpoints at distance <= d_s (union-find).
std::vector<EndpointCluster> cluster_endpoints(const std::vector<WallLine>& walls, double d_s);
/// Same, over bare points.
std::vector<std::vector<int>> cluster_points(const std::vector<Vec2>& pts, double d_s);

struct ClusterClass {
  SnapKind kind = SnapKind::Full;
  Vec2 position;
  double interior_angle_deg = 0.0;
  bool half_pair = false;
};

/// Classifies a cluster from its incident walls (line intersection, free-side angle).
ClusterClass classify_cluster(const std::vector<WallLine>& walls, const EndpointCluster& cluster);
/// Free-space interior angle at the corner where walls a and b meet at `corner`.
double interior_angle_deg(Vec2 corner, const WallLine& a, Vec2 a_far, const WallLine& b, Vec2 b_far);

/// Builds the snap graph (clusters -> nodes, walls snapped to node positions).
SnapGraph build_snap_graph(const std::vector<WallLine>& walls, double d_s);

struct ExtensionOptions {
  double d_s = 14.0;
  double max_ray = 1e7;
};

/// Casts rays from Half snaps; merges collinear counterparts or inserts extension walls.
void extend_half_snaps(SnapGraph& graph, const ExtensionOptions& opts);

struct Face {
  std::vector<int> nodes;      // cycle, in traversal order
  std::vector<int> walls;      // wall per step
  std::vector<int> forward;    // 1 when traversed a->b
  Vec2 center;
  double score = 0.0;
  double signed_area = 0.0;
  bool obstacle = false;
};

/// Leftmost-turn face enumeration with signed-length scoring. Face 0 is the
/// interior face with the largest score.
std::vector<Face> trace_faces(const SnapGraph& graph);

/// Score of a cycle given per-edge segments and normals (exposed for oracle tests).
double face_score(const std::vector<Vec2>& cycle, const std::vector<Vec2>& edge_normals, Vec2 center);

/// Deletes walls and snaps that bound only obstacle faces; records bounding boxes.
void remove_obstacles(SnapGraph& graph, const std::vector<Face>& faces);

struct ObtuseOptions {
  double angle_eps_deg = 1e-6;
};

/// Splits obtuse Full snaps into Double snaps with two normal-direction extensions.
int resolve_obtuse(SnapGraph& graph, const ObtuseOptions& opts = {});

}  // namespace corridor
