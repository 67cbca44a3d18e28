#pragma once

// JSON artifacts (corridors, route, trajectory, debug dumps) and the run
// configuration. Serialization is deterministic: the same inputs give the
// same bytes.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "corridor/analytic.hpp"
#include "corridor/decomposition.hpp"
#include "corridor/route.hpp"

namespace corridor {

class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every tunable of the pipeline. Missing keys keep their defaults.
struct Config {
  DecomposeOptions decompose;
  RouteOptions route;
  Limits limits;
  SynthOptions synth;
  double sample_dt = 0.05;  // trajectory.json sample period, seconds
  bool waypoint_fallback = true;  // rotate-and-translate along the route when synthesis fails
};

Config parse_config(const std::string& json_text);
Config load_config(const std::filesystem::path& path);
std::string config_json(const Config& c);

std::string corridors_json(const CorridorGraph& g);
/// Rebuilds the graph (rectangles, edges, adjacency) from corridors.json.
CorridorGraph parse_corridors_json(const std::string& json_text);
CorridorGraph load_corridors(const std::filesystem::path& path);

std::string route_json(const RoutePlan& plan);

struct RouteArtifact {
  std::vector<Vec2> waypoints;
  std::vector<DirectedCorridor> sequence;  // corridor_id and direction only
  double cost = 0.0;
  int transitions = 0;
};
RouteArtifact parse_route_json(const std::string& json_text);

std::string trajectory_json(const Trajectory& traj, const Limits& lim, double sample_dt);
/// Primitives and limits from trajectory.json; start/goal taken from the ends.
Trajectory parse_trajectory_json(const std::string& json_text, Limits* lim = nullptr);

std::string walls_json(const WallExtraction& w);
std::string snaps_json(const SnapGraph& g);
std::string faces_json(const std::vector<Face>& faces);
std::string stats_json(const DecomposeStats& s, const CorridorGraph& g, std::size_t transition_nodes);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace corridor
