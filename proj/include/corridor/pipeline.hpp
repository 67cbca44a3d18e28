#pragma once

// End-to-end planning over a decomposed map, query generation and the
// benchmark harness comparing against grid A*.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corridor/analytic.hpp"
#include "corridor/artifacts.hpp"
#include "corridor/astar.hpp"
#include "corridor/decomposition.hpp"
#include "corridor/fixtures.hpp"
#include "corridor/route.hpp"

namespace corridor {

struct PlanResult {
  RoutePlan route;
  Trajectory trajectory;
  double route_ms = 0.0;
  double ap_ms = 0.0;
  double total_ms = 0.0;
  bool fallback = false;  // analytic synthesis failed; waypoint trajectory used
};

/// Shared, read-only planning context for one map.
class Planner {
 public:
  Planner(CorridorGraph cg, Config config);
  const CorridorGraph& corridors() const { return cg_; }
  const TransitionGraph& transitions() const { return tg_; }
  const Config& config() const { return config_; }
  /// Route then trajectory; planning errors propagate.
  PlanResult plan(Pose start, Pose goal) const;
  /// Corridor rectangles visited by the plan, in order.
  std::vector<Rectangle> sequence_rectangles(const RoutePlan& plan) const;

 private:
  CorridorGraph cg_;
  TransitionGraph tg_;
  Config config_;
};

enum class Band { Short, Medium, Long, Other };
const char* to_string(Band b);
/// SHORT 2-9 m, MEDIUM 10-24 m, LONG 25-41 m of path length.
Band band_of(double path_length);

struct Query {
  Pose start, goal;
  double path_length = 0.0;  // shortest transition-graph route, meters
  Band band = Band::Other;
};

/// Random start/goal poses at least 0.3 m inside a corridor, binned into
/// length bands by their shortest route. Up to `per_band` per band.
std::vector<Query> generate_queries(const Planner& planner, std::uint64_t seed, int per_band, int max_attempts = 4000);

struct Timing {
  double median = 0.0;
  double variance = 0.0;
};
Timing timing_of(std::vector<double> samples_ms);

struct QueryRecord {
  Band band = Band::Other;
  double path_length = 0.0;
  int corridors = 0;
  bool ok = false;
  bool fallback = false;
  std::string error;
  Timing framework_ms, ap_ms, astar_ms;
};

struct BenchRecord {
  std::string map_id;
  std::size_t pixels = 0;
  std::size_t rectangles = 0;
  std::size_t transition_nodes = 0;
  double compression = 0.0;
  Timing decompose_ms;
  std::vector<QueryRecord> queries;
};

struct BenchOptions {
  int repeats = 5;
  int queries_per_band = 4;
  std::uint64_t seed = 1;
  Config config;
};

BenchRecord bench_map(const std::string& id, const OccupancyGrid& grid, const BenchOptions& opts);

/// Process exit status for an error: 2 NotCovered, 3 Disconnected, 4 other
/// planning failures, 1 anything else.
int exit_code_for(const std::exception& e);

std::string bench_csv(const std::vector<BenchRecord>& records);
/// Per-band medians of framework, AP and A* times over all maps.
std::string bench_summary(const std::vector<BenchRecord>& records);

}  // namespace corridor
