// corridor_cli: decompose maps, plan queries, render SVGs, run benchmarks and
// write fixture maps.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corridor/artifacts.hpp"
#include "corridor/fixtures.hpp"
#include "corridor/pipeline.hpp"
#include "corridor/render.hpp"

namespace fs = std::filesystem;
using namespace corridor;

namespace {

Pose parse_pose(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    v.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
  }
  if (v.size() != 3) throw std::invalid_argument("pose must be x,y,deg: '" + text + "'");
  return {v[0], v[1], deg2rad(v[2])};
}

MapMeta meta_for(const fs::path& map, const std::string& meta) {
  if (!meta.empty()) return load_map_meta(meta);
  fs::path side = map;
  side.replace_extension(".json");
  if (fs::exists(side)) return load_map_meta(side);
  return MapMeta{};
}

Config config_for(const std::string& path) { return path.empty() ? Config{} : load_config(path); }

struct DecomposeArgs {
  std::string map, meta, config, out = "out";
  bool ignore_obstacles = false, debug = false;
};

int run_decompose(const DecomposeArgs& a) {
  Config cfg = config_for(a.config);
  if (a.ignore_obstacles) cfg.decompose.include_obstacles = false;
  const OccupancyGrid grid = load_occupancy_grid(a.map, meta_for(a.map, a.meta));
  const Decomposition d = decompose(grid, cfg.decompose);
  const TransitionGraph tg = build_transition_graph(d.graph);
  const fs::path out(a.out);
  write_text(out / "corridors.json", corridors_json(d.graph));
  const std::string stats = stats_json(d.stats, d.graph, tg.nodes.size());
  write_text(out / "stats.json", stats);
  if (a.debug) {
    write_text(out / "walls.json", walls_json(d.walls));
    write_text(out / "snaps.json", snaps_json(d.snaps));
    write_text(out / "faces.json", faces_json(d.faces));
    for (const std::string& msg : d.snaps.diagnostics) std::cerr << "snap graph: " << msg << '\n';
  }
  std::cout << stats;
  return 0;
}

struct PlanArgs {
  std::string corridors, start, goal, config, out, map, meta;
  bool svg = false, free_goal_heading = false;
};

int run_plan(const PlanArgs& a) {
  Config cfg = config_for(a.config);
  if (a.free_goal_heading) cfg.synth.free_goal_heading = true;
  const Pose start = parse_pose(a.start), goal = parse_pose(a.goal);
  const Planner planner(load_corridors(a.corridors), cfg);
  const PlanResult r = planner.plan(start, goal);
  const fs::path out = a.out.empty() ? fs::path(a.corridors).parent_path() : fs::path(a.out);
  write_text(out / "route.json", route_json(r.route));
  write_text(out / "trajectory.json", trajectory_json(r.trajectory, cfg.limits, cfg.sample_dt));
  if (a.svg) {
    std::optional<OccupancyGrid> grid;
    if (!a.map.empty()) grid = load_occupancy_grid(a.map, meta_for(a.map, a.meta));
    RenderInput in;
    in.grid = grid ? &*grid : nullptr;
    in.corridors = &planner.corridors();
    in.transitions = &planner.transitions();
    in.waypoints = &r.route.waypoints;
    in.trajectory = &r.trajectory;
    in.limits = cfg.limits;
    write_text(out / "plan.svg", render_svg(in));
  }
  std::printf("corridors=%zu waypoints=%zu primitives=%zu total_time=%.4f s\n", r.route.sequence.size(),
              r.route.waypoints.size(), r.trajectory.primitives.size(), r.trajectory.total_time);
  std::printf("route_ms=%.3f ap_ms=%.3f total_ms=%.3f\n", r.route_ms, r.ap_ms, r.total_ms);
  return 0;
}

struct RenderArgs {
  std::string corridors, route, trajectory, map, meta, out = "render.svg";
};

int run_render(const RenderArgs& a) {
  const CorridorGraph cg = load_corridors(a.corridors);
  const TransitionGraph tg = build_transition_graph(cg);
  std::optional<OccupancyGrid> grid;
  if (!a.map.empty()) grid = load_occupancy_grid(a.map, meta_for(a.map, a.meta));
  std::optional<RouteArtifact> route;
  if (!a.route.empty()) route = parse_route_json(read_text(a.route));
  std::optional<Trajectory> traj;
  Limits lim;
  if (!a.trajectory.empty()) traj = parse_trajectory_json(read_text(a.trajectory), &lim);
  RenderInput in;
  in.grid = grid ? &*grid : nullptr;
  in.corridors = &cg;
  in.transitions = &tg;
  in.waypoints = route ? &route->waypoints : nullptr;
  in.trajectory = traj ? &*traj : nullptr;
  in.limits = lim;
  write_text(a.out, render_svg(in));
  return 0;
}

struct BenchArgs {
  std::string fixtures, config, out = "bench.csv";
  int repeats = 5, per_band = 4;
  std::uint64_t seed = 1;
};

int run_bench(const BenchArgs& a) {
  BenchOptions opts;
  opts.repeats = a.repeats;
  opts.queries_per_band = a.per_band;
  opts.seed = a.seed;
  opts.config = config_for(a.config);
  const std::vector<FixtureSpec> specs = a.fixtures.empty() ? standard_fixtures() : load_fixture_spec(a.fixtures).maps;
  std::vector<BenchRecord> records;
  for (const FixtureSpec& s : specs) {
    const Fixture f = generate_fixture(s, a.seed);
    records.push_back(bench_map(s.id, fixture_grid(f), opts));
  }
  write_text(a.out, bench_csv(records));
  std::cout << bench_summary(records);
  return 0;
}

struct FixtureArgs {
  std::string spec, out = "maps";
  std::uint64_t seed = 1;
};

int run_fixtures(const FixtureArgs& a) {
  const std::vector<FixtureSpec> specs = a.spec.empty() ? standard_fixtures() : load_fixture_spec(a.spec).maps;
  for (const FixtureSpec& s : specs) {
    const Fixture f = generate_fixture(s, a.seed);
    write_fixture(f, a.out);
    std::printf("%s %zux%zu rooms=%d doors=%d\n", s.id.c_str(), f.image.cols, f.image.rows, f.expected_rooms,
                f.expected_doors);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corridor decomposition and analytic trajectory planning"};
  app.require_subcommand(1);

  DecomposeArgs da;
  CLI::App* dec = app.add_subcommand("decompose", "Decompose an occupancy map into corridors");
  dec->add_option("map", da.map, "PGM or PNG map")->required()->check(CLI::ExistingFile);
  dec->add_option("--meta", da.meta, "Map metadata JSON (default: <map>.json if present)");
  dec->add_option("--config", da.config, "Config JSON");
  dec->add_flag("--ignore-obstacles", da.ignore_obstacles, "Keep interior obstacles out of the snap graph");
  dec->add_flag("--debug", da.debug, "Also write walls.json, snaps.json and faces.json");
  dec->add_option("-o,--out", da.out, "Output directory");

  PlanArgs pa;
  CLI::App* plan = app.add_subcommand("plan", "Plan a trajectory between two poses");
  plan->add_option("corridors", pa.corridors, "corridors.json")->required()->check(CLI::ExistingFile);
  plan->add_option("--start", pa.start, "x,y,deg")->required();
  plan->add_option("--goal", pa.goal, "x,y,deg")->required();
  plan->add_option("--config", pa.config, "Config JSON");
  plan->add_flag("--svg", pa.svg, "Write plan.svg");
  plan->add_flag("--free-goal-heading", pa.free_goal_heading, "Do not rotate into the goal heading");
  plan->add_option("-o,--out", pa.out, "Output directory (default: next to corridors.json)");
  plan->add_option("--map", pa.map, "Map drawn under the SVG");
  plan->add_option("--meta", pa.meta, "Map metadata JSON");

  RenderArgs ra;
  CLI::App* ren = app.add_subcommand("render", "Render artifacts to SVG");
  ren->add_option("--corridors", ra.corridors, "corridors.json")->required()->check(CLI::ExistingFile);
  ren->add_option("--route", ra.route, "route.json");
  ren->add_option("--trajectory", ra.trajectory, "trajectory.json");
  ren->add_option("--map", ra.map, "Map drawn underneath");
  ren->add_option("--meta", ra.meta, "Map metadata JSON");
  ren->add_option("-o,--out", ra.out, "Output SVG");

  BenchArgs ba;
  CLI::App* bench = app.add_subcommand("bench", "Benchmark against grid A*");
  bench->add_option("--fixtures", ba.fixtures, "Fixture spec JSON (default: built-in set)");
  bench->add_option("--repeats", ba.repeats, "Timing repeats per measurement")->check(CLI::PositiveNumber);
  bench->add_option("--queries-per-band", ba.per_band, "Queries per length band and map");
  bench->add_option("--seed", ba.seed, "Fixture and query seed");
  bench->add_option("--config", ba.config, "Config JSON");
  bench->add_option("-o,--out", ba.out, "CSV output");

  FixtureArgs fa;
  CLI::App* fix = app.add_subcommand("fixtures", "Write synthetic floor-plan maps");
  fix->add_option("--seed", fa.seed, "Generator seed");
  fix->add_option("--spec", fa.spec, "Fixture spec JSON (default: built-in set)");
  fix->add_option("-o,--out", fa.out, "Output directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*dec) return run_decompose(da);
    if (*plan) return run_plan(pa);
    if (*ren) return run_render(ra);
    if (*bench) return run_bench(ba);
    if (*fix) return run_fixtures(fa);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 1;
}
