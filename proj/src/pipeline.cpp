#include "corridor/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

namespace corridor {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }

std::string fmt(double v, int prec = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

}  // namespace

Planner::Planner(CorridorGraph cg, Config config)
    : cg_(std::move(cg)), tg_(build_transition_graph(cg_)), config_(std::move(config)) {}

PlanResult Planner::plan(Pose start, Pose goal) const {
  PlanResult r;
  const auto t0 = Clock::now();
  r.route = plan_route(tg_, cg_, start.position(), goal.position(), config_.route);
  r.route_ms = ms_since(t0);
  const auto t1 = Clock::now();
  try {
    r.trajectory = synthesize(r.route.directed, cg_, start, goal, config_.limits, config_.synth);
  } catch (const PlanningError&) {
    if (!config_.waypoint_fallback) throw;
    r.trajectory = waypoint_trajectory(r.route.waypoints, start, goal, config_.limits, config_.synth.free_goal_heading);
    r.fallback = true;
  }
  r.ap_ms = ms_since(t1);
  r.total_ms = ms_since(t0);
  return r;
}

std::vector<Rectangle> Planner::sequence_rectangles(const RoutePlan& plan) const {
  std::vector<Rectangle> out;
  for (const DirectedCorridor& d : plan.directed) out.push_back(cg_.rects[static_cast<std::size_t>(d.corridor_id)]);
  return out;
}

const char* to_string(Band b) {
  switch (b) {
    case Band::Short: return "SHORT";
    case Band::Medium: return "MEDIUM";
    case Band::Long: return "LONG";
    case Band::Other: return "OTHER";
  }
  return "?";
}

Band band_of(double len) {
  if (len >= 2.0 && len < 10.0) return Band::Short;
  if (len >= 10.0 && len < 25.0) return Band::Medium;
  if (len >= 25.0 && len <= 41.0) return Band::Long;
  return Band::Other;
}

std::vector<Query> generate_queries(const Planner& planner, std::uint64_t seed, int per_band, int max_attempts) {
  const CorridorGraph& cg = planner.corridors();
  std::vector<Query> out;
  if (cg.rects.empty() || per_band <= 0) return out;
  std::mt19937_64 rng(seed);
  std::vector<double> areas;
  for (const Rectangle& r : cg.rects) areas.push_back(r.area());
  std::discrete_distribution<std::size_t> pick(areas.begin(), areas.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double margin = 0.3;
  const auto point = [&]() -> Vec2 {
    const Rectangle& r = cg.rects[pick(rng)];
    const double hw = std::max(0.0, 0.5 * r.dims.x - margin), hh = std::max(0.0, 0.5 * r.dims.y - margin);
    return r.to_world({(2.0 * unit(rng) - 1.0) * hw, (2.0 * unit(rng) - 1.0) * hh});
  };
  int counts[3] = {0, 0, 0};
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    if (counts[0] >= per_band && counts[1] >= per_band && counts[2] >= per_band) break;
    Query q;
    const Vec2 a = point(), b = point();
    q.start = {a.x, a.y, (2.0 * unit(rng) - 1.0) * kPi};
    q.goal = {b.x, b.y, (2.0 * unit(rng) - 1.0) * kPi};
    const double crow = distance(a, b);
    if (crow > 41.0 || crow < 1.0) continue;
    try {
      q.path_length = search_route(planner.transitions(), cg, a, b, 0.0).cost;
    } catch (const PlanningError&) {
      continue;
    }
    q.band = band_of(q.path_length);
    if (q.band == Band::Other) continue;
    int& c = counts[static_cast<int>(q.band)];
    if (c >= per_band) continue;
    ++c;
    out.push_back(q);
  }
  return out;
}

Timing timing_of(std::vector<double> s) {
  Timing t;
  if (s.empty()) return t;
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  t.median = n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(n);
  for (double v : s) t.variance += (v - mean) * (v - mean);
  t.variance /= static_cast<double>(n);
  return t;
}

BenchRecord bench_map(const std::string& id, const OccupancyGrid& grid, const BenchOptions& opts) {
  BenchRecord rec;
  rec.map_id = id;
  rec.pixels = grid.size();
  const int repeats = std::max(1, opts.repeats);
  std::vector<double> dt;
  Decomposition d;
  for (int i = 0; i < repeats; ++i) {
    d = decompose(grid, opts.config.decompose);
    dt.push_back(d.stats.seconds * 1e3);
  }
  rec.decompose_ms = timing_of(dt);
  rec.rectangles = d.graph.rects.size();
  const Planner planner(d.graph, opts.config);
  rec.transition_nodes = planner.transitions().nodes.size();
  rec.compression = rec.transition_nodes ? static_cast<double>(rec.pixels) / static_cast<double>(rec.transition_nodes) : 0.0;

  const GridAStar astar(grid, opts.config.decompose.robot_radius);
  for (const Query& q : generate_queries(planner, opts.seed, opts.queries_per_band)) {
    QueryRecord qr;
    qr.band = q.band;
    qr.path_length = q.path_length;
    std::vector<double> fw, ap, as;
    try {
      for (int i = 0; i < repeats; ++i) {
        const PlanResult r = planner.plan(q.start, q.goal);
        fw.push_back(r.total_ms);
        ap.push_back(r.ap_ms);
        qr.corridors = static_cast<int>(r.route.sequence.size());
        qr.fallback = r.fallback;
      }
      qr.ok = true;
    } catch (const PlanningError& e) {
      qr.error = e.what();
    }
    for (int i = 0; i < repeats; ++i) {
      const auto t0 = Clock::now();
      const GridPath p = astar.plan(q.start.position(), q.goal.position());
      as.push_back(ms_since(t0));
      (void)p;
    }
    qr.framework_ms = timing_of(fw);
    qr.ap_ms = timing_of(ap);
    qr.astar_ms = timing_of(as);
    rec.queries.push_back(qr);
  }
  return rec;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NotCovered*>(&e)) return 2;
  if (dynamic_cast<const Disconnected*>(&e)) return 3;
  if (dynamic_cast<const PlanningError*>(&e)) return 4;
  return 1;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream o;
  o << "map_id,map_pixels,rectangles,transition_nodes,compression,decompose_ms,decompose_var,band,path_length_m,"
       "corridors,ok,fallback,framework_ms,framework_var,ap_ms,ap_var,astar_ms,astar_var\n";
  for (const BenchRecord& r : records) {
    const std::string head = r.map_id + "," + std::to_string(r.pixels) + "," + std::to_string(r.rectangles) + "," +
                             std::to_string(r.transition_nodes) + "," + fmt(r.compression, 1) + "," +
                             fmt(r.decompose_ms.median) + "," + fmt(r.decompose_ms.variance, 4);
    if (r.queries.empty()) o << head << ",,,,,,,,,,,\n";
    for (const QueryRecord& q : r.queries)
      o << head << ',' << to_string(q.band) << ',' << fmt(q.path_length) << ',' << q.corridors << ',' << (q.ok ? 1 : 0)
        << ',' << (q.fallback ? 1 : 0) << ',' << fmt(q.framework_ms.median) << ',' << fmt(q.framework_ms.variance, 5) << ',' << fmt(q.ap_ms.median)
        << ',' << fmt(q.ap_ms.variance, 5) << ',' << fmt(q.astar_ms.median) << ',' << fmt(q.astar_ms.variance, 5)
        << '\n';
  }
  return o.str();
}

std::string bench_summary(const std::vector<BenchRecord>& records) {
  std::map<int, std::vector<double>> fw, ap, as;
  std::map<int, int> failed;
  for (const BenchRecord& r : records)
    for (const QueryRecord& q : r.queries) {
      const int b = static_cast<int>(q.band);
      if (!q.ok) {
        ++failed[b];
        continue;
      }
      fw[b].push_back(q.framework_ms.median);
      ap[b].push_back(q.ap_ms.median);
      as[b].push_back(q.astar_ms.median);
    }
  std::ostringstream o;
  o << "band      n   framework_ms   ap_ms   astar_ms   speedup  failed\n";
  for (int b = 0; b < 3; ++b) {
    const double f = timing_of(fw[b]).median, a = timing_of(ap[b]).median, s = timing_of(as[b]).median;
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %3zu %14.3f %7.3f %10.3f %9.2f %7d\n", to_string(static_cast<Band>(b)),
                  fw[b].size(), f, a, s, f > 0 ? s / f : 0.0, failed[b]);
    o << line;
  }
  for (const BenchRecord& r : records) {
    char line[200];
    std::snprintf(line, sizeof line, "%-12s px=%zu R=%zu V_T=%zu compression=%.0f:1 decompose=%.2f ms\n",
                  r.map_id.c_str(), r.pixels, r.rectangles, r.transition_nodes, r.compression, r.decompose_ms.median);
    o << line;
  }
  return o.str();
}

}  // namespace corridor
