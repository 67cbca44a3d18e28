#include "corridor/artifacts.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace corridor {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

ojson pt(Vec2 p) { return ojson::array({p.x, p.y}); }

Vec2 to_vec(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ArtifactError("expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

ojson polygon(const Polygon& poly) {
  ojson a = ojson::array();
  for (Vec2 p : poly) a.push_back(pt(p));
  return a;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ArtifactError(std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Config parse_config(const std::string& text) {
  const json j = parse(text);
  Config c;
  try {
    DecomposeOptions& d = c.decompose;
    get_if(j, "robot_radius", d.robot_radius);
    get_if(j, "rho_px", d.rho_px);
    get_if(j, "snap_distance_px", d.snap_distance_px);
    get_if(j, "include_obstacles", d.include_obstacles);
    get_if(j, "wall_min_length_px", d.walls.detect.min_length);
    get_if(j, "simplify_tolerance_px", d.walls.detect.simplify_tolerance);
    get_if(j, "straighten_tolerance_deg", d.walls.straighten.tolerance_deg);
    get_if(j, "orientation_gap_deg", d.walls.straighten.cluster_gap_deg);
    get_if(j, "normal_samples", d.walls.normal.n_samples);
    get_if(j, "normal_probe_px", d.walls.normal.probe);
    if (j.contains("min_gain_px")) {
      d.generate.min_gain_px = j.at("min_gain_px").get<double>();
      d.auto_gain = false;
    }
    get_if(j, "seed_search_px", d.generate.seed_search);
    get_if(j, "lambda", c.route.lambda);
    get_if(j, "ratio_threshold", c.route.ratio_threshold);
    get_if(j, "v_max", c.limits.v_max);
    get_if(j, "omega_max", c.limits.omega_max);
    get_if(j, "free_goal_heading", c.synth.free_goal_heading);
    get_if(j, "eliminate_crossings", c.synth.eliminate);
    get_if(j, "sample_dt", c.sample_dt);
    get_if(j, "waypoint_fallback", c.waypoint_fallback);
  } catch (const json::exception& e) {
    throw ArtifactError(std::string("bad config value: ") + e.what());
  }
  if (c.decompose.robot_radius <= 0.0) throw ArtifactError("robot_radius must be positive");
  if (c.route.lambda < 0.0) throw ArtifactError("lambda must be non-negative");
  if (c.route.ratio_threshold <= 1.0) throw ArtifactError("ratio_threshold must exceed 1");
  if (c.limits.v_max <= 0.0 || c.limits.omega_max <= 0.0) throw ArtifactError("limits must be positive");
  if (c.sample_dt <= 0.0) throw ArtifactError("sample_dt must be positive");
  return c;
}

Config load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

std::string config_json(const Config& c) {
  const DecomposeOptions& d = c.decompose;
  ojson j;
  j["robot_radius"] = d.robot_radius;
  j["rho_px"] = d.rho_px;
  j["snap_distance_px"] = d.snap_distance_px;
  j["include_obstacles"] = d.include_obstacles;
  j["wall_min_length_px"] = d.walls.detect.min_length;
  j["simplify_tolerance_px"] = d.walls.detect.simplify_tolerance;
  j["straighten_tolerance_deg"] = d.walls.straighten.tolerance_deg;
  j["orientation_gap_deg"] = d.walls.straighten.cluster_gap_deg;
  j["normal_samples"] = d.walls.normal.n_samples;
  j["normal_probe_px"] = d.walls.normal.probe;
  if (!d.auto_gain) j["min_gain_px"] = d.generate.min_gain_px;
  j["seed_search_px"] = d.generate.seed_search;
  j["lambda"] = c.route.lambda;
  j["ratio_threshold"] = c.route.ratio_threshold;
  j["v_max"] = c.limits.v_max;
  j["omega_max"] = c.limits.omega_max;
  j["free_goal_heading"] = c.synth.free_goal_heading;
  j["eliminate_crossings"] = c.synth.eliminate;
  j["sample_dt"] = c.sample_dt;
  j["waypoint_fallback"] = c.waypoint_fallback;
  return j.dump(2) + "\n";
}

std::string corridors_json(const CorridorGraph& g) {
  ojson j;
  ojson rects = ojson::array();
  for (const Rectangle& r : g.rects) {
    ojson o;
    o["id"] = r.id;
    o["center"] = pt(r.center);
    o["dims"] = pt(r.dims);
    o["angle"] = r.angle;
    rects.push_back(o);
  }
  ojson edges = ojson::array();
  for (const CorridorEdge& e : g.edges) {
    ojson o;
    o["i"] = e.i;
    o["j"] = e.j;
    o["polygon"] = polygon(e.polygon);
    if (e.shared_edge) o["shared_edge"] = true;
    edges.push_back(o);
  }
  j["rectangles"] = rects;
  j["edges"] = edges;
  return j.dump(2) + "\n";
}

CorridorGraph parse_corridors_json(const std::string& text) {
  const json j = parse(text);
  CorridorGraph g;
  try {
    for (const json& o : j.at("rectangles")) {
      Rectangle r;
      r.id = o.at("id").get<int>();
      r.center = to_vec(o.at("center"));
      r.dims = to_vec(o.at("dims"));
      r.angle = o.value("angle", 0.0);
      if (r.id != static_cast<int>(g.rects.size())) throw ArtifactError("rectangle ids must be 0..n-1 in order");
      g.rects.push_back(r);
    }
    g.adjacency.assign(g.rects.size(), {});
    for (const json& o : j.at("edges")) {
      CorridorEdge e;
      e.i = o.at("i").get<int>();
      e.j = o.at("j").get<int>();
      const int n = static_cast<int>(g.rects.size());
      if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n || e.i == e.j) throw ArtifactError("edge refers to a missing rectangle");
      if (e.i > e.j) std::swap(e.i, e.j);
      for (const json& p : o.at("polygon")) e.polygon.push_back(to_vec(p));
      e.shared_edge = o.value("shared_edge", false);
      const int id = static_cast<int>(g.edges.size());
      g.adjacency[static_cast<std::size_t>(e.i)].push_back(id);
      g.adjacency[static_cast<std::size_t>(e.j)].push_back(id);
      g.edges.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw ArtifactError(std::string("bad corridors file: ") + e.what());
  }
  return g;
}

CorridorGraph load_corridors(const std::filesystem::path& path) { return parse_corridors_json(read_text(path)); }

std::string route_json(const RoutePlan& plan) {
  ojson j;
  ojson w = ojson::array();
  for (Vec2 p : plan.waypoints) w.push_back(pt(p));
  ojson seq = ojson::array();
  for (const DirectedCorridor& d : plan.directed) {
    ojson o;
    o["corridor_id"] = d.corridor_id;
    o["direction_deg"] = d.direction_deg;
    seq.push_back(o);
  }
  j["waypoints"] = w;
  j["sequence"] = seq;
  j["cost"] = plan.cost;
  j["transitions"] = plan.transitions;
  return j.dump(2) + "\n";
}

RouteArtifact parse_route_json(const std::string& text) {
  const json j = parse(text);
  RouteArtifact r;
  try {
    for (const json& p : j.at("waypoints")) r.waypoints.push_back(to_vec(p));
    for (const json& o : j.at("sequence")) {
      DirectedCorridor d;
      d.corridor_id = o.at("corridor_id").get<int>();
      d.direction_deg = o.at("direction_deg").get<double>();
      d.direction = unit_from_angle(deg2rad(d.direction_deg));
      r.sequence.push_back(d);
    }
    r.cost = j.value("cost", 0.0);
    r.transitions = j.value("transitions", 0);
  } catch (const json::exception& e) {
    throw ArtifactError(std::string("bad route file: ") + e.what());
  }
  return r;
}

std::string trajectory_json(const Trajectory& traj, const Limits& lim, double sample_dt) {
  ojson j;
  ojson prims = ojson::array();
  for (const Primitive& p : traj.primitives) {
    ojson o;
    o["kind"] = to_string(p.kind);
    o["sign"] = p.sign;
    o["duration"] = p.duration;
    o["start"] = ojson::array({p.start.x, p.start.y, p.start.theta});
    ojson params;
    switch (p.kind) {
      case PrimKind::T:
        params["swept"] = p.swept;
        break;
      case PrimKind::C:
        params["center"] = pt(p.center);
        params["swept"] = p.swept;
        params["length"] = p.length;
        break;
      case PrimKind::S:
        params["length"] = p.length;
        break;
    }
    o["params"] = params;
    prims.push_back(o);
  }
  j["primitives"] = prims;
  j["total_time"] = traj.total_time;
  j["limits"] = {{"v_max", lim.v_max}, {"omega_max", lim.omega_max}};
  ojson samples = ojson::array();
  for (const Sample& s : sample(traj, lim, sample_dt))
    samples.push_back(ojson::array({s.t, s.x, s.y, s.theta, s.v, s.omega}));
  j["samples"] = samples;
  return j.dump(1) + "\n";
}

Trajectory parse_trajectory_json(const std::string& text, Limits* lim_out) {
  const json j = parse(text);
  Trajectory t;
  Limits lim;
  try {
    if (j.contains("limits")) {
      lim.v_max = j["limits"].value("v_max", lim.v_max);
      lim.omega_max = j["limits"].value("omega_max", lim.omega_max);
    }
    for (const json& o : j.at("primitives")) {
      Primitive p;
      const std::string kind = o.at("kind").get<std::string>();
      if (kind == "T") p.kind = PrimKind::T;
      else if (kind == "C") p.kind = PrimKind::C;
      else if (kind == "S") p.kind = PrimKind::S;
      else throw ArtifactError("unknown primitive kind " + kind);
      p.sign = o.at("sign").get<int>();
      p.duration = o.at("duration").get<double>();
      const json& s = o.at("start");
      p.start = {s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>()};
      const json& params = o.value("params", json::object());
      p.swept = params.value("swept", 0.0);
      p.length = params.value("length", 0.0);
      if (params.contains("center")) p.center = to_vec(params["center"]);
      t.primitives.push_back(p);
    }
    t.total_time = j.value("total_time", 0.0);
  } catch (const json::exception& e) {
    throw ArtifactError(std::string("bad trajectory file: ") + e.what());
  }
  if (!t.primitives.empty()) {
    t.start = t.primitives.front().start;
    t.goal = t.primitives.back().end(lim);
  }
  if (lim_out) *lim_out = lim;
  return t;
}

std::string walls_json(const WallExtraction& w) {
  ojson walls = ojson::array();
  for (const WallLine& l : w.walls) {
    ojson o;
    o["p"] = pt(l.p);
    o["q"] = pt(l.q);
    o["normal"] = pt(l.normal);
    o["angle_deg"] = l.angle_deg;
    o["aligned_p"] = pt(l.aligned_p);
    o["aligned_q"] = pt(l.aligned_q);
    o["loop"] = l.loop;
    walls.push_back(o);
  }
  return walls.dump(1) + "\n";
}

std::string snaps_json(const SnapGraph& g) {
  ojson j;
  ojson snaps = ojson::array();
  for (const SnapPoint& s : g.snaps) {
    if (s.removed) continue;
    ojson o;
    o["id"] = s.id;
    o["position"] = pt(s.position);
    o["kind"] = to_string(s.kind);
    o["source"] = to_string(s.source);
    o["walls"] = s.incident_walls;
    o["sister"] = s.sister;
    o["interior_angle_deg"] = s.interior_angle_deg;
    if (s.unresolved) o["unresolved"] = true;
    snaps.push_back(o);
  }
  ojson walls = ojson::array();
  for (const GraphWall& w : g.walls) {
    if (w.removed) continue;
    ojson o;
    o["id"] = w.id;
    o["a"] = pt(w.a);
    o["b"] = pt(w.b);
    o["extension"] = w.extension;
    walls.push_back(o);
  }
  ojson boxes = ojson::array();
  for (const Box& b : g.obstacle_boxes) boxes.push_back(ojson::array({b.xmin, b.ymin, b.xmax, b.ymax}));
  j["snaps"] = snaps;
  j["walls"] = walls;
  j["obstacle_boxes"] = boxes;
  j["diagnostics"] = g.diagnostics;
  return j.dump(1) + "\n";
}

std::string faces_json(const std::vector<Face>& faces) {
  ojson a = ojson::array();
  for (const Face& f : faces) {
    ojson o;
    o["nodes"] = f.nodes;
    o["walls"] = f.walls;
    o["score"] = f.score;
    o["signed_area"] = f.signed_area;
    o["obstacle"] = f.obstacle;
    a.push_back(o);
  }
  ojson j;
  j["faces"] = a;
  return j.dump(1) + "\n";
}

std::string stats_json(const DecomposeStats& s, const CorridorGraph& g, std::size_t transition_nodes) {
  ojson j;
  j["pixels"] = s.pixels;
  j["rho_px"] = s.rho_px;
  j["walls"] = s.wall_count;
  j["snaps"] = s.snap_count;
  j["obstacles"] = s.obstacle_count;
  j["candidates"] = s.candidate_count;
  j["rectangles"] = g.rects.size();
  j["edges"] = g.edges.size();
  j["components"] = g.component_count();
  j["transition_nodes"] = transition_nodes;
  j["compression"] = transition_nodes ? static_cast<double>(s.pixels) / static_cast<double>(transition_nodes) : 0.0;
  j["coverage"] = s.coverage;
  j["decompose_ms"] = s.seconds * 1e3;
  return j.dump(2) + "\n";
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArtifactError("cannot write " + path.string());
  out << text;
}

}  // namespace corridor
