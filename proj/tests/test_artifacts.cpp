#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "corridor/artifacts.hpp"
#include "corridor/astar.hpp"
#include "corridor/fixtures.hpp"
#include "corridor/pipeline.hpp"
#include "corridor/render.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace corridor;

namespace {

const Limits kLim{};

CorridorGraph graph_of(std::vector<Rectangle> rects) {
  for (std::size_t i = 0; i < rects.size(); ++i) rects[i].id = static_cast<int>(i);
  return build_corridor_graph(rects, 0.34);
}

DirectedCorridor directed(int id, double deg) {
  DirectedCorridor d;
  d.corridor_id = id;
  d.direction_deg = deg;
  d.direction = unit_from_angle(deg2rad(deg));
  return d;
}

Trajectory l_turn() {
  const CorridorGraph cg = graph_of({Box{0, 0, 6, 1}.to_rectangle(), Box{5, 0, 6, 6}.to_rectangle()});
  return synthesize({directed(0, 0), directed(1, 90)}, cg, {0.5, 0.5, 0}, {5.5, 5.5, kPi / 2}, kLim);
}

double point_polyline_distance(Vec2 p, const std::vector<Vec2>& poly) {
  double best = 1e300;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) best = std::min(best, point_segment_distance(p, poly[i], poly[i + 1]));
  return best;
}

// Points of the polyline inside <g id="...">.
std::vector<Vec2> svg_polyline(const std::string& svg, const std::string& group) {
  const auto g = svg.find("<g id=\"" + group + "\"");
  if (g == std::string::npos) return {};
  const auto p = svg.find("points=\"", g);
  const auto e = svg.find('"', p + 8);
  std::string body = svg.substr(p + 8, e - p - 8);
  for (char& ch : body)
    if (ch == ',') ch = ' ';
  std::istringstream in(body);
  std::vector<Vec2> pts;
  double x, y;
  while (in >> x >> y) pts.push_back({x, y});
  return pts;
}

std::size_t octile_cells(long dr, long dc) {
  dr = std::labs(dr);
  dc = std::labs(dc);
  return static_cast<std::size_t>(std::max(dr, dc));
}

}  // namespace

TEST_SUITE("artifacts") {

TEST_CASE("corridors.json round-trips rectangles and edges") {
  const OccupancyGrid g = fixture_grid(generate_fixture(standard_fixtures()[3], 2));
  const Decomposition d = decompose(g);
  const std::string text = corridors_json(d.graph);
  const CorridorGraph back = parse_corridors_json(text);
  REQUIRE(back.rects.size() == d.graph.rects.size());
  for (std::size_t i = 0; i < back.rects.size(); ++i) {
    CHECK(back.rects[i].center == d.graph.rects[i].center);
    CHECK(back.rects[i].dims == d.graph.rects[i].dims);
    CHECK(back.rects[i].angle == d.graph.rects[i].angle);
  }
  REQUIRE(back.edges.size() == d.graph.edges.size());
  for (std::size_t e = 0; e < back.edges.size(); ++e) {
    CHECK(back.edges[e].i == d.graph.edges[e].i);
    CHECK(back.edges[e].j == d.graph.edges[e].j);
    CHECK(back.edge_between(back.edges[e].i, back.edges[e].j) == static_cast<int>(e));
  }
  CHECK(corridors_json(back) == text);
}

TEST_CASE("corridors.json is byte-identical across runs") {
  const OccupancyGrid g = fixture_grid(generate_fixture(standard_fixtures()[2], 5));
  CHECK(corridors_json(decompose(g).graph) == corridors_json(decompose(g).graph));
}

TEST_CASE("corridors.json rejects bad ids and dangling edges") {
  CHECK_THROWS_AS(parse_corridors_json("{"), ArtifactError);
  const CorridorGraph cg = graph_of({Box{0, 0, 2, 2}.to_rectangle(), Box{1, 1, 3, 3}.to_rectangle()});
  auto j = nlohmann::json::parse(corridors_json(cg));
  auto bad_edge = j;
  bad_edge["edges"][0]["j"] = 7;
  CHECK_THROWS_AS(parse_corridors_json(bad_edge.dump()), ArtifactError);
  auto bad_id = j;
  bad_id["rectangles"][1]["id"] = 5;
  CHECK_THROWS_AS(parse_corridors_json(bad_id.dump()), ArtifactError);
}

TEST_CASE("route.json round-trips waypoints and directions") {
  RoutePlan plan;
  plan.waypoints = {{0.5, 0.5}, {5.5, 0.5}, {5.5, 5.5}};
  plan.directed = {directed(0, 0), directed(1, 90)};
  plan.cost = 10.5;
  plan.transitions = 1;
  const RouteArtifact r = parse_route_json(route_json(plan));
  REQUIRE(r.waypoints.size() == 3);
  CHECK(r.waypoints[1] == Vec2{5.5, 0.5});
  REQUIRE(r.sequence.size() == 2);
  CHECK(r.sequence[1].corridor_id == 1);
  CHECK(r.sequence[1].direction_deg == 90.0);
  CHECK(r.sequence[1].direction.y == doctest::Approx(1.0));
  CHECK(r.cost == 10.5);
  CHECK(r.transitions == 1);
  CHECK_THROWS_AS(parse_route_json("{\"waypoints\": 3}"), ArtifactError);
}

TEST_CASE("trajectory.json round-trips primitives and ends at the goal") {
  const Trajectory t = l_turn();
  const std::string text = trajectory_json(t, kLim, 0.05);
  Limits lim;
  const Trajectory back = parse_trajectory_json(text, &lim);
  CHECK(lim.v_max == kLim.v_max);
  CHECK(lim.omega_max == kLim.omega_max);
  REQUIRE(back.primitives.size() == t.primitives.size());
  for (std::size_t i = 0; i < t.primitives.size(); ++i) {
    const Primitive& a = t.primitives[i];
    const Primitive& b = back.primitives[i];
    CHECK(a.kind == b.kind);
    CHECK(a.sign == b.sign);
    CHECK(a.duration == b.duration);
    CHECK(a.start.x == b.start.x);
    CHECK(a.start.theta == b.start.theta);
    CHECK(a.swept == b.swept);
  }
  CHECK(back.total_time == t.total_time);
  CHECK(back.goal.x == doctest::Approx(5.5).epsilon(1e-9));
  CHECK(back.goal.y == doctest::Approx(5.5).epsilon(1e-9));

  const auto j = nlohmann::json::parse(text);
  const auto& s = j["samples"];
  REQUIRE(s.size() >= 2);
  CHECK(s.front()[0].get<double>() == 0.0);
  CHECK(s.back()[0].get<double>() == doctest::Approx(t.total_time));
  CHECK(s.back()[1].get<double>() == doctest::Approx(5.5).epsilon(1e-9));
  for (const auto& row : s) {
    CHECK(std::abs(row[4].get<double>()) <= kLim.v_max + 1e-12);
    CHECK(std::abs(row[5].get<double>()) <= kLim.omega_max + 1e-12);
  }
  CHECK_THROWS_AS(parse_trajectory_json("{\"primitives\": [{\"kind\": \"Q\", \"sign\": 0, \"duration\": 1, "
                                        "\"start\": [0, 0, 0]}]}"),
                  ArtifactError);
}

TEST_CASE("config parses overrides and rejects invalid values") {
  const Config c = parse_config(R"({"robot_radius": 0.3, "lambda": 2.0, "v_max": 1.0, "waypoint_fallback": false})");
  CHECK(c.decompose.robot_radius == 0.3);
  CHECK(c.route.lambda == 2.0);
  CHECK(c.limits.v_max == 1.0);
  CHECK(c.limits.omega_max == 2.0);
  CHECK_FALSE(c.waypoint_fallback);
  const Config again = parse_config(config_json(c));
  CHECK(config_json(again) == config_json(c));

  const Config defaults = parse_config("{}");
  CHECK(defaults.decompose.robot_radius == 0.34);
  CHECK(defaults.route.lambda == 0.5);
  CHECK(defaults.route.ratio_threshold == 2.0);

  CHECK_THROWS_AS(parse_config(R"({"robot_radius": -1})"), ArtifactError);
  CHECK_THROWS_AS(parse_config(R"({"lambda": -0.1})"), ArtifactError);
  CHECK_THROWS_AS(parse_config(R"({"ratio_threshold": 1.0})"), ArtifactError);
  CHECK_THROWS_AS(parse_config(R"({"omega_max": 0})"), ArtifactError);
  CHECK_THROWS_AS(parse_config(R"({"v_max": "fast"})"), ArtifactError);
  CHECK_THROWS_AS(parse_config("not json"), ArtifactError);
}

TEST_CASE("trajectory polyline stays within 1 mm of the arcs") {
  const Trajectory t = l_turn();
  const auto poly = trajectory_polyline(t, kLim, 1e-3);
  REQUIRE(poly.size() >= 2);
  double worst = 0.0;
  for (const Sample& s : sample_spacing(t, kLim, 1e-3)) worst = std::max(worst, point_polyline_distance({s.x, s.y}, poly));
  CHECK(worst <= 1e-3 + 1e-9);
  // Coarser tolerance gives fewer vertices.
  CHECK(trajectory_polyline(t, kLim, 1e-2).size() < poly.size());
}

TEST_CASE("SVG trajectory endpoints match trajectory.json") {
  const Trajectory t = l_turn();
  const CorridorGraph cg = graph_of({Box{0, 0, 6, 1}.to_rectangle(), Box{5, 0, 6, 6}.to_rectangle()});
  RenderInput in;
  in.corridors = &cg;
  in.trajectory = &t;
  const std::string svg = render_svg(in);
  const auto pts = svg_polyline(svg, "trajectory");
  REQUIRE(pts.size() >= 2);
  const auto j = nlohmann::json::parse(trajectory_json(t, kLim, 0.05));
  const auto& s = j["samples"];
  CHECK(pts.front().x == doctest::Approx(s.front()[1].get<double>()).epsilon(1e-8));
  CHECK(pts.front().y == doctest::Approx(s.front()[2].get<double>()).epsilon(1e-8));
  CHECK(pts.back().x == doctest::Approx(s.back()[1].get<double>()).epsilon(1e-8));
  CHECK(pts.back().y == doctest::Approx(s.back()[2].get<double>()).epsilon(1e-8));
  CHECK(svg.find("<g id=\"corridors\"") != std::string::npos);
}

TEST_CASE("decomposition-only SVG has corridors but no plan layers") {
  const OccupancyGrid g = fixture_grid(generate_fixture(standard_fixtures()[1], 1));
  const Decomposition d = decompose(g);
  RenderInput in;
  in.grid = &g;
  in.corridors = &d.graph;
  const std::string svg = render_svg(in);
  CHECK(svg.rfind("<svg", 0) != std::string::npos);
  CHECK(svg.find("<g id=\"grid\"") != std::string::npos);
  std::size_t polys = 0;
  for (auto p = svg.find("<polygon data-id="); p != std::string::npos; p = svg.find("<polygon data-id=", p + 1)) ++polys;
  CHECK(polys == d.graph.rects.size());
  CHECK(svg.find("<g id=\"trajectory\"") == std::string::npos);
  CHECK(svg.find("<g id=\"waypoints\"") == std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("A* on an empty grid finds the octile-optimal path") {
  const OccupancyGrid g = testing::make_grid(200, 200, 0.1, [](long, long) { return false; });
  const GridAStar astar(g, 0.34);
  SUBCASE("straight 10 m") {
    const GridPath p = astar.plan(g.world_of({100, 50}), g.world_of({100, 150}));
    REQUIRE(p.found);
    CHECK(p.length == doctest::Approx(10.0).epsilon(1e-9));
  }
  SUBCASE("random queries match the octile distance") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1.0, 19.0);
    for (int q = 0; q < 30; ++q) {
      const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
      const GridPath p = astar.plan(a, b);
      REQUIRE(p.found);
      const PixelIndex ca = p.cells.front(), cb = p.cells.back();
      const long dr = std::labs(cb.row - ca.row), dc = std::labs(cb.col - ca.col);
      const double oracle = 0.1 * (static_cast<double>(std::max(dr, dc) - std::min(dr, dc)) +
                                   std::sqrt(2.0) * static_cast<double>(std::min(dr, dc)));
      CHECK(p.length == doctest::Approx(oracle).epsilon(1e-9));
      CHECK(p.cells.size() == octile_cells(dr, dc) + 1);
    }
  }
}

TEST_CASE("A* paths keep the robot footprint off obstacles") {
  const OccupancyGrid g = fixture_grid(generate_fixture(standard_fixtures()[2], 1));
  const GridAStar astar(g, 0.34);
  const Planner planner(decompose(g).graph, Config{});
  std::size_t found = 0;
  for (const Query& q : generate_queries(planner, 11, 3)) {
    const GridPath p = astar.plan({q.start.x, q.start.y}, {q.goal.x, q.goal.y});
    if (!p.found) continue;
    ++found;
    for (const PixelIndex& c : p.cells) CHECK(is_free_disk(g, g.world_of(c), 0.34));
    for (std::size_t i = 0; i + 1 < p.cells.size(); ++i) {
      CHECK(std::labs(p.cells[i + 1].row - p.cells[i].row) <= 1);
      CHECK(std::labs(p.cells[i + 1].col - p.cells[i].col) <= 1);
    }
  }
  CHECK(found > 0);
}

}  // TEST_SUITE
