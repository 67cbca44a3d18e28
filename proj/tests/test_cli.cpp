#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "corridor/artifacts.hpp"
#include "doctest.h"

using namespace corridor;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("corridor_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  fs::path operator/(const std::string& name) const { return dir / name; }
};

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + CORRIDOR_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::string pose(Vec2 p, double deg) {
  std::ostringstream o;
  o.precision(17);
  o << p.x << ',' << p.y << ',' << deg;
  return o.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("decompose, plan and render a generated map") {
  Workspace ws;
  write_text(ws / "spec.json", R"({"maps": [{"id": "pair", "rooms": 2, "hallway": false, "width": 12, "height": 6}]})");
  REQUIRE(run("fixtures --spec " + q(ws / "spec.json") + " -o " + q(ws / "maps"), ws / "log") == 0);
  REQUIRE(fs::exists(ws / "maps/pair.pgm"));
  REQUIRE(fs::exists(ws / "maps/pair.json"));

  REQUIRE(run("decompose " + q(ws / "maps/pair.pgm") + " --debug -o " + q(ws / "dec"), ws / "log") == 0);
  for (const char* f : {"corridors.json", "stats.json", "walls.json", "snaps.json", "faces.json"})
    CHECK(fs::exists(ws / "dec" / f));
  const CorridorGraph cg = load_corridors(ws / "dec/corridors.json");
  REQUIRE(cg.rects.size() >= 2);
  CHECK(cg.component_count() == 1);

  SUBCASE("repeat runs write identical corridors.json") {
    REQUIRE(run("decompose " + q(ws / "maps/pair.pgm") + " -o " + q(ws / "dec2"), ws / "log") == 0);
    CHECK(read_text(ws / "dec/corridors.json") == read_text(ws / "dec2/corridors.json"));
  }

  SUBCASE("plan writes route, trajectory and svg") {
    const Vec2 a = cg.rects.front().center, b = cg.rects.back().center;
    const std::string args = "plan " + q(ws / "dec/corridors.json") + " --start " + pose(a, 0) + " --goal " +
                             pose(b, 90) + " --svg --map " + q(ws / "maps/pair.pgm") + " -o " + q(ws / "plan");
    REQUIRE(run(args, ws / "log") == 0);
    for (const char* f : {"route.json", "trajectory.json", "plan.svg"}) CHECK(fs::exists(ws / "plan" / f));
    const RouteArtifact r = parse_route_json(read_text(ws / "plan/route.json"));
    REQUIRE(r.waypoints.size() >= 2);
    CHECK(r.waypoints.front() == a);
    CHECK(r.waypoints.back() == b);
    Limits lim;
    const Trajectory t = parse_trajectory_json(read_text(ws / "plan/trajectory.json"), &lim);
    CHECK(t.goal.x == doctest::Approx(b.x).epsilon(1e-6));
    CHECK(t.goal.y == doctest::Approx(b.y).epsilon(1e-6));

    const std::string rargs = "render --corridors " + q(ws / "dec/corridors.json") + " --route " +
                              q(ws / "plan/route.json") + " --trajectory " + q(ws / "plan/trajectory.json") + " -o " +
                              q(ws / "render.svg");
    REQUIRE(run(rargs, ws / "log") == 0);
    const std::string svg = read_text(ws / "render.svg");
    CHECK(svg.find("<g id=\"trajectory\"") != std::string::npos);
    CHECK(svg.find("<g id=\"waypoints\"") != std::string::npos);
  }

  SUBCASE("start outside every corridor exits with 2") {
    const std::string args = "plan " + q(ws / "dec/corridors.json") + " --start -5,-5,0 --goal " +
                             pose(cg.rects.front().center, 0) + " -o " + q(ws / "plan");
    CHECK(run(args, ws / "log") == 2);
  }

  SUBCASE("decompose-only render") {
    REQUIRE(run("render --corridors " + q(ws / "dec/corridors.json") + " --map " + q(ws / "maps/pair.pgm") + " -o " +
                    q(ws / "dec.svg"),
                ws / "log") == 0);
    const std::string svg = read_text(ws / "dec.svg");
    CHECK(svg.find("<g id=\"corridors\"") != std::string::npos);
    CHECK(svg.find("<g id=\"trajectory\"") == std::string::npos);
  }
}

TEST_CASE("rooms without a door exit with 3") {
  Workspace ws;
  write_text(ws / "spec.json",
             R"({"maps": [{"id": "shut", "rooms": 2, "doors": 0, "hallway": false, "width": 12, "height": 6}]})");
  REQUIRE(run("fixtures --spec " + q(ws / "spec.json") + " -o " + q(ws / "maps"), ws / "log") == 0);
  REQUIRE(run("decompose " + q(ws / "maps/shut.pgm") + " -o " + q(ws / "dec"), ws / "log") == 0);
  const CorridorGraph cg = load_corridors(ws / "dec/corridors.json");
  REQUIRE(cg.component_count() == 2);
  const std::string args = "plan " + q(ws / "dec/corridors.json") + " --start " + pose(cg.rects.front().center, 0) +
                           " --goal " + pose(cg.rects.back().center, 0) + " -o " + q(ws / "plan");
  CHECK(run(args, ws / "log") == 3);
}

TEST_CASE("a transition too narrow to turn exits with 4 unless the fallback is on") {
  Workspace ws;
  write_text(ws / "narrow.json", R"({"rectangles": [
    {"id": 0, "center": [1.5, 0.15], "dims": [3, 0.3], "angle": 0},
    {"id": 1, "center": [3.05, 1.5], "dims": [0.3, 3], "angle": 0}],
    "edges": [{"i": 0, "j": 1, "polygon": [[2.9, 0], [3, 0], [3, 0.3], [2.9, 0.3]]}]})");
  write_text(ws / "nofb.json", R"({"waypoint_fallback": false})");
  const std::string base = "plan " + q(ws / "narrow.json") + " --start 0.5,0.15,0 --goal 3.05,2.5,90 -o " + q(ws / "out");
  CHECK(run(base + " --config " + q(ws / "nofb.json"), ws / "log") == 4);
  CHECK(run(base, ws / "log") == 0);
  const Trajectory t = parse_trajectory_json(read_text(ws / "out/trajectory.json"));
  REQUIRE_FALSE(t.primitives.empty());
  for (const Primitive& p : t.primitives) CHECK(p.kind != PrimKind::C);
}

TEST_CASE("bad inputs exit with a non-zero status") {
  Workspace ws;
  CHECK(run("decompose " + q(ws / "missing.pgm"), ws / "log") != 0);
  write_text(ws / "bad.json", R"({"robot_radius": -2})");
  write_text(ws / "map.pgm", "P5\n4 4\n255\n" + std::string(16, '\xff'));
  CHECK(run("decompose " + q(ws / "map.pgm") + " --config " + q(ws / "bad.json") + " -o " + q(ws / "d"), ws / "log") == 1);
  CHECK(run("", ws / "log") != 0);
}

TEST_CASE("bench writes one CSV row per query") {
  Workspace ws;
  write_text(ws / "spec.json",
             R"({"maps": [{"id": "pair", "rooms": 2, "hallway": false, "width": 12, "height": 6}]})");
  REQUIRE(run("bench --fixtures " + q(ws / "spec.json") + " --repeats 1 --queries-per-band 1 -o " + q(ws / "b.csv"),
              ws / "log") == 0);
  const std::string csv = read_text(ws / "b.csv");
  REQUIRE_FALSE(csv.empty());
  CHECK(csv.find("pair") != std::string::npos);
  const std::string log = read_text(ws / "log");
  CHECK(log.find("SHORT") != std::string::npos);
}

}  // TEST_SUITE
