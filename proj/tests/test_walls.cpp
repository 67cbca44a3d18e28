#include <random>
#include <set>

#include "corridor/walls.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace corridor;

namespace {

RawSegment seg(Vec2 p, Vec2 q) { return {p, q, distance(p, q), -1}; }

WallLine unshifted(Vec2 p, Vec2 q) { return straighten({seg(p, q)}).front(); }

// Free samples at `probe` along n, counted the way normal selection does.
int free_side(const OccupancyGrid& g, const WallLine& w, Vec2 n, int samples, double probe) {
  int c = 0;
  for (int k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k + 1) / (samples + 1);
    const Vec2 s = w.aligned_p + (w.aligned_q - w.aligned_p) * t + n * probe;
    if (!g.occupied(std::lround(s.y), std::lround(s.x))) ++c;
  }
  return c;
}

}  // namespace

TEST_SUITE("walls") {

TEST_CASE("filled 20x20 square yields four 20 px segments") {
  const OccupancyGrid g = testing::make_grid(100, 100, 1.0, [](long r, long c) {
    return r >= 40 && r < 60 && c >= 40 && c < 60;
  });
  DetectOptions opts;
  opts.open_borders = true;
  const auto segs = detect_segments(g, opts);
  REQUIRE(segs.size() == 4);
  for (const RawSegment& s : segs) CHECK(s.length == doctest::Approx(20.0).epsilon(0.05));
}

TEST_CASE("all-free grid: four border walls, or none with open borders") {
  const OccupancyGrid g(50, 60, std::vector<std::uint8_t>(3000, 0), 1.0);
  CHECK(detect_segments(g).size() == 4);
  DetectOptions open;
  open.open_borders = true;
  CHECK(detect_segments(g, open).empty());
}

TEST_CASE("hallway of width 30 px gives two parallel segments") {
  const OccupancyGrid g = testing::make_grid(100, 120, 1.0, [](long r, long) { return r < 35 || r >= 65; });
  DetectOptions open;
  open.open_borders = true;
  const auto walls = straighten(detect_segments(g, open));
  REQUIRE(walls.size() == 2);
  CHECK(walls[0].angle_deg == 0.0);
  CHECK(walls[1].angle_deg == 0.0);
  CHECK(std::abs(walls[0].aligned_p.y - walls[1].aligned_p.y) == doctest::Approx(30.0));
}

TEST_CASE("straighten snaps and projects through the midpoint") {
  StraightenOptions o;
  o.tolerance_deg = 5.0;
  const WallLine w = straighten({seg({0, 0.1}, {10, -0.1})}, o).front();
  CHECK(w.aligned_p.x == doctest::Approx(0.0));
  CHECK(w.aligned_p.y == doctest::Approx(0.0));
  CHECK(w.aligned_q.x == doctest::Approx(10.0));
  CHECK(w.aligned_q.y == doctest::Approx(0.0));

  const WallLine v = straighten({seg({0, 0}, {0, 8})}).front();
  CHECK(v.aligned_p == Vec2{0, 0});
  CHECK(v.aligned_q == Vec2{0, 8});
  CHECK(v.angle_deg == 90.0);
}

TEST_CASE("off-axis segments snap to their cluster mean") {
  StraightenOptions o;
  o.tolerance_deg = 1.0;
  std::vector<RawSegment> segs;
  for (double a : {43.0, 44.0, 45.0}) segs.push_back(seg({0, 0}, unit_from_angle(deg2rad(a)) * 20.0));
  const auto walls = straighten(segs, o);
  for (const WallLine& w : walls) CHECK(w.angle_deg == doctest::Approx(44.0).epsilon(1e-9));
}

TEST_CASE("snapped angles, midpoints and directions over random segments") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.0, 200.0), ang(0.0, 180.0), len(10.0, 80.0);
  std::vector<RawSegment> segs;
  for (int i = 0; i < 300; ++i) {
    const Vec2 p{pos(rng), pos(rng)};
    segs.push_back(seg(p, p + unit_from_angle(deg2rad(ang(rng))) * len(rng)));
  }
  const StraightenOptions o;
  const auto walls = straighten(segs, o);
  REQUIRE(walls.size() == segs.size());
  // Oracle: orientations within tolerance of an axis take the axis; the rest
  // form components of the "circular gap <= 5 degrees" graph and take the
  // component's axial mean.
  std::vector<double> orient(segs.size());
  std::vector<std::size_t> loose;
  std::vector<double> expected(segs.size(), -1.0);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Vec2 d = segs[i].q - segs[i].p;
    double a = rad2deg(std::atan2(d.y, d.x));
    a = std::fmod(a + 360.0, 180.0);
    orient[i] = a;
    const double g0 = std::min(a, 180.0 - a), g90 = std::abs(a - 90.0);
    if (g0 <= 10.0 && g0 <= g90) expected[i] = 0.0;
    else if (g90 <= 10.0) expected[i] = 90.0;
    else loose.push_back(i);
  }
  std::vector<int> comp(segs.size(), -1);
  int nc = 0;
  for (std::size_t s0 : loose) {
    if (comp[s0] >= 0) continue;
    std::vector<std::size_t> stack{s0};
    comp[s0] = nc;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j : loose) {
        const double gap = std::abs(orient[i] - orient[j]);
        if (comp[j] < 0 && std::min(gap, 180.0 - gap) <= 5.0) {
          comp[j] = nc;
          stack.push_back(j);
        }
      }
    }
    ++nc;
  }
  for (int c = 0; c < nc; ++c) {
    double sx = 0.0, sy = 0.0;
    for (std::size_t i : loose)
      if (comp[i] == c) {
        sx += std::cos(deg2rad(2.0 * orient[i]));
        sy += std::sin(deg2rad(2.0 * orient[i]));
      }
    const double mean = std::fmod(0.5 * rad2deg(std::atan2(sy, sx)) + 180.0, 180.0);
    for (std::size_t i : loose)
      if (comp[i] == c) expected[i] = mean;
  }
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const WallLine& w = walls[i];
    const Vec2 m0 = (segs[i].p + segs[i].q) * 0.5, m1 = (w.aligned_p + w.aligned_q) * 0.5;
    CHECK(distance(m0, m1) < 1e-9);
    CHECK(std::abs(norm(w.direction) - 1.0) < 1e-12);
    CHECK(std::abs(cross(w.aligned_q - w.aligned_p, w.direction)) < 1e-7);
    const double diff = std::abs(w.angle_deg - expected[i]);
    CHECK(std::min(diff, 180.0 - diff) < 1e-9);
  }
}

TEST_CASE("inward normal points at the free side") {
  const OccupancyGrid north = testing::make_grid(20, 20, 1.0, [](long r, long) { return r < 10; });
  WallLine w = unshifted({2, 9.5}, {17, 9.5});
  const auto n = inward_normal(north, w);
  REQUIRE(n);
  CHECK(*n == Vec2{0, 1});

  const OccupancyGrid south = testing::make_grid(20, 20, 1.0, [](long r, long) { return r >= 10; });
  const auto s = inward_normal(south, w);
  REQUIRE(s);
  CHECK(*s == Vec2{0, -1});

  // 40 px corridor, south wall between rows 9 and 10, probe 5 px.
  const OccupancyGrid corridor = testing::make_grid(60, 80, 1.0, [](long r, long) { return r < 10 || r >= 50; });
  NormalOptions o;
  o.probe = 5.0;
  const auto c = inward_normal(corridor, unshifted({10, 9.5}, {70, 9.5}), o);
  REQUIRE(c);
  CHECK(c->y > 0.0);

  const OccupancyGrid full(20, 20, std::vector<std::uint8_t>(400, 1), 1.0);
  CHECK_FALSE(inward_normal(full, w).has_value());
}

TEST_CASE("shift is an exact translation by rho n") {
  WallLine w = unshifted({0, 0}, {10, 0});
  w.normal = {0, 1};
  const WallLine s = shift_inward(w, 5.0);
  CHECK(s.p == Vec2{0, 5});
  CHECK(s.q == Vec2{10, 5});
  CHECK(s.direction == w.direction);
  CHECK(s.normal == w.normal);
  const WallLine z = shift_inward(w, 0.0);
  CHECK(z.p == w.aligned_p);
  CHECK(z.q == w.aligned_q);
}

TEST_CASE("default clearance is ceil(a / delta)") {
  CHECK(clearance_pixels(0.34, 0.05) == 7);
  CHECK(clearance_pixels(0.34, 0.025) == 14);
  CHECK(clearance_pixels(0.35, 0.05) == 7);
  CHECK(clearance_pixels(0.3, 0.1) == 3);
}

TEST_CASE("extracted walls: perpendicular normals, exact shifts, free side wins") {
  const OccupancyGrid g = testing::boxes_grid(120, 160, 6, {{40, 50, 70, 90}, {80, 20, 114, 30}}, 1.0);
  WallOptions o;
  o.clearance_px = 4.0;
  const WallExtraction ex = extract_walls(g, o);
  CHECK(ex.walls.size() >= 10);
  for (const WallLine& w : ex.walls) {
    CHECK(std::abs(dot(w.direction, w.normal)) < 1e-9);
    CHECK(w.p == w.aligned_p + w.normal * 4.0);
    CHECK(w.q == w.aligned_q + w.normal * 4.0);
    CHECK(free_side(g, w, w.normal, o.normal.n_samples, o.normal.probe) >=
          free_side(g, w, -w.normal, o.normal.n_samples, o.normal.probe));
    CHECK(w.length() >= o.detect.min_length - 1e-9);
  }
  for (std::size_t i = 1; i < ex.walls.size(); ++i) {
    const WallLine& a = ex.walls[i - 1];
    const WallLine& b = ex.walls[i];
    CHECK_FALSE(lex_less(b.aligned_p, a.aligned_p));
  }
}

}  // TEST_SUITE
