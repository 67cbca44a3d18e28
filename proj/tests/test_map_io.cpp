#include <png.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "corridor/fixtures.hpp"
#include "corridor/grid.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace corridor;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("corridor_map_io_" + name);
  fs::create_directories(p);
  return p;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

void write_png(const fs::path& p, const GrayImage& img) {
  FILE* fp = std::fopen(p.string().c_str(), "wb");
  REQUIRE(fp);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.cols), static_cast<png_uint_32>(img.rows), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t r = 0; r < img.rows; ++r)
    png_write_row(png, const_cast<png_bytep>(img.pixels.data() + r * img.cols));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

// Rectangle membership written out independently of Rectangle::contains.
bool member(const Rectangle& r, Vec2 p) {
  const double c = std::cos(r.angle), s = std::sin(r.angle);
  const double dx = p.x - r.center.x, dy = p.y - r.center.y;
  const double lx = c * dx + s * dy, ly = -s * dx + c * dy;
  return std::abs(lx) <= 0.5 * r.dims.x + 1e-9 && std::abs(ly) <= 0.5 * r.dims.y + 1e-9;
}

std::set<PixelIndex> brute_raster(const OccupancyGrid& g, const Rectangle& r) {
  std::set<PixelIndex> s;
  for (long row = 0; row < static_cast<long>(g.rows()); ++row)
    for (long col = 0; col < static_cast<long>(g.cols()); ++col)
      if (member(r, g.world_of({row, col}))) s.insert({row, col});
  return s;
}

}  // namespace

TEST_SUITE("map_io") {

TEST_CASE("2x2 PGM thresholds dark pixels to occupied") {
  const fs::path dir = temp_dir("2x2");
  write_bytes(dir / "m.pgm", std::string("P5\n2 2\n255\n") + std::string("\x00\xff\xff\x00", 4));
  const OccupancyGrid g = load_occupancy_grid(dir / "m.pgm", MapMeta{});
  CHECK(g.rows() == 2);
  CHECK(g.cols() == 2);
  // Image row 0 is the top, which is grid row 1.
  CHECK(g.occupied(1, 0));
  CHECK_FALSE(g.occupied(1, 1));
  CHECK_FALSE(g.occupied(0, 0));
  CHECK(g.occupied(0, 1));
}

TEST_CASE("1x1 white PGM is free and ASCII P2 parses") {
  const fs::path dir = temp_dir("1x1");
  write_bytes(dir / "w.pgm", "P2\n# comment\n1 1\n255\n255\n");
  const OccupancyGrid g = load_occupancy_grid(dir / "w.pgm", MapMeta{});
  CHECK(g.size() == 1);
  CHECK(g.cell(0, 0) == 0);
}

TEST_CASE("invert flag flips the convention") {
  const fs::path dir = temp_dir("invert");
  write_bytes(dir / "m.pgm", std::string("P5\n2 1\n255\n") + std::string("\x00\xff", 2));
  MapMeta meta;
  meta.invert = true;
  const OccupancyGrid g = load_occupancy_grid(dir / "m.pgm", meta);
  CHECK(g.cell(0, 0) == 0);
  CHECK(g.cell(0, 1) == 1);
}

TEST_CASE("PNG input matches the same image as PGM") {
  const fs::path dir = temp_dir("png");
  GrayImage img;
  img.rows = 7;
  img.cols = 5;
  std::mt19937_64 rng(3);
  for (std::size_t i = 0; i < img.rows * img.cols; ++i) img.pixels.push_back(static_cast<std::uint8_t>(rng() & 0xff));
  write_png(dir / "m.png", img);
  write_pgm(dir / "m.pgm", img);
  const OccupancyGrid a = load_occupancy_grid(dir / "m.png", MapMeta{});
  const OccupancyGrid b = load_occupancy_grid(dir / "m.pgm", MapMeta{});
  CHECK(a.cells() == b.cells());
}

TEST_CASE("small fixture has 330x630 = 207900 pixels") {
  const FixtureSpec spec = standard_fixtures()[2];
  REQUIRE(spec.id == "small");
  const Fixture f = generate_fixture(spec, 1);
  const fs::path dir = temp_dir("small");
  write_fixture(f, dir);
  const OccupancyGrid g = load_occupancy_grid(dir / "small.pgm", load_map_meta(dir / "small.json"));
  CHECK(g.rows() == 330);
  CHECK(g.cols() == 630);
  CHECK(g.size() == 207900);
}

TEST_CASE("load errors") {
  const fs::path dir = temp_dir("errors");
  CHECK_THROWS_AS(load_occupancy_grid(dir / "missing.pgm", MapMeta{}), MapError);
  write_bytes(dir / "zero.pgm", "P5\n0 0\n255\n");
  CHECK_THROWS_AS(load_occupancy_grid(dir / "zero.pgm", MapMeta{}), MapError);
  write_bytes(dir / "ok.pgm", std::string("P5\n1 1\n255\n\xff", 12));
  MapMeta bad;
  bad.resolution = 0.0;
  CHECK_THROWS_AS(load_occupancy_grid(dir / "ok.pgm", bad), MapError);
  write_bytes(dir / "junk.pgm", "hello");
  CHECK_THROWS_AS(load_occupancy_grid(dir / "junk.pgm", MapMeta{}), MapError);
}

TEST_CASE("metadata sidecar round trip") {
  const fs::path dir = temp_dir("meta");
  MapMeta m;
  m.resolution = 0.025;
  m.origin = {-3.5, 2.25};
  m.occupied_threshold = 100;
  m.invert = true;
  save_map_meta(dir / "m.json", m);
  const MapMeta r = load_map_meta(dir / "m.json");
  CHECK(r.resolution == m.resolution);
  CHECK(r.origin.x == m.origin.x);
  CHECK(r.origin.y == m.origin.y);
  CHECK(r.occupied_threshold == 100);
  CHECK(r.invert);
}

TEST_CASE("raising the threshold never frees an occupied cell") {
  std::mt19937_64 rng(11);
  GrayImage img;
  img.rows = 40;
  img.cols = 30;
  for (std::size_t i = 0; i < img.rows * img.cols; ++i) img.pixels.push_back(static_cast<std::uint8_t>(rng() & 0xff));
  for (int t = 0; t + 7 <= 255; t += 7) {
    MapMeta lo, hi;
    lo.occupied_threshold = t;
    hi.occupied_threshold = t + 7;
    const OccupancyGrid a = OccupancyGrid::from_image(img, lo), b = OccupancyGrid::from_image(img, hi);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a.cells()[i]) CHECK(b.cells()[i]);
  }
}

TEST_CASE("world/pixel round trip is exact at pixel centers") {
  const OccupancyGrid g(37, 53, std::vector<std::uint8_t>(37 * 53, 0), 0.05, {-1.3, 4.7});
  for (long r = 0; r < 37; ++r)
    for (long c = 0; c < 53; ++c) CHECK(g.pixel_of(g.world_of({r, c})) == PixelIndex{r, c});
}

TEST_CASE("is_free_disk") {
  const OccupancyGrid empty(100, 100, std::vector<std::uint8_t>(10000, 0), 0.05);
  CHECK(is_free_disk(empty, {2.5, 2.5}, 0.34));
  const OccupancyGrid full(100, 100, std::vector<std::uint8_t>(10000, 1), 0.05);
  CHECK_FALSE(is_free_disk(full, {2.5, 2.5}, 0.34));
  CHECK_FALSE(is_free_disk(empty, {0.1, 2.5}, 0.34));  // reaches past the border

  // One occupied pixel 0.2 m east of the center.
  std::vector<std::uint8_t> cells(10000, 0);
  cells[50 * 100 + 54] = 1;
  const OccupancyGrid one(100, 100, cells, 0.05);
  CHECK_FALSE(is_free_disk(one, {2.5, 2.5}, 0.34));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0.0, 5.0), rad(0.05, 0.8);
  for (int k = 0; k < 300; ++k) {
    const Vec2 c{pos(rng), pos(rng)};
    const double r = rad(rng);
    bool oracle = true;
    for (long y = -40; y < 140 && oracle; ++y)
      for (long x = -40; x < 140; ++x) {
        const Vec2 w{0.05 * static_cast<double>(x), 0.05 * static_cast<double>(y)};
        if (distance(w, c) <= r && one.occupied(y, x)) {
          oracle = false;
          break;
        }
      }
    CHECK(is_free_disk(one, c, r) == oracle);
  }
}

TEST_CASE("rasterize_rectangle") {
  const OccupancyGrid g(20, 20, std::vector<std::uint8_t>(400, 0), 1.0);
  CHECK(rasterize_rectangle(g, Rectangle{0, {4.5, 4.5}, {9.0, 9.0}, 0.0}).size() == 100);
  CHECK(rasterize_rectangle(g, Rectangle{0, {-30.0, 4.5}, {5.0, 5.0}, 0.0}).empty());

  const OccupancyGrid g50(50, 50, std::vector<std::uint8_t>(2500, 0), 1.0);
  const Rectangle rot{0, {24.3, 25.1}, {20.0, 9.0}, kPi / 4.0};
  const auto px = rasterize_rectangle(g50, rot);
  CHECK(std::set<PixelIndex>(px.begin(), px.end()) == brute_raster(g50, rot));

  std::mt19937_64 rng(17);
  const OccupancyGrid g30(30, 40, std::vector<std::uint8_t>(1200, 0), 0.1, {-0.7, 0.3});
  for (int k = 0; k < 1000; ++k) {
    Rectangle r = testing::random_rect(rng, 3.0, 0.05, 2.5, true);
    r.center = r.center + Vec2{1.8, 1.8};
    const auto got = rasterize_rectangle(g30, r);
    const std::set<PixelIndex> s(got.begin(), got.end());
    REQUIRE(s.size() == got.size());
    CHECK(s == brute_raster(g30, r));
  }
}

TEST_CASE("MaskSums counts match brute force") {
  std::mt19937_64 rng(23);
  const std::size_t rows = 31, cols = 47;
  std::vector<std::uint8_t> mask(rows * cols);
  for (auto& v : mask) v = (rng() % 3) == 0;
  const MaskSums sums(rows, cols, mask);
  std::uniform_int_distribution<long> rr(0, rows - 1), cc(0, cols - 1);
  for (int k = 0; k < 500; ++k) {
    long r0 = rr(rng), r1 = rr(rng), c0 = cc(rng), c1 = cc(rng);
    if (r0 > r1) std::swap(r0, r1);
    if (c0 > c1) std::swap(c0, c1);
    std::uint64_t n = 0;
    for (long r = r0; r <= r1; ++r)
      for (long c = c0; c <= c1; ++c) n += mask[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c)];
    CHECK(sums.count(r0, c0, r1, c1) == n);
  }
}

TEST_CASE("erode_free equals the brute-force disk test") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t rows = 20 + rng() % 30, cols = 20 + rng() % 30;
    std::vector<std::uint8_t> occ(rows * cols);
    for (auto& v : occ) v = (rng() % 23) == 0;
    const int radius = 1 + static_cast<int>(rng() % 6);
    for (bool border : {false, true}) {
      const auto got = erode_free(rows, cols, occ, radius, border);
      for (long r = 0; r < static_cast<long>(rows); ++r)
        for (long c = 0; c < static_cast<long>(cols); ++c) {
          bool free = true;
          for (long dr = -radius; dr <= radius && free; ++dr)
            for (long dc = -radius; dc <= radius; ++dc) {
              if (dr * dr + dc * dc > radius * radius) continue;
              const long y = r + dr, x = c + dc;
              const bool inside = y >= 0 && x >= 0 && y < static_cast<long>(rows) && x < static_cast<long>(cols);
              const bool blocked = inside ? occ[static_cast<std::size_t>(y) * cols + static_cast<std::size_t>(x)] != 0 : border;
              if (blocked) {
                free = false;
                break;
              }
            }
          CHECK(got[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c)] == (free ? 1 : 0));
        }
    }
  }
}

}  // TEST_SUITE
