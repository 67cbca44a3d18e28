#include "corridor/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace corridor {

using nlohmann::json;

namespace {

FixtureSpec spec_from_json(const json& j) {
  FixtureSpec s;
  s.id = j.value("id", s.id);
  s.rooms = j.value("rooms", s.rooms);
  s.doors = j.value("doors", s.doors);
  s.pillars = j.value("pillars", s.pillars);
  s.hallway = j.value("hallway", s.hallway);
  s.width = j.value("width", s.width);
  s.height = j.value("height", s.height);
  s.resolution = j.value("resolution", s.resolution);
  s.hallway_width = j.value("hallway_width", s.hallway_width);
  s.wall = j.value("wall", s.wall);
  s.door = j.value("door", s.door);
  s.pillar = j.value("pillar", s.pillar);
  return s;
}

// Blocked canvas in grid orientation (row 0 at the bottom), painted in meters.
class Canvas {
 public:
  Canvas(double width, double height, double res)
      : res_(res), cols_(static_cast<long>(std::lround(width / res))), rows_(static_cast<long>(std::lround(height / res))),
        cells_(static_cast<std::size_t>(rows_ * cols_), 1) {}
  void paint(double x0, double y0, double x1, double y1, std::uint8_t v) {
    const long c0 = std::max(0L, px(x0)), c1 = std::min(cols_, px(x1));
    const long r0 = std::max(0L, px(y0)), r1 = std::min(rows_, px(y1));
    for (long r = r0; r < r1; ++r)
      for (long c = c0; c < c1; ++c) cells_[static_cast<std::size_t>(r * cols_ + c)] = v;
  }
  void free(double x0, double y0, double x1, double y1) { paint(x0, y0, x1, y1, 0); }
  void block(double x0, double y0, double x1, double y1) { paint(x0, y0, x1, y1, 1); }
  GrayImage image() const {
    GrayImage img;
    img.rows = static_cast<std::size_t>(rows_);
    img.cols = static_cast<std::size_t>(cols_);
    img.pixels.resize(img.rows * img.cols);
    for (long r = 0; r < rows_; ++r)
      for (long c = 0; c < cols_; ++c)
        img.pixels[static_cast<std::size_t>((rows_ - 1 - r) * cols_ + c)] = cells_[static_cast<std::size_t>(r * cols_ + c)] ? 0 : 255;
    return img;
  }

 private:
  long px(double m) const { return static_cast<long>(std::lround(m / res_)); }
  double res_;
  long cols_, rows_;
  std::vector<std::uint8_t> cells_;
};

struct RoomBox {
  double x0, y0, x1, y1;
};

std::vector<double> split_lengths(std::mt19937_64& rng, int n, double total, double gap) {
  std::uniform_real_distribution<double> jitter(0.8, 1.2);
  std::vector<double> w(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (double& x : w) {
    x = jitter(rng);
    sum += x;
  }
  const double usable = total - gap * (n - 1);
  for (double& x : w) x = x / sum * usable;
  return w;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  if (hi <= lo) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

FixtureSet parse_fixture_spec(const std::string& text) {
  const json j = json::parse(text);
  FixtureSet set;
  if (j.contains("maps")) {
    for (const json& m : j.at("maps")) set.maps.push_back(spec_from_json(m));
  } else {
    set.maps.push_back(spec_from_json(j));
  }
  return set;
}

FixtureSet load_fixture_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot read fixture spec " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_fixture_spec(ss.str());
  } catch (const json::exception& e) {
    throw FixtureError("bad fixture spec " + path.string() + ": " + e.what());
  }
}

Fixture generate_fixture(const FixtureSpec& s, std::uint64_t seed) {
  if (s.resolution <= 0.0 || s.width <= 0.0 || s.height <= 0.0) throw FixtureError(s.id + ": non-positive size");
  if (s.rooms < 1) throw FixtureError(s.id + ": needs at least one room");
  // Layout depends on the seed and the building shape, not on resolution or id.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s.rooms), static_cast<std::uint32_t>(s.pillars),
                    static_cast<std::uint32_t>(std::lround(s.width * 100)), static_cast<std::uint32_t>(std::lround(s.height * 100))};
  std::mt19937_64 rng(seq);
  Fixture f;
  f.spec = s;
  f.meta.resolution = s.resolution;
  f.meta.origin = {0.0, 0.0};
  Canvas cv(s.width, s.height, s.resolution);
  const double w = s.wall;
  const double ix0 = w, iy0 = w, ix1 = s.width - w, iy1 = s.height - w;
  std::vector<RoomBox> rooms;
  const int doors = s.doors < 0 ? s.rooms : std::min(s.doors, s.rooms);
  const double margin = 0.4;

  if (s.rooms == 1) {
    cv.free(ix0, iy0, ix1, iy1);
    rooms.push_back({ix0, iy0, ix1, iy1});
  } else if (s.rooms == 2 && !s.hallway) {
    const double mid = uniform(rng, 0.45, 0.55) * s.width;
    rooms.push_back({ix0, iy0, mid - 0.5 * w, iy1});
    rooms.push_back({mid + 0.5 * w, iy0, ix1, iy1});
    if (iy1 - iy0 < s.door + 2 * margin) throw FixtureError(s.id + ": rooms too short for a door");
    for (const RoomBox& r : rooms) cv.free(r.x0, r.y0, r.x1, r.y1);
    if (doors >= 1) {
      const double dy = uniform(rng, iy0 + margin, iy1 - margin - s.door);
      cv.free(mid - 0.5 * w, dy, mid + 0.5 * w, dy + s.door);
    }
  } else {
    const int bottom = (s.rooms + 1) / 2, top = s.rooms / 2;
    const double hy0 = 0.5 * (s.height - s.hallway_width), hy1 = hy0 + s.hallway_width;
    cv.free(ix0, hy0, ix1, hy1);
    int door_budget = doors;
    const auto side = [&](int n, double y0, double y1, bool below) {
      if (n == 0) return;
      if (y1 - y0 < 2.0) throw FixtureError(s.id + ": rooms too shallow");
      const std::vector<double> widths = split_lengths(rng, n, ix1 - ix0, w);
      double x = ix0;
      for (int i = 0; i < n; ++i) {
        const double rw = widths[static_cast<std::size_t>(i)];
        if (rw < s.door + 2 * margin) throw FixtureError(s.id + ": rooms too narrow for a door");
        RoomBox r{x, y0, x + rw, y1};
        cv.free(r.x0, r.y0, r.x1, r.y1);
        rooms.push_back(r);
        if (door_budget > 0) {
          const double dx = uniform(rng, r.x0 + margin, r.x1 - margin - s.door);
          if (below) cv.free(dx, y1, dx + s.door, hy0);
          else cv.free(dx, hy1, dx + s.door, y0);
          --door_budget;
        }
        x += rw + w;
      }
    };
    side(bottom, iy0, hy0 - w, true);
    side(top, hy1 + w, iy1, false);
  }

  // Pillars sit in rooms with room to pass on every side.
  const double pass = 1.6;
  std::vector<std::size_t> order(rooms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  int placed = 0;
  for (std::size_t k = 0; k < order.size() && placed < s.pillars; ++k) {
    const RoomBox& r = rooms[order[k]];
    const double need = s.pillar + 2 * pass;
    if (r.x1 - r.x0 < need || r.y1 - r.y0 < need) continue;
    const double px0 = uniform(rng, r.x0 + pass, r.x1 - pass - s.pillar);
    const double py0 = uniform(rng, r.y0 + pass, r.y1 - pass - s.pillar);
    cv.block(px0, py0, px0 + s.pillar, py0 + s.pillar);
    ++placed;
  }
  f.image = cv.image();
  f.expected_rooms = static_cast<int>(rooms.size());
  f.expected_doors = s.rooms == 1 ? 0 : doors;
  return f;
}

FixtureSpec random_fixture_spec(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 17);
  FixtureSpec s;
  s.id = "random" + std::to_string(seed);
  s.rooms = std::uniform_int_distribution<int>(1, 8)(rng);
  s.hallway = s.rooms > 2 || std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  if (s.rooms == 2 && s.hallway) s.rooms = 3;
  s.width = uniform(rng, 8.0 + 3.0 * ((s.rooms + 1) / 2), 12.0 + 4.0 * ((s.rooms + 1) / 2));
  s.height = uniform(rng, 11.0, 18.0);
  if (s.rooms <= 2) s.height = uniform(rng, 6.0, 12.0);
  s.pillars = std::uniform_int_distribution<int>(0, 2)(rng);
  return s;
}

void write_fixture(const Fixture& f, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_pgm(dir / (f.spec.id + ".pgm"), f.image);
  save_map_meta(dir / (f.spec.id + ".json"), f.meta);
}

std::vector<FixtureSpec> standard_fixtures() {
  std::vector<FixtureSpec> out;
  FixtureSpec single;
  single.id = "single";
  single.rooms = 1;
  single.width = 10.0;
  single.height = 8.0;
  out.push_back(single);

  FixtureSpec pair;
  pair.id = "pair";
  pair.rooms = 2;
  pair.doors = 1;
  pair.hallway = false;
  pair.width = 12.0;
  pair.height = 8.0;
  out.push_back(pair);

  FixtureSpec small;
  small.id = "small";
  small.rooms = 6;
  small.width = 31.5;
  small.height = 16.5;
  small.pillars = 1;
  out.push_back(small);

  FixtureSpec medium;
  medium.id = "medium";
  medium.rooms = 8;
  medium.width = 40.0;
  medium.height = 20.0;
  medium.pillars = 1;
  out.push_back(medium);

  FixtureSpec large;
  large.id = "large";
  large.rooms = 12;
  large.width = 50.0;
  large.height = 50.0;
  large.pillars = 2;
  out.push_back(large);

  FixtureSpec fine = large;
  fine.id = "large_fine";
  fine.resolution = 0.025;
  out.push_back(fine);
  return out;
}

}  // namespace corridor
