#pragma once

// Deterministic rectilinear floor plans: rooms along a hallway, doors,
// optional pillars.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "corridor/grid.hpp"

namespace corridor {

class FixtureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FixtureSpec {
  std::string id = "map";
  int rooms = 6;          // 1: single room; 2 without hallway: side-by-side pair
  int doors = -1;         // -1: every room gets one
  int pillars = 0;        // square pillars placed inside rooms
  bool hallway = true;    // ignored for rooms <= 2
  double width = 30.0;    // building outer size, meters
  double height = 16.0;
  double resolution = 0.05;
  double hallway_width = 2.4;
  double wall = 0.3;
  double door = 1.6;
  double pillar = 1.0;
};

struct FixtureSet {
  std::vector<FixtureSpec> maps;
};

/// {"maps": [{id, rooms, doors, pillars, hallway, width, height, resolution, ...}]}
/// or a single map object.
FixtureSet load_fixture_spec(const std::filesystem::path& path);
FixtureSet parse_fixture_spec(const std::string& json_text);

struct Fixture {
  FixtureSpec spec;
  GrayImage image;  // 0 occupied, 255 free; row 0 is the top of the image
  MapMeta meta;
  int expected_rooms = 0;
  int expected_doors = 0;
};

/// Same seed and spec give identical bytes.
Fixture generate_fixture(const FixtureSpec& spec, std::uint64_t seed);

/// Random small building for property suites.
FixtureSpec random_fixture_spec(std::uint64_t seed);

/// Writes <dir>/<id>.pgm and <dir>/<id>.json.
void write_fixture(const Fixture& f, const std::filesystem::path& dir);

/// Built-in fixture set used by the tests and the bench.
std::vector<FixtureSpec> standard_fixtures();

inline OccupancyGrid fixture_grid(const Fixture& f) { return OccupancyGrid::from_image(f.image, f.meta); }

}  // namespace corridor
