#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "corridor/geometry.hpp"

namespace corridor {

class MapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sidecar metadata: {resolution, origin:[x,y], occupied_threshold, invert}.
struct MapMeta {
  double resolution = 0.05;
  Vec2 origin;
  int occupied_threshold = 128;
  bool invert = false;
};

MapMeta load_map_meta(const std::filesystem::path& path);
void save_map_meta(const std::filesystem::path& path, const MapMeta& meta);

struct PixelIndex {
  long row = 0;
  long col = 0;
  bool operator==(const PixelIndex&) const = default;
  auto operator<=>(const PixelIndex&) const = default;
};

/// 8-bit grayscale image, row 0 at the top as stored in the file.
struct GrayImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;
};

GrayImage read_pgm(const std::filesystem::path& path);
GrayImage read_png_gray(const std::filesystem::path& path);
/// Dispatches on magic bytes (PGM P2/P5, PNG).
GrayImage read_gray_image(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

/// Binary occupancy raster. Grid row 0 is the bottom image row so that world y
/// grows with the row index; pixel (r, c) has its center at
/// origin + resolution * (c, r). Immutable after construction.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> cells, double resolution,
                Vec2 origin = {}, int occupied_threshold = 128);

  /// Thresholds `img` with the dark-is-obstacle convention (flipped by `invert`).
  static OccupancyGrid from_image(const GrayImage& img, const MapMeta& meta);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return cells_.size(); }
  double resolution() const { return resolution_; }
  Vec2 origin() const { return origin_; }
  int occupied_threshold() const { return threshold_; }

  bool in_bounds(long r, long c) const {
    return r >= 0 && c >= 0 && r < static_cast<long>(rows_) && c < static_cast<long>(cols_);
  }
  /// Out-of-bounds counts as occupied.
  bool occupied(long r, long c) const {
    return !in_bounds(r, c) || cells_[static_cast<std::size_t>(r) * cols_ + static_cast<std::size_t>(c)] != 0;
  }
  std::uint8_t cell(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }

  Vec2 world_of(PixelIndex p) const {
    return {origin_.x + resolution_ * static_cast<double>(p.col), origin_.y + resolution_ * static_cast<double>(p.row)};
  }
  /// Nearest pixel center; may be out of bounds.
  PixelIndex pixel_of(Vec2 w) const {
    return {std::lround((w.y - origin_.y) / resolution_), std::lround((w.x - origin_.x) / resolution_)};
  }
  /// Continuous pixel coordinates (x = col, y = row) of a world point.
  Vec2 to_pixel_coords(Vec2 w) const { return (w - origin_) / resolution_; }
  Vec2 from_pixel_coords(Vec2 p) const { return origin_ + p * resolution_; }

  GrayImage to_image() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  double resolution_ = 0.05;
  Vec2 origin_;
  int threshold_ = 128;
  std::vector<std::uint8_t> cells_;
};

OccupancyGrid load_occupancy_grid(const std::filesystem::path& path, const MapMeta& meta);

/// True iff every pixel whose center lies within `radius` of `center` is free.
bool is_free_disk(const OccupancyGrid& grid, Vec2 center, double radius);

/// All in-bounds pixels whose centers lie inside the rectangle, row-major order.
std::vector<PixelIndex> rasterize_rectangle(const OccupancyGrid& grid, const Rectangle& rect);

/// Pixel (r, c) is 1 iff no blocked pixel center lies within `radius_px` of it.
/// Blocked = occupied cells, plus everything outside the raster when
/// `blocked_border` is set. Uses the active SIMD kernel table.
std::vector<std::uint8_t> erode_free(std::size_t rows, std::size_t cols, const std::vector<std::uint8_t>& occupied,
                                     int radius_px, bool blocked_border);

/// Summed-area table over a 0/1 mask, for O(1) box counts.
class MaskSums {
 public:
  MaskSums() = default;
  MaskSums(std::size_t rows, std::size_t cols, const std::vector<std::uint8_t>& mask);
  /// Number of set cells in rows [r0, r1] x cols [c0, c1], inclusive.
  std::uint64_t count(long r0, long c0, long r1, long c1) const;
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::uint32_t> sums_;  // (rows+1) x (cols+1)
};

}  // namespace corridor
