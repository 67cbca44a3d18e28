#include "corridor/grid.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "corridor/kernels.hpp"
#include "json.hpp"

namespace corridor {

using nlohmann::json;

MapMeta load_map_meta(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MapError("cannot open map metadata: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw MapError("malformed map metadata " + path.string() + ": " + e.what());
  }
  MapMeta m;
  m.resolution = j.value("resolution", m.resolution);
  if (j.contains("origin")) {
    const auto& o = j.at("origin");
    if (!o.is_array() || o.size() < 2) throw MapError("origin must be [x, y]");
    m.origin = {o[0].get<double>(), o[1].get<double>()};
  }
  m.occupied_threshold = j.value("occupied_threshold", m.occupied_threshold);
  m.invert = j.value("invert", m.invert);
  if (!(m.resolution > 0.0)) throw MapError("resolution must be positive");
  if (m.occupied_threshold < 0 || m.occupied_threshold > 255) throw MapError("occupied_threshold must be in [0,255]");
  return m;
}

void save_map_meta(const std::filesystem::path& path, const MapMeta& meta) {
  json j{{"resolution", meta.resolution},
         {"origin", {meta.origin.x, meta.origin.y}},
         {"occupied_threshold", meta.occupied_threshold},
         {"invert", meta.invert}};
  std::ofstream out(path);
  if (!out) throw MapError("cannot write map metadata: " + path.string());
  out << j.dump(2) << "\n";
}

namespace {

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MapError("cannot open map: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Reads the next PGM header token, skipping whitespace and '#' comments.
long pgm_token(const std::string& data, std::size_t& pos) {
  while (pos < data.size()) {
    if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= data.size() || !std::isdigit(static_cast<unsigned char>(data[pos])))
    throw MapError("malformed PGM header");
  long v = 0;
  while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) {
    v = v * 10 + (data[pos] - '0');
    if (v > std::numeric_limits<int>::max()) throw MapError("PGM value overflow");
    ++pos;
  }
  return v;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  const std::string data = read_all(path);
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5'))
    throw MapError("not a P2/P5 PGM: " + path.string());
  const bool binary = data[1] == '5';
  std::size_t pos = 2;
  const long cols = pgm_token(data, pos);
  const long rows = pgm_token(data, pos);
  const long maxval = pgm_token(data, pos);
  if (cols <= 0 || rows <= 0) throw MapError("zero-size image: " + path.string());
  if (maxval <= 0 || maxval > 255) throw MapError("only 8-bit PGM is supported");
  GrayImage img{static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), {}};
  const std::size_t n = img.rows * img.cols;
  img.pixels.resize(n);
  const auto scale = [maxval](long v) {
    return static_cast<std::uint8_t>(maxval == 255 ? v : (v * 255 + maxval / 2) / maxval);
  };
  if (binary) {
    ++pos;  // single whitespace after maxval
    if (data.size() < pos + n) throw MapError("truncated PGM: " + path.string());
    for (std::size_t i = 0; i < n; ++i) img.pixels[i] = scale(static_cast<unsigned char>(data[pos + i]));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const long v = pgm_token(data, pos);
      if (v > maxval) throw MapError("PGM sample exceeds maxval");
      img.pixels[i] = scale(v);
    }
  }
  return img;
}

GrayImage read_png_gray(const std::filesystem::path& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "rb"), &std::fclose);
  if (!fp) throw MapError("cannot open map: " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw MapError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw MapError("libpng init failed");
  }
  GrayImage img;
  std::vector<png_bytep> row_ptrs;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw MapError("malformed PNG: " + path.string());
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (depth == 16) png_set_strip_16(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA || color == PNG_COLOR_TYPE_PALETTE)
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  png_read_update_info(png, info);
  img.cols = png_get_image_width(png, info);
  img.rows = png_get_image_height(png, info);
  if (img.rows == 0 || img.cols == 0) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw MapError("zero-size image: " + path.string());
  }
  img.pixels.resize(img.rows * img.cols);
  row_ptrs.resize(img.rows);
  for (std::size_t r = 0; r < img.rows; ++r) row_ptrs[r] = img.pixels.data() + r * img.cols;
  png_read_image(png, row_ptrs.data());
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

GrayImage read_gray_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MapError("cannot open map: " + path.string());
  char magic[8] = {};
  in.read(magic, 8);
  if (in.gcount() >= 2 && magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) return read_pgm(path);
  if (in.gcount() == 8 && png_sig_cmp(reinterpret_cast<png_const_bytep>(magic), 0, 8) == 0) return read_png_gray(path);
  throw MapError("unsupported image format: " + path.string());
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MapError("cannot write " + path.string());
  out << "P5\n" << img.cols << " " << img.rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
}

OccupancyGrid::OccupancyGrid(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> cells, double resolution,
                             Vec2 origin, int occupied_threshold)
    : rows_(rows), cols_(cols), resolution_(resolution), origin_(origin), threshold_(occupied_threshold),
      cells_(std::move(cells)) {
  if (rows_ == 0 || cols_ == 0) throw MapError("zero-size grid");
  if (!(resolution_ > 0.0)) throw MapError("resolution must be positive");
  if (cells_.size() != rows_ * cols_) throw MapError("cell count does not match dimensions");
  for (auto& v : cells_) v = v ? 1 : 0;
}

OccupancyGrid OccupancyGrid::from_image(const GrayImage& img, const MapMeta& meta) {
  if (img.rows == 0 || img.cols == 0) throw MapError("zero-size image");
  if (!(meta.resolution > 0.0)) throw MapError("resolution must be positive");
  if (meta.occupied_threshold < 0 || meta.occupied_threshold > 255) throw MapError("occupied_threshold must be in [0,255]");
  std::vector<std::uint8_t> thresholded(img.pixels.size());
  kernels::active().threshold_u8(img.pixels.data(), img.pixels.size(),
                                 static_cast<std::uint8_t>(meta.occupied_threshold), meta.invert,
                                 thresholded.data());
  // Flip vertically: image row 0 is the top, grid row 0 the bottom.
  std::vector<std::uint8_t> cells(img.pixels.size());
  for (std::size_t r = 0; r < img.rows; ++r) {
    const std::size_t src = (img.rows - 1 - r) * img.cols;
    std::copy_n(thresholded.begin() + static_cast<std::ptrdiff_t>(src), img.cols,
                cells.begin() + static_cast<std::ptrdiff_t>(r * img.cols));
  }
  return OccupancyGrid(img.rows, img.cols, std::move(cells), meta.resolution, meta.origin, meta.occupied_threshold);
}

GrayImage OccupancyGrid::to_image() const {
  GrayImage img{rows_, cols_, std::vector<std::uint8_t>(cells_.size())};
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      img.pixels[(rows_ - 1 - r) * cols_ + c] = cells_[r * cols_ + c] ? 0 : 255;
  return img;
}

OccupancyGrid load_occupancy_grid(const std::filesystem::path& path, const MapMeta& meta) {
  if (!(meta.resolution > 0.0)) throw MapError("resolution must be positive");
  return OccupancyGrid::from_image(read_gray_image(path), meta);
}

bool is_free_disk(const OccupancyGrid& grid, Vec2 center, double radius) {
  const Vec2 pc = grid.to_pixel_coords(center);
  const double rp = radius / grid.resolution();
  const long r0 = static_cast<long>(std::ceil(pc.y - rp)), r1 = static_cast<long>(std::floor(pc.y + rp));
  const long c0 = static_cast<long>(std::ceil(pc.x - rp)), c1 = static_cast<long>(std::floor(pc.x + rp));
  const double rp2 = rp * rp;
  for (long r = r0; r <= r1; ++r)
    for (long c = c0; c <= c1; ++c) {
      const double dx = static_cast<double>(c) - pc.x, dy = static_cast<double>(r) - pc.y;
      if (dx * dx + dy * dy <= rp2 && grid.occupied(r, c)) return false;
    }
  return true;
}

std::vector<PixelIndex> rasterize_rectangle(const OccupancyGrid& grid, const Rectangle& rect) {
  std::vector<PixelIndex> out;
  const Box bb = Box::of(rect);
  const Vec2 lo = grid.to_pixel_coords({bb.xmin, bb.ymin});
  const Vec2 hi = grid.to_pixel_coords({bb.xmax, bb.ymax});
  const long r0 = std::max<long>(0, static_cast<long>(std::floor(lo.y)) - 1);
  const long c0 = std::max<long>(0, static_cast<long>(std::floor(lo.x)) - 1);
  const long r1 = std::min<long>(static_cast<long>(grid.rows()) - 1, static_cast<long>(std::ceil(hi.y)) + 1);
  const long c1 = std::min<long>(static_cast<long>(grid.cols()) - 1, static_cast<long>(std::ceil(hi.x)) + 1);
  for (long r = r0; r <= r1; ++r)
    for (long c = c0; c <= c1; ++c)
      if (rect.contains(grid.world_of({r, c}))) out.push_back({r, c});
  return out;
}

std::vector<std::uint8_t> erode_free(std::size_t rows, std::size_t cols, const std::vector<std::uint8_t>& occupied,
                                     int radius_px, bool blocked_border) {
  std::vector<std::uint8_t> out(rows * cols);
  if (radius_px < 0) radius_px = 0;
  const std::int32_t cap = radius_px + 1;
  std::vector<std::int32_t> hdist(rows * cols);
  // Horizontal distance to the nearest blocked pixel in the row, capped.
  for (std::size_t r = 0; r < rows; ++r) {
    const std::uint8_t* occ = occupied.data() + r * cols;
    std::int32_t* h = hdist.data() + r * cols;
    std::int32_t d = blocked_border ? 1 : cap;  // column -1 is blocked
    for (std::size_t c = 0; c < cols; ++c) {
      if (occ[c]) d = 0;
      h[c] = std::min(d, cap);
      if (d < cap) ++d;
    }
    d = blocked_border ? 1 : cap;
    for (std::size_t c = cols; c-- > 0;) {
      if (occ[c]) d = 0;
      h[c] = std::min(h[c], std::min(d, cap));
      if (d < cap) ++d;
    }
  }
  kernels::active().erode_vertical(hdist.data(), rows, cols, radius_px, blocked_border, out.data());
  return out;
}

MaskSums::MaskSums(std::size_t rows, std::size_t cols, const std::vector<std::uint8_t>& mask)
    : rows_(rows), cols_(cols), sums_((rows + 1) * (cols + 1), 0) {
  const std::size_t w = cols + 1;
  for (std::size_t r = 0; r < rows; ++r) {
    std::uint32_t run = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      run += mask[r * cols + c] ? 1u : 0u;
      sums_[(r + 1) * w + c + 1] = sums_[r * w + c + 1] + run;
    }
  }
}

std::uint64_t MaskSums::count(long r0, long c0, long r1, long c1) const {
  r0 = std::max<long>(r0, 0);
  c0 = std::max<long>(c0, 0);
  r1 = std::min<long>(r1, static_cast<long>(rows_) - 1);
  c1 = std::min<long>(c1, static_cast<long>(cols_) - 1);
  if (r0 > r1 || c0 > c1) return 0;
  const std::size_t w = cols_ + 1;
  const auto at = [&](long r, long c) { return static_cast<std::uint64_t>(sums_[static_cast<std::size_t>(r) * w + static_cast<std::size_t>(c)]); };
  return at(r1 + 1, c1 + 1) - at(r0, c1 + 1) - at(r1 + 1, c0) + at(r0, c0);
}

}  // namespace corridor
