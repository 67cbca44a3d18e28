#pragma once

// Data-parallel inner loops used by the raster stages and by trajectory
// validation. Every kernel has a scalar reference implementation; SIMD
// variants must produce bit-identical results and are chosen at runtime.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace corridor {
struct Rectangle;
}

namespace corridor::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend b);

struct KernelTable {
  Backend backend;

  /// out[i] = 1 if (gray[i] < threshold) != invert, else 0.
  void (*threshold_u8)(const std::uint8_t* gray, std::size_t n, std::uint8_t threshold, bool invert,
                       std::uint8_t* out);

  /// Vertical pass of a disk erosion. `hdist` holds, per pixel, the horizontal
  /// distance (in pixels, capped at radius + 1) to the nearest blocked pixel of
  /// the same row. Writes out[r*cols + c] = 1 iff min over |dy| <= radius of
  /// hdist[r+dy][c]^2 + dy^2 exceeds radius^2. Rows outside the raster count as
  /// blocked when `blocked_border` is set and are skipped otherwise.
  void (*erode_vertical)(const std::int32_t* hdist, std::size_t rows, std::size_t cols, int radius,
                         bool blocked_border, std::uint8_t* out);

  /// For each point, the minimum over `rects` of Rectangle::exit_distance.
  void (*union_exit_distance)(const double* xs, const double* ys, std::size_t n,
                              const Rectangle* rects, std::size_t n_rects, double* out);
};

/// Fastest backend supported by this CPU, unless CORRIDOR_KERNELS=scalar|avx2|neon overrides it.
Backend detect_backend();
bool backend_available(Backend b);
const KernelTable& table(Backend b);
/// Table for the detected backend (cached).
const KernelTable& active();

// Individual implementations, exposed for equivalence testing.
namespace scalar {
void threshold_u8(const std::uint8_t* gray, std::size_t n, std::uint8_t threshold, bool invert,
                  std::uint8_t* out);
void erode_vertical(const std::int32_t* hdist, std::size_t rows, std::size_t cols, int radius,
                    bool blocked_border, std::uint8_t* out);
void union_exit_distance(const double* xs, const double* ys, std::size_t n, const Rectangle* rects,
                         std::size_t n_rects, double* out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void threshold_u8(const std::uint8_t* gray, std::size_t n, std::uint8_t threshold, bool invert,
                  std::uint8_t* out);
void erode_vertical(const std::int32_t* hdist, std::size_t rows, std::size_t cols, int radius,
                    bool blocked_border, std::uint8_t* out);
void union_exit_distance(const double* xs, const double* ys, std::size_t n, const Rectangle* rects,
                         std::size_t n_rects, double* out);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
void threshold_u8(const std::uint8_t* gray, std::size_t n, std::uint8_t threshold, bool invert,
                  std::uint8_t* out);
void erode_vertical(const std::int32_t* hdist, std::size_t rows, std::size_t cols, int radius,
                    bool blocked_border, std::uint8_t* out);
void union_exit_distance(const double* xs, const double* ys, std::size_t n, const Rectangle* rects,
                         std::size_t n_rects, double* out);
}  // namespace neon
#endif

}  // namespace corridor::kernels
