#include <algorithm>
#include <cmath>
#include <limits>

#include "corridor/geometry.hpp"
#include "corridor/kernels.hpp"

namespace corridor::kernels::scalar {

void threshold_u8(const std::uint8_t* gray, std::size_t n, std::uint8_t threshold, bool invert,
                  std::uint8_t* out) {
  const std::uint8_t flip = invert ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>((gray[i] < threshold ? 1 : 0) ^ flip);
}

void erode_vertical(const std::int32_t* hdist, std::size_t rows, std::size_t cols, int radius,
                    bool blocked_border, std::uint8_t* out) {
  const std::int64_t r2 = static_cast<std::int64_t>(radius) * radius;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto ri = static_cast<std::int64_t>(r);
    const bool clipped = ri - radius < 0 || ri + radius >= static_cast<std::int64_t>(rows);
    if (clipped && blocked_border) {
      std::fill(out + r * cols, out + (r + 1) * cols, std::uint8_t{0});
      continue;
    }
    const std::int64_t lo = std::max<std::int64_t>(0, ri - radius);
    const std::int64_t hi = std::min<std::int64_t>(static_cast<std::int64_t>(rows) - 1, ri + radius);
    for (std::size_t c = 0; c < cols; ++c) {
      std::int32_t best = std::numeric_limits<std::int32_t>::max();
      for (std::int64_t rr = lo; rr <= hi; ++rr) {
        const std::int32_t h = hdist[static_cast<std::size_t>(rr) * cols + c];
        const auto dy = static_cast<std::int32_t>(rr - ri);
        best = std::min(best, h * h + dy * dy);
      }
      out[r * cols + c] = best > r2 ? 1 : 0;
    }
  }
}

void union_exit_distance(const double* xs, const double* ys, std::size_t n, const Rectangle* rects,
                         std::size_t n_rects, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_rects; ++k) {
    const Rectangle& rc = rects[k];
    const double c = std::cos(rc.angle), s = std::sin(rc.angle);
    const double hw = 0.5 * rc.dims.x, hh = 0.5 * rc.dims.y;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx0 = xs[i] - rc.center.x, dy0 = ys[i] - rc.center.y;
      const double lx = c * dx0 + s * dy0;
      const double ly = c * dy0 - s * dx0;
      const double ex = std::max(std::abs(lx) - hw, 0.0);
      const double ey = std::max(std::abs(ly) - hh, 0.0);
      const double d = std::sqrt(ex * ex + ey * ey);
      out[i] = std::min(out[i], d);
    }
  }
}

}  // namespace corridor::kernels::scalar
