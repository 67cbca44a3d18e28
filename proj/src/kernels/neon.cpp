// NEON variants for aarch64 builds.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "corridor/geometry.hpp"
#include "corridor/kernels.hpp"

namespace corridor::kernels::neon {

void threshold_u8(const std::uint8_t* gray, std::size_t n, std::uint8_t threshold, bool invert,
                  std::uint8_t* out) {
  const uint8x16_t thr = vdupq_n_u8(threshold);
  const uint8x16_t one = vdupq_n_u8(1);
  const uint8x16_t flip = vdupq_n_u8(invert ? 1 : 0);
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const uint8x16_t lt = vandq_u8(vcltq_u8(vld1q_u8(gray + i), thr), one);
    vst1q_u8(out + i, veorq_u8(lt, flip));
  }
  scalar::threshold_u8(gray + i, n - i, threshold, invert, out + i);
}

void erode_vertical(const std::int32_t* hdist, std::size_t rows, std::size_t cols, int radius,
                    bool blocked_border, std::uint8_t* out) {
  const int32x4_t r2 = vdupq_n_s32(radius * radius);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto ri = static_cast<std::int64_t>(r);
    const bool clipped = ri - radius < 0 || ri + radius >= static_cast<std::int64_t>(rows);
    if (clipped && blocked_border) {
      std::fill(out + r * cols, out + (r + 1) * cols, std::uint8_t{0});
      continue;
    }
    const std::int64_t lo = std::max<std::int64_t>(0, ri - radius);
    const std::int64_t hi = std::min<std::int64_t>(static_cast<std::int64_t>(rows) - 1, ri + radius);
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      int32x4_t best = vdupq_n_s32(std::numeric_limits<std::int32_t>::max());
      for (std::int64_t rr = lo; rr <= hi; ++rr) {
        const int32x4_t h = vld1q_s32(hdist + static_cast<std::size_t>(rr) * cols + c);
        const auto dy = static_cast<std::int32_t>(rr - ri);
        best = vminq_s32(best, vaddq_s32(vmulq_s32(h, h), vdupq_n_s32(dy * dy)));
      }
      std::uint32_t m[4];
      vst1q_u32(m, vcgtq_s32(best, r2));
      for (int k = 0; k < 4; ++k) out[r * cols + c + k] = m[k] ? 1 : 0;
    }
    {
      for (; c < cols; ++c) {
        std::int32_t best = std::numeric_limits<std::int32_t>::max();
        for (std::int64_t rr = lo; rr <= hi; ++rr) {
          const std::int32_t h = hdist[static_cast<std::size_t>(rr) * cols + c];
          const auto dy = static_cast<std::int32_t>(rr - ri);
          best = std::min(best, h * h + dy * dy);
        }
        out[r * cols + c] = best > radius * radius ? 1 : 0;
      }
    }
  }
}

void union_exit_distance(const double* xs, const double* ys, std::size_t n, const Rectangle* rects,
                         std::size_t n_rects, double* out) {
  const std::size_t vec_n = n - n % 2;
  for (std::size_t i = 0; i < vec_n; i += 2) {
    float64x2_t best = vdupq_n_f64(std::numeric_limits<double>::infinity());
    const float64x2_t px = vld1q_f64(xs + i), py = vld1q_f64(ys + i);
    for (std::size_t k = 0; k < n_rects; ++k) {
      const Rectangle& rc = rects[k];
      const float64x2_t c = vdupq_n_f64(std::cos(rc.angle)), s = vdupq_n_f64(std::sin(rc.angle));
      const float64x2_t dx0 = vsubq_f64(px, vdupq_n_f64(rc.center.x));
      const float64x2_t dy0 = vsubq_f64(py, vdupq_n_f64(rc.center.y));
      const float64x2_t lx = vaddq_f64(vmulq_f64(c, dx0), vmulq_f64(s, dy0));
      const float64x2_t ly = vsubq_f64(vmulq_f64(c, dy0), vmulq_f64(s, dx0));
      const float64x2_t ex = vmaxq_f64(vsubq_f64(vabsq_f64(lx), vdupq_n_f64(0.5 * rc.dims.x)), vdupq_n_f64(0.0));
      const float64x2_t ey = vmaxq_f64(vsubq_f64(vabsq_f64(ly), vdupq_n_f64(0.5 * rc.dims.y)), vdupq_n_f64(0.0));
      best = vminq_f64(best, vsqrtq_f64(vaddq_f64(vmulq_f64(ex, ex), vmulq_f64(ey, ey))));
    }
    vst1q_f64(out + i, best);
  }
  if (vec_n < n) scalar::union_exit_distance(xs + vec_n, ys + vec_n, n - vec_n, rects, n_rects, out + vec_n);
}

}  // namespace corridor::kernels::neon
