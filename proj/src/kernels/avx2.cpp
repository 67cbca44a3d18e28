// AVX2 variants. Compiled with -mavx2 -mfma; selected only when the CPU reports both.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "corridor/geometry.hpp"
#include "corridor/kernels.hpp"

namespace corridor::kernels::avx2 {

void threshold_u8(const std::uint8_t* gray, std::size_t n, std::uint8_t threshold, bool invert,
                  std::uint8_t* out) {
  const __m256i thr = _mm256_set1_epi8(static_cast<char>(threshold));
  const __m256i one = _mm256_set1_epi8(1);
  const __m256i flip = _mm256_set1_epi8(invert ? 1 : 0);
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i g = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(gray + i));
    // g >= thr  <=>  max(g, thr) == g  (unsigned)
    const __m256i ge = _mm256_cmpeq_epi8(_mm256_max_epu8(g, thr), g);
    const __m256i lt = _mm256_andnot_si256(ge, one);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_xor_si256(lt, flip));
  }
  scalar::threshold_u8(gray + i, n - i, threshold, invert, out + i);
}

void erode_vertical(const std::int32_t* hdist, std::size_t rows, std::size_t cols, int radius,
                    bool blocked_border, std::uint8_t* out) {
  const __m256i r2 = _mm256_set1_epi32(radius * radius);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto ri = static_cast<std::int64_t>(r);
    const bool clipped = ri - radius < 0 || ri + radius >= static_cast<std::int64_t>(rows);
    if (clipped && blocked_border) {
      std::memset(out + r * cols, 0, cols);
      continue;
    }
    const std::int64_t lo = std::max<std::int64_t>(0, ri - radius);
    const std::int64_t hi = std::min<std::int64_t>(static_cast<std::int64_t>(rows) - 1, ri + radius);
    std::size_t c = 0;
    for (; c + 8 <= cols; c += 8) {
      __m256i best = _mm256_set1_epi32(std::numeric_limits<std::int32_t>::max());
      for (std::int64_t rr = lo; rr <= hi; ++rr) {
        const __m256i h = _mm256_loadu_si256(
            reinterpret_cast<const __m256i*>(hdist + static_cast<std::size_t>(rr) * cols + c));
        const auto dy = static_cast<std::int32_t>(rr - ri);
        const __m256i v = _mm256_add_epi32(_mm256_mullo_epi32(h, h), _mm256_set1_epi32(dy * dy));
        best = _mm256_min_epi32(best, v);
      }
      const int mask = _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpgt_epi32(best, r2)));
      std::uint8_t* o = out + r * cols + c;
      for (int k = 0; k < 8; ++k) o[k] = static_cast<std::uint8_t>((mask >> k) & 1);
    }
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

void union_exit_distance(const double* xs, const double* ys, std::size_t n, const Rectangle* rects,
                         std::size_t n_rects, double* out) {
  const std::size_t vec_n = n - n % 4;
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  for (std::size_t i = 0; i < vec_n; i += 4) {
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    const __m256d px = _mm256_loadu_pd(xs + i), py = _mm256_loadu_pd(ys + i);
    for (std::size_t k = 0; k < n_rects; ++k) {
      const Rectangle& rc = rects[k];
      const __m256d c = _mm256_set1_pd(std::cos(rc.angle)), s = _mm256_set1_pd(std::sin(rc.angle));
      const __m256d dx0 = _mm256_sub_pd(px, _mm256_set1_pd(rc.center.x));
      const __m256d dy0 = _mm256_sub_pd(py, _mm256_set1_pd(rc.center.y));
      const __m256d lx = _mm256_add_pd(_mm256_mul_pd(c, dx0), _mm256_mul_pd(s, dy0));
      const __m256d ly = _mm256_sub_pd(_mm256_mul_pd(c, dy0), _mm256_mul_pd(s, dx0));
      const __m256d ex = _mm256_max_pd(_mm256_sub_pd(_mm256_andnot_pd(sign, lx), _mm256_set1_pd(0.5 * rc.dims.x)), zero);
      const __m256d ey = _mm256_max_pd(_mm256_sub_pd(_mm256_andnot_pd(sign, ly), _mm256_set1_pd(0.5 * rc.dims.y)), zero);
      const __m256d d = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey)));
      best = _mm256_min_pd(best, d);
    }
    _mm256_storeu_pd(out + i, best);
  }
  if (vec_n < n) scalar::union_exit_distance(xs + vec_n, ys + vec_n, n - vec_n, rects, n_rects, out + vec_n);
}

}  // namespace corridor::kernels::avx2
