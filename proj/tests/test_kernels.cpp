#include <cstring>
#include <random>
#include <vector>

#include "corridor/geometry.hpp"
#include "corridor/kernels.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace corridor;
namespace k = corridor::kernels;

namespace {

std::vector<k::Backend> simd_backends() {
  std::vector<k::Backend> out;
  for (k::Backend b : {k::Backend::Avx2, k::Backend::Neon})
    if (k::backend_available(b)) out.push_back(b);
  return out;
}

// Horizontal capped distances as erode_free prepares them.
std::vector<std::int32_t> random_hdist(std::mt19937_64& rng, std::size_t n, int cap) {
  std::vector<std::int32_t> h(n);
  for (auto& v : h) v = static_cast<std::int32_t>(rng() % static_cast<unsigned>(cap + 1));
  return h;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar threshold matches its definition") {
  std::mt19937_64 rng(1);
  std::vector<std::uint8_t> gray(1000), out(1000);
  for (auto& g : gray) g = static_cast<std::uint8_t>(rng());
  for (bool invert : {false, true})
    for (int t : {0, 1, 127, 128, 200, 255}) {
      k::scalar::threshold_u8(gray.data(), gray.size(), static_cast<std::uint8_t>(t), invert, out.data());
      for (std::size_t i = 0; i < gray.size(); ++i) CHECK(out[i] == (((gray[i] < t) != invert) ? 1 : 0));
    }
}

TEST_CASE("scalar union exit distance is the minimum over rectangles") {
  std::mt19937_64 rng(2);
  std::vector<Rectangle> rects;
  for (int i = 0; i < 7; ++i) rects.push_back(testing::random_rect(rng, 4.0, 0.5, 3.0, i % 2 == 1));
  std::uniform_real_distribution<double> pos(-6.0, 6.0);
  std::vector<double> xs(333), ys(333), out(333);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = pos(rng);
    ys[i] = pos(rng);
  }
  k::scalar::union_exit_distance(xs.data(), ys.data(), xs.size(), rects.data(), rects.size(), out.data());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double best = 1e300;
    for (const Rectangle& r : rects) best = std::min(best, r.exit_distance({xs[i], ys[i]}));
    CHECK(out[i] == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("SIMD threshold is bit-identical to scalar") {
  std::mt19937_64 rng(3);
  for (k::Backend b : simd_backends()) {
    const k::KernelTable& t = k::table(b);
    for (std::size_t n : {0u, 1u, 15u, 31u, 32u, 33u, 64u, 1000u, 4097u}) {
      std::vector<std::uint8_t> gray(n), a(n), s(n);
      for (auto& g : gray) g = static_cast<std::uint8_t>(rng());
      for (bool invert : {false, true})
        for (int th : {0, 128, 255}) {
          t.threshold_u8(gray.data(), n, static_cast<std::uint8_t>(th), invert, a.data());
          k::scalar::threshold_u8(gray.data(), n, static_cast<std::uint8_t>(th), invert, s.data());
          CHECK(a == s);
        }
    }
  }
}

TEST_CASE("SIMD vertical erosion is bit-identical to scalar") {
  std::mt19937_64 rng(4);
  for (k::Backend b : simd_backends()) {
    const k::KernelTable& t = k::table(b);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t rows = 1 + rng() % 40, cols = 1 + rng() % 70;
      const int radius = static_cast<int>(rng() % 15);
      const auto h = random_hdist(rng, rows * cols, radius + 1);
      for (bool border : {false, true}) {
        std::vector<std::uint8_t> a(rows * cols), s(rows * cols);
        t.erode_vertical(h.data(), rows, cols, radius, border, a.data());
        k::scalar::erode_vertical(h.data(), rows, cols, radius, border, s.data());
        CHECK(a == s);
      }
    }
  }
}

TEST_CASE("SIMD union exit distance is bit-identical to scalar") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-8.0, 8.0);
  for (k::Backend b : simd_backends()) {
    const k::KernelTable& t = k::table(b);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Rectangle> rects;
      const int nr = 1 + static_cast<int>(rng() % 9);
      for (int i = 0; i < nr; ++i) rects.push_back(testing::random_rect(rng, 5.0, 0.3, 4.0, trial % 2 == 1));
      const std::size_t n = rng() % 300;
      std::vector<double> xs(n), ys(n), a(n), s(n);
      for (std::size_t i = 0; i < n; ++i) {
        xs[i] = pos(rng);
        ys[i] = pos(rng);
      }
      // Points on rectangle edges exercise the zero branch.
      if (n > 2) {
        xs[0] = rects[0].corners()[0].x;
        ys[0] = rects[0].corners()[0].y;
        xs[1] = rects[0].center.x;
        ys[1] = rects[0].center.y;
      }
      t.union_exit_distance(xs.data(), ys.data(), n, rects.data(), rects.size(), a.data());
      k::scalar::union_exit_distance(xs.data(), ys.data(), n, rects.data(), rects.size(), s.data());
      CHECK(std::memcmp(a.data(), s.data(), n * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("dispatch falls back to scalar when a backend is missing") {
  CHECK(k::table(k::Backend::Scalar).backend == k::Backend::Scalar);
  for (k::Backend b : {k::Backend::Avx2, k::Backend::Neon})
    if (!k::backend_available(b)) CHECK(k::table(b).backend == k::Backend::Scalar);
  CHECK(k::backend_available(k::active().backend));
}

}  // TEST_SUITE
