#include "corridor/decomposition.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

namespace corridor {

std::vector<Box> carve_obstacle(const Box& rect, const Box& bbox) {
  std::vector<Box> out;
  const Box ob{std::max(rect.xmin, bbox.xmin), std::max(rect.ymin, bbox.ymin), std::min(rect.xmax, bbox.xmax),
               std::min(rect.ymax, bbox.ymax)};
  if (ob.xmin >= ob.xmax || ob.ymin >= ob.ymax) return {rect};
  const auto keep = [&](Box b) {
    if (b.width() > 0.0 && b.height() > 0.0) out.push_back(b);
  };
  keep({rect.xmin, rect.ymin, ob.xmin, rect.ymax});
  keep({ob.xmax, rect.ymin, rect.xmax, rect.ymax});
  keep({ob.xmin, rect.ymin, ob.xmax, ob.ymin});
  keep({ob.xmin, ob.ymax, ob.xmax, rect.ymax});
  return out;
}

std::vector<Rectangle> filter_min_size(const std::vector<Rectangle>& rects, double min_w, double min_h) {
  std::vector<Rectangle> out;
  for (const Rectangle& r : rects)
    if (r.dims.x >= min_w - 1e-12 && r.dims.y >= min_h - 1e-12) out.push_back(r);
  return out;
}

namespace {

bool separated_on(const std::vector<Vec2>& pa, const std::vector<Vec2>& pb, Vec2 axis) {
  double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
  for (Vec2 p : pa) {
    const double d = dot(p, axis);
    amin = std::min(amin, d);
    amax = std::max(amax, d);
  }
  for (Vec2 p : pb) {
    const double d = dot(p, axis);
    bmin = std::min(bmin, d);
    bmax = std::max(bmax, d);
  }
  const double eps = 1e-9 * std::max(1.0, std::max(std::abs(amax), std::abs(bmax)));
  return amax < bmin - eps || bmax < amin - eps;
}

}  // namespace

std::optional<Polygon> sat_overlap(const Rectangle& a, const Rectangle& b) {
  const auto ca = a.corners(), cb = b.corners();
  const Vec2 axes[4] = {unit_from_angle(a.angle), unit_from_angle(a.angle + 0.5 * kPi), unit_from_angle(b.angle),
                        unit_from_angle(b.angle + 0.5 * kPi)};
  for (Vec2 ax : axes)
    if (separated_on(ca, cb, ax)) return std::nullopt;
  Polygon poly = clip_convex(ca, cb);
  if (poly.empty()) return std::nullopt;
  return poly;
}

int CorridorGraph::edge_between(int i, int j) const {
  if (i < 0 || static_cast<std::size_t>(i) >= adjacency.size()) return -1;
  for (int e : adjacency[static_cast<std::size_t>(i)]) {
    const CorridorEdge& ed = edges[static_cast<std::size_t>(e)];
    if ((ed.i == i && ed.j == j) || (ed.i == j && ed.j == i)) return e;
  }
  return -1;
}

int CorridorGraph::component_count() const {
  std::vector<int> comp(rects.size(), -1);
  int count = 0;
  for (std::size_t s = 0; s < rects.size(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{static_cast<int>(s)};
    comp[s] = count;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int e : adjacency[static_cast<std::size_t>(u)]) {
        const int v = edges[static_cast<std::size_t>(e)].i == u ? edges[static_cast<std::size_t>(e)].j
                                                                 : edges[static_cast<std::size_t>(e)].i;
        if (comp[static_cast<std::size_t>(v)] < 0) {
          comp[static_cast<std::size_t>(v)] = count;
          stack.push_back(v);
        }
      }
    }
    ++count;
  }
  return count;
}

CorridorGraph build_corridor_graph(const std::vector<Rectangle>& rects, double a) {
  CorridorGraph g;
  g.rects = rects;
  g.adjacency.assign(rects.size(), {});
  std::vector<Box> boxes;
  boxes.reserve(rects.size());
  for (const Rectangle& r : rects) boxes.push_back(Box::of(r));
  for (std::size_t i = 0; i < rects.size(); ++i)
    for (std::size_t j = i + 1; j < rects.size(); ++j) {
      const Box& bi = boxes[i];
      const Box& bj = boxes[j];
      const double tol = 1e-9;
      if (bi.xmax < bj.xmin - tol || bj.xmax < bi.xmin - tol || bi.ymax < bj.ymin - tol || bj.ymax < bi.ymin - tol)
        continue;
      auto poly = sat_overlap(rects[i], rects[j]);
      if (!poly) continue;
      CorridorEdge e;
      e.i = static_cast<int>(i);
      e.j = static_cast<int>(j);
      if (poly->size() >= 3 && largest_inscribed_disk(*poly).radius >= a - 1e-9) {
        e.polygon = std::move(*poly);
      } else if (std::abs(polygon_area(*poly)) <= 1e-12) {
        double len = 0.0;
        for (Vec2 p : *poly)
          for (Vec2 q : *poly) len = std::max(len, distance(p, q));
        if (len < 2.0 * a - 1e-9) continue;
        e.polygon = std::move(*poly);
        e.shared_edge = true;
      } else {
        continue;
      }
      const int id = static_cast<int>(g.edges.size());
      g.edges.push_back(std::move(e));
      g.adjacency[i].push_back(id);
      g.adjacency[j].push_back(id);
    }
  return g;
}

GrowthRaster::GrowthRaster(std::size_t r, std::size_t c, std::vector<std::uint8_t> m)
    : rows(r), cols(c), mask(std::move(m)), sums(r, c, mask) {}

bool GrowthRaster::all_set(long r0, long c0, long r1, long c1) const {
  if (r0 < 0 || c0 < 0 || r1 >= static_cast<long>(rows) || c1 >= static_cast<long>(cols) || r0 > r1 || c0 > c1)
    return false;
  const auto want = static_cast<std::uint64_t>(r1 - r0 + 1) * static_cast<std::uint64_t>(c1 - c0 + 1);
  return sums.count(r0, c0, r1, c1) == want;
}

PixelBox grow_box(const GrowthRaster& g, long r, long c, bool x_first) {
  long c0 = c, c1 = c, r0 = r, r1 = r;
  if (!g.at(r, c)) return {static_cast<double>(c), static_cast<double>(r), static_cast<double>(c), static_cast<double>(r)};
  // Doubling then bisection per side keeps each expansion logarithmic.
  const auto extend = [](auto ok) {
    long step = 1, good = 0;
    while (ok(good + step)) {
      good += step;
      step *= 2;
    }
    for (step /= 2; step >= 1; step /= 2)
      if (ok(good + step)) good += step;
    return good;
  };
  const auto grow_x = [&] {
    c0 -= extend([&](long k) { return g.all_set(r0, c0 - k, r1, c0 - 1); });
    c1 += extend([&](long k) { return g.all_set(r0, c1 + 1, r1, c1 + k); });
  };
  const auto grow_y = [&] {
    r0 -= extend([&](long k) { return g.all_set(r0 - k, c0, r0 - 1, c1); });
    r1 += extend([&](long k) { return g.all_set(r1 + 1, c0, r1 + k, c1); });
  };
  if (x_first) {
    grow_x();
    grow_y();
  } else {
    grow_y();
    grow_x();
  }
  return {static_cast<double>(c0), static_cast<double>(r0), static_cast<double>(c1), static_cast<double>(r1)};
}

namespace {

int priority(SnapKind k) {
  switch (k) {
    case SnapKind::Double: return 0;
    case SnapKind::Full: return 1;
    case SnapKind::Half: return 2;
    default: return 3;
  }
}

struct CellSpan {
  long r0, c0, r1, c1;
};

CellSpan cells_of(const PixelBox& b) {
  return {static_cast<long>(std::ceil(b.r0 - 1e-9)), static_cast<long>(std::ceil(b.c0 - 1e-9)),
          static_cast<long>(std::floor(b.r1 + 1e-9)), static_cast<long>(std::floor(b.c1 + 1e-9))};
}

bool box_less(const PixelBox& a, const PixelBox& b) {
  if (a.r0 != b.r0) return a.r0 < b.r0;
  if (a.c0 != b.c0) return a.c0 < b.c0;
  if (a.r1 != b.r1) return a.r1 < b.r1;
  return a.c1 < b.c1;
}

}  // namespace

std::vector<PixelBox> rectangle_candidates(const SnapGraph& graph, const GrowthRaster& raster,
                                           const GenerateOptions& opts) {
  std::vector<int> order;
  for (const SnapPoint& s : graph.snaps)
    if (!s.removed && s.kind != SnapKind::Acute) order.push_back(s.id);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return priority(graph.snaps[static_cast<std::size_t>(a)].kind) < priority(graph.snaps[static_cast<std::size_t>(b)].kind);
  });
  std::vector<PixelBox> out;
  std::set<std::pair<long, long>> seen_seeds;
  std::set<std::pair<long, long>> corners;
  const auto add_box = [&](const PixelBox& b) {
    for (const PixelBox& o : out)
      if (o == b) return;
    out.push_back(b);
    const CellSpan s = cells_of(b);
    corners.insert({s.r0, s.c0});
    corners.insert({s.r0, s.c1});
    corners.insert({s.r1, s.c0});
    corners.insert({s.r1, s.c1});
  };
  for (int id : order) {
    const SnapPoint& s = graph.snaps[static_cast<std::size_t>(id)];
    const Vec2 p = graph.nodes[static_cast<std::size_t>(s.node)].position;
    for (int qx : {-1, 1})
      for (int qy : {-1, 1})
        for (int k = 0; k <= opts.seed_search; ++k) {
          const long c = std::lround(p.x + 0.5 * qx * k), r = std::lround(p.y + 0.5 * qy * k);
          if (!raster.at(r, c)) continue;
          if (!seen_seeds.insert({r, c}).second) break;
          if (corners.count({r, c})) break;
          add_box(grow_box(raster, r, c, true));
          add_box(grow_box(raster, r, c, false));
          break;
        }
  }
  return out;
}

std::vector<PixelBox> select_cover(std::vector<PixelBox> candidates, const GrowthRaster& target,
                                   const GenerateOptions& opts) {
  std::sort(candidates.begin(), candidates.end(), box_less);
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  const std::size_t cols = target.cols;
  std::vector<std::uint8_t> covered(target.rows * cols, 0);
  const auto gain = [&](const PixelBox& b) {
    const CellSpan s = cells_of(b);
    std::size_t g = 0;
    for (long r = std::max(0L, s.r0); r <= std::min<long>(s.r1, static_cast<long>(target.rows) - 1); ++r) {
      const std::size_t base = static_cast<std::size_t>(r) * cols;
      for (long c = std::max(0L, s.c0); c <= std::min<long>(s.c1, static_cast<long>(cols) - 1); ++c) {
        const std::size_t k = base + static_cast<std::size_t>(c);
        g += static_cast<std::size_t>(target.mask[k] & static_cast<std::uint8_t>(covered[k] ^ 1u));
      }
    }
    return g;
  };
  const auto mark = [&](const PixelBox& b, std::vector<std::uint8_t>& m) {
    const CellSpan s = cells_of(b);
    for (long r = std::max(0L, s.r0); r <= std::min<long>(s.r1, static_cast<long>(target.rows) - 1); ++r)
      for (long c = std::max(0L, s.c0); c <= std::min<long>(s.c1, static_cast<long>(cols) - 1); ++c)
        m[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c)] = 1;
  };
  std::vector<PixelBox> chosen;
  // Lazy greedy: gains only shrink as coverage grows.
  using Item = std::pair<std::size_t, std::size_t>;  // (gain, index)
  const auto cmp = [](const Item& a, const Item& b) { return a.first < b.first || (a.first == b.first && a.second > b.second); };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
  for (std::size_t i = 0; i < candidates.size(); ++i) heap.push({gain(candidates[i]), i});
  while (!heap.empty()) {
    auto [g, i] = heap.top();
    heap.pop();
    if (static_cast<double>(g) < opts.min_gain_px) break;
    const std::size_t now = gain(candidates[i]);
    if (now != g) {
      heap.push({now, i});
      continue;
    }
    chosen.push_back(candidates[i]);
    mark(candidates[i], covered);
  }
  // Leftover free cells no snap seed reached.
  std::vector<std::uint8_t> tried(covered);
  for (std::size_t k = 0; k < covered.size(); ++k) {
    if (!target.mask[k] || tried[k]) continue;
    const long r = static_cast<long>(k / cols), c = static_cast<long>(k % cols);
    const PixelBox a = grow_box(target, r, c, true), b = grow_box(target, r, c, false);
    std::size_t ga = a.width() + 1e-9 >= opts.min_size_px && a.height() + 1e-9 >= opts.min_size_px ? gain(a) : 0;
    std::size_t gb = b.width() + 1e-9 >= opts.min_size_px && b.height() + 1e-9 >= opts.min_size_px ? gain(b) : 0;
    const PixelBox& best = gb > ga ? b : a;
    const std::size_t gbest = std::max(ga, gb);
    if (static_cast<double>(gbest) >= opts.min_gain_px) {
      chosen.push_back(best);
      mark(best, covered);
      mark(best, tried);
    } else {
      tried[k] = 1;
    }
  }
  return chosen;
}

namespace {

Box to_box(const PixelBox& b) { return {b.c0, b.r0, b.c1, b.r1}; }
PixelBox to_pixel_box(const Box& b) { return {b.xmin, b.ymin, b.xmax, b.ymax}; }

struct ObstacleRaster {
  std::vector<std::uint8_t> cleared;  // occupancy with obstacle components removed
  std::vector<Box> carve;             // pixel-coordinate carving boxes, clearance included
};

ObstacleRaster obstacle_raster(const OccupancyGrid& grid, const std::vector<BoundaryLoop>& loops,
                               const std::vector<int>& obstacle_loops, int rho) {
  ObstacleRaster out;
  out.cleared = grid.cells();
  const long rows = static_cast<long>(grid.rows()), cols = static_cast<long>(grid.cols());
  std::vector<std::uint8_t> visited(grid.size(), 0);
  for (int li : obstacle_loops) {
    if (li < 0 || static_cast<std::size_t>(li) >= loops.size()) continue;
    const PixelIndex seed = loops[static_cast<std::size_t>(li)].blocked_cell;
    if (!grid.in_bounds(seed.row, seed.col) || !grid.occupied(seed.row, seed.col)) continue;
    const std::size_t sk = static_cast<std::size_t>(seed.row * cols + seed.col);
    if (visited[sk]) continue;
    // 8-connected blocked component, matching the boundary tracer.
    std::vector<std::size_t> stack{sk};
    visited[sk] = 1;
    long rmin = seed.row, rmax = seed.row, cmin = seed.col, cmax = seed.col;
    bool touches_border = false;
    std::vector<std::size_t> members;
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      members.push_back(k);
      const long r = static_cast<long>(k) / cols, c = static_cast<long>(k) % cols;
      rmin = std::min(rmin, r); rmax = std::max(rmax, r);
      cmin = std::min(cmin, c); cmax = std::max(cmax, c);
      for (long dr = -1; dr <= 1; ++dr)
        for (long dc = -1; dc <= 1; ++dc) {
          const long nr = r + dr, nc = c + dc;
          if (!grid.in_bounds(nr, nc)) {
            touches_border = true;
            continue;
          }
          const std::size_t nk = static_cast<std::size_t>(nr * cols + nc);
          if (!visited[nk] && grid.occupied(nr, nc)) {
            visited[nk] = 1;
            stack.push_back(nk);
          }
        }
    }
    if (touches_border) continue;
    for (std::size_t k : members) out.cleared[k] = 0;
    const double pad = static_cast<double>(rho) + 0.5;
    out.carve.push_back({static_cast<double>(cmin) - pad, static_cast<double>(rmin) - pad,
                         static_cast<double>(cmax) + pad, static_cast<double>(rmax) + pad});
  }
  (void)rows;
  return out;
}

bool overlaps(const Box& a, const Box& b) {
  return std::min(a.xmax, b.xmax) > std::max(a.xmin, b.xmin) && std::min(a.ymax, b.ymax) > std::max(a.ymin, b.ymin);
}

// Carves every obstacle box out of `b`; fragments also get full-width
// bottom/top variants so neighbouring pieces overlap instead of just touching.
std::vector<Box> carve_all(const Box& b, const std::vector<Box>& carve) {
  std::vector<Box> work{b};
  std::vector<Box> extra;
  for (const Box& ob : carve) {
    std::vector<Box> next;
    for (const Box& w : work) {
      if (!overlaps(w, ob)) {
        next.push_back(w);
        continue;
      }
      for (const Box& f : carve_obstacle(w, ob)) next.push_back(f);
      const double y0 = std::max(w.ymin, ob.ymin), y1 = std::min(w.ymax, ob.ymax);
      if (y0 > w.ymin) extra.push_back({w.xmin, w.ymin, w.xmax, y0});
      if (y1 < w.ymax) extra.push_back({w.xmin, y1, w.xmax, w.ymax});
    }
    work = std::move(next);
  }
  for (const Box& e : extra) {
    bool clean = true;
    for (const Box& ob : carve) clean = clean && !overlaps(e, ob);
    if (clean) work.push_back(e);
  }
  return work;
}

}  // namespace

double eroded_coverage(const OccupancyGrid& grid, const std::vector<Rectangle>& rects, int rho_px) {
  const auto eroded = erode_free(grid.rows(), grid.cols(), grid.cells(), rho_px, true);
  std::vector<std::uint8_t> cov(grid.size(), 0);
  for (const Rectangle& r : rects)
    for (PixelIndex p : rasterize_rectangle(grid, r)) cov[static_cast<std::size_t>(p.row) * grid.cols() + static_cast<std::size_t>(p.col)] = 1;
  std::size_t total = 0, hit = 0;
  for (std::size_t k = 0; k < eroded.size(); ++k) {
    total += eroded[k];
    hit += eroded[k] & cov[k];
  }
  return total == 0 ? 1.0 : static_cast<double>(hit) / static_cast<double>(total);
}

Decomposition decompose(const OccupancyGrid& grid, const DecomposeOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  Decomposition d;
  const double delta = grid.resolution();
  const int rho = opts.rho_px > 0 ? opts.rho_px : clearance_pixels(opts.robot_radius, delta);
  d.stats.rho_px = rho;
  d.stats.pixels = grid.size();

  WallOptions wopts = opts.walls;
  wopts.clearance_px = rho;
  d.walls = extract_walls(grid, wopts);
  d.stats.wall_count = d.walls.walls.size();

  const double d_s = opts.snap_distance_px > 0.0 ? opts.snap_distance_px : 2.0 * rho;
  d.snaps = build_snap_graph(d.walls.walls, d_s);
  ExtensionOptions ext;
  ext.d_s = d_s;
  extend_half_snaps(d.snaps, ext);
  if (opts.include_obstacles) {
    d.faces = trace_faces(d.snaps);
    remove_obstacles(d.snaps, d.faces);
    extend_half_snaps(d.snaps, ext);
  }
  resolve_obtuse(d.snaps);
  d.stats.snap_count = d.snaps.active_snap_count();

  GrowthRaster eroded(grid.rows(), grid.cols(), erode_free(grid.rows(), grid.cols(), grid.cells(), rho, true));
  GenerateOptions gen = opts.generate;
  if (opts.auto_gain) gen.min_gain_px = 4.0 * rho * rho;
  gen.min_size_px = 2.0 * opts.robot_radius / delta;

  std::vector<PixelBox> candidates;
  if (opts.include_obstacles && !d.snaps.obstacle_loops.empty()) {
    ObstacleRaster obs = obstacle_raster(grid, d.walls.loops, d.snaps.obstacle_loops, rho);
    d.stats.obstacle_count = obs.carve.size();
    GrowthRaster open(grid.rows(), grid.cols(), erode_free(grid.rows(), grid.cols(), obs.cleared, rho, true));
    for (const PixelBox& b : rectangle_candidates(d.snaps, open, gen))
      for (const Box& f : carve_all(to_box(b), obs.carve)) candidates.push_back(to_pixel_box(f));
  } else {
    candidates = rectangle_candidates(d.snaps, eroded, gen);
  }
  std::erase_if(candidates, [&](const PixelBox& b) {
    return b.width() + 1e-9 < gen.min_size_px || b.height() + 1e-9 < gen.min_size_px;
  });
  d.stats.candidate_count = candidates.size();
  const std::vector<PixelBox> cover = select_cover(std::move(candidates), eroded, gen);

  std::vector<Rectangle> rects;
  for (const PixelBox& b : cover) {
    Rectangle r;
    r.id = static_cast<int>(rects.size());
    r.center = grid.from_pixel_coords({0.5 * (b.c0 + b.c1), 0.5 * (b.r0 + b.r1)});
    r.dims = {b.width() * delta, b.height() * delta};
    r.angle = 0.0;
    rects.push_back(r);
  }
  rects = filter_min_size(rects, 2.0 * opts.robot_radius, 2.0 * opts.robot_radius);
  for (std::size_t i = 0; i < rects.size(); ++i) rects[i].id = static_cast<int>(i);
  d.graph = build_corridor_graph(rects, opts.robot_radius);
  d.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  d.stats.coverage = eroded_coverage(grid, d.graph.rects, rho);
  return d;
}

}  // namespace corridor
