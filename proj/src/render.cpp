#include "corridor/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace corridor {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Bounds {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  void add(Vec2 p) {
    x0 = std::min(x0, p.x); y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x); y1 = std::max(y1, p.y);
  }
  bool empty() const { return x1 < x0; }
};

}  // namespace

std::vector<Vec2> trajectory_polyline(const Trajectory& traj, const Limits& lim, double chord_tol) {
  std::vector<Vec2> pts;
  if (traj.primitives.empty()) return pts;
  pts.push_back(traj.primitives.front().start.position());
  const double r = lim.rho();
  // Sagitta of a chord spanning angle a on radius r is r (1 - cos(a / 2)).
  const double max_step = chord_tol >= 2.0 * r ? kPi : 2.0 * std::acos(1.0 - chord_tol / r);
  for (const Primitive& p : traj.primitives) {
    if (p.duration <= 0.0 || p.kind == PrimKind::T) continue;
    if (p.kind == PrimKind::C) {
      const int n = std::max(1, static_cast<int>(std::ceil(std::abs(p.swept) / max_step)));
      for (int i = 1; i < n; ++i) pts.push_back(p.state_at(p.duration * i / n, lim).position());
    }
    pts.push_back(p.end(lim).position());
  }
  if (pts.size() == 1) pts.push_back(pts.front());
  return pts;
}

std::string render_svg(const RenderInput& in) {
  Bounds b;
  if (in.grid) {
    const double d = in.grid->resolution();
    b.add(in.grid->origin() - Vec2{0.5 * d, 0.5 * d});
    b.add(in.grid->from_pixel_coords({static_cast<double>(in.grid->cols()) - 0.5, static_cast<double>(in.grid->rows()) - 0.5}));
  }
  if (in.corridors)
    for (const Rectangle& r : in.corridors->rects)
      for (Vec2 c : r.corners()) b.add(c);
  std::vector<Vec2> poly;
  if (in.trajectory) {
    poly = trajectory_polyline(*in.trajectory, in.limits, in.chord_tol);
    for (Vec2 p : poly) b.add(p);
  }
  if (in.waypoints)
    for (Vec2 p : *in.waypoints) b.add(p);
  if (b.empty()) b = {0, 0, 1, 1};

  const double s = in.pixels_per_meter;
  const double w = (b.x1 - b.x0) * s, h = (b.y1 - b.y0) * s;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h) << "\" viewBox=\"0 0 "
    << num(w) << ' ' << num(h) << "\">\n";
  // World meters inside, y up.
  o << "<g transform=\"matrix(" << num(s) << " 0 0 " << num(-s) << ' ' << num(-b.x0 * s) << ' ' << num(b.y1 * s)
    << ")\">\n";

  if (in.grid) {
    const OccupancyGrid& g = *in.grid;
    const double d = g.resolution();
    o << "<g id=\"grid\" fill=\"#333\">\n";
    for (std::size_t r = 0; r < g.rows(); ++r) {
      std::size_t c = 0;
      while (c < g.cols()) {
        if (!g.cell(r, c)) {
          ++c;
          continue;
        }
        const std::size_t c0 = c;
        while (c < g.cols() && g.cell(r, c)) ++c;
        const Vec2 p = g.from_pixel_coords({static_cast<double>(c0) - 0.5, static_cast<double>(r) - 0.5});
        o << "<rect x=\"" << num(p.x) << "\" y=\"" << num(p.y) << "\" width=\"" << num(d * static_cast<double>(c - c0))
          << "\" height=\"" << num(d) << "\"/>\n";
      }
    }
    o << "</g>\n";
  }
  if (in.corridors) {
    o << "<g id=\"corridors\" fill=\"#3a7bd5\" fill-opacity=\"0.25\" stroke=\"#1d4f99\" stroke-width=\"1\" "
         "vector-effect=\"non-scaling-stroke\">\n";
    for (const Rectangle& r : in.corridors->rects) {
      o << "<polygon data-id=\"" << r.id << "\" vector-effect=\"non-scaling-stroke\" points=\"";
      for (Vec2 c : r.corners()) o << num(c.x) << ',' << num(c.y) << ' ';
      o << "\"/>\n";
    }
    o << "</g>\n";
  }
  if (in.transitions) {
    o << "<g id=\"transition-nodes\" fill=\"#e08a00\">\n";
    const double rad = 2.0 / s;
    for (const TransitionNode& n : in.transitions->nodes)
      o << "<circle cx=\"" << num(n.position.x) << "\" cy=\"" << num(n.position.y) << "\" r=\"" << num(rad) << "\"/>\n";
    o << "</g>\n";
  }
  if (in.waypoints && !in.waypoints->empty()) {
    o << "<g id=\"waypoints\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" stroke-dasharray=\"4 3\">\n"
      << "<polyline vector-effect=\"non-scaling-stroke\" points=\"";
    for (Vec2 p : *in.waypoints) o << num(p.x) << ',' << num(p.y) << ' ';
    o << "\"/>\n</g>\n";
  }
  if (!poly.empty()) {
    o << "<g id=\"trajectory\" fill=\"none\" stroke=\"#0a8f3c\" stroke-width=\"2\">\n"
      << "<polyline vector-effect=\"non-scaling-stroke\" points=\"";
    for (Vec2 p : poly) o << num(p.x) << ',' << num(p.y) << ' ';
    o << "\"/>\n</g>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace corridor
