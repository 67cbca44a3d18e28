#include "corridor/route.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>

namespace corridor {

namespace {

std::string point_text(Vec2 p) {
  std::ostringstream s;
  s << "point (" << p.x << ", " << p.y << ") lies in no corridor";
  return s.str();
}

std::string pair_text(int a, int b) {
  std::ostringstream s;
  s << "no route from corridor " << a << " to corridor " << b;
  return s.str();
}

}  // namespace

NotCovered::NotCovered(Vec2 p) : PlanningError("route", point_text(p)), point(p) {}
Disconnected::Disconnected(int s, int g) : PlanningError("route", pair_text(s, g)), start_corridor(s), goal_corridor(g) {}

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Center: return "center";
    case NodeKind::Centroid: return "centroid";
    case NodeKind::Corner: return "corner";
    case NodeKind::Start: return "start";
    case NodeKind::Goal: return "goal";
  }
  return "?";
}

std::vector<int> containing_corridors(const CorridorGraph& cg, Vec2 p) {
  std::vector<int> out;
  for (const Rectangle& r : cg.rects)
    if (r.contains(p, 1e-9)) out.push_back(r.id);
  return out;
}

TransitionGraph build_transition_graph(const CorridorGraph& cg) {
  TransitionGraph tg;
  std::vector<std::pair<Vec2, NodeKind>> raw;
  for (const Rectangle& r : cg.rects) raw.push_back({r.center, NodeKind::Center});
  for (const CorridorEdge& e : cg.edges) {
    raw.push_back({polygon_centroid(e.polygon), NodeKind::Centroid});
    for (Vec2 p : e.polygon) raw.push_back({p, NodeKind::Corner});
  }
  // Coincident points collapse onto the first one seen.
  std::map<std::pair<long long, long long>, int> index;
  const auto key = [](Vec2 p) { return std::make_pair(std::llround(p.x * 1e7), std::llround(p.y * 1e7)); };
  for (const auto& [p, kind] : raw) {
    const auto k = key(p);
    if (index.count(k)) continue;
    bool merged = false;
    for (long long dx = -1; dx <= 1 && !merged; ++dx)
      for (long long dy = -1; dy <= 1 && !merged; ++dy) {
        const auto it = index.find({k.first + dx, k.second + dy});
        if (it != index.end() && distance(tg.nodes[static_cast<std::size_t>(it->second)].position, p) <= 1e-9) merged = true;
      }
    if (merged) continue;
    index[k] = static_cast<int>(tg.nodes.size());
    tg.nodes.push_back({p, kind, containing_corridors(cg, p)});
  }
  tg.corridor_nodes.assign(cg.rects.size(), {});
  for (std::size_t n = 0; n < tg.nodes.size(); ++n)
    for (int k : tg.nodes[n].owners) tg.corridor_nodes[static_cast<std::size_t>(k)].push_back(static_cast<int>(n));
  tg.adjacency.assign(tg.nodes.size(), {});
  // A convex corridor contains every segment between two of its points.
  for (std::size_t k = 0; k < cg.rects.size(); ++k) {
    const auto& own = tg.corridor_nodes[k];
    for (std::size_t x = 0; x < own.size(); ++x)
      for (std::size_t y = x + 1; y < own.size(); ++y) {
        const int a = own[x], b = own[y];
        TransitionEdge e{a, b, distance(tg.nodes[static_cast<std::size_t>(a)].position, tg.nodes[static_cast<std::size_t>(b)].position),
                         static_cast<int>(k)};
        const int id = static_cast<int>(tg.edges.size());
        tg.edges.push_back(e);
        tg.adjacency[static_cast<std::size_t>(a)].push_back(id);
        tg.adjacency[static_cast<std::size_t>(b)].push_back(id);
      }
  }
  return tg;
}

SearchPath search_route(const TransitionGraph& tg, const CorridorGraph& cg, Vec2 start, Vec2 goal, double lambda) {
  const std::vector<int> cs = containing_corridors(cg, start), cgoal = containing_corridors(cg, goal);
  if (cs.empty()) throw NotCovered(start);
  if (cgoal.empty()) throw NotCovered(goal);
  // State = (node, corridor it was reached through); offsets index owners.
  const std::size_t nn = tg.nodes.size();
  std::vector<std::size_t> offset(nn + 1, 0);
  for (std::size_t n = 0; n < nn; ++n) offset[n + 1] = offset[n] + tg.nodes[n].owners.size();
  const std::size_t n_states = offset[nn];
  const std::size_t source = n_states, sink = n_states + 1;
  const auto state_of = [&](int node, int corridor) -> std::size_t {
    const auto& own = tg.nodes[static_cast<std::size_t>(node)].owners;
    const auto it = std::lower_bound(own.begin(), own.end(), corridor);
    return offset[static_cast<std::size_t>(node)] + static_cast<std::size_t>(it - own.begin());
  };
  std::vector<int> state_node(n_states), state_corr(n_states);
  for (std::size_t n = 0; n < nn; ++n)
    for (std::size_t i = 0; i < tg.nodes[n].owners.size(); ++i) {
      state_node[offset[n] + i] = static_cast<int>(n);
      state_corr[offset[n] + i] = tg.nodes[n].owners[i];
    }
  std::vector<char> goal_corr(cg.rects.size(), 0);
  for (int k : cgoal) goal_corr[static_cast<std::size_t>(k)] = 1;

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n_states + 2, inf);
  std::vector<std::size_t> pred(n_states + 2, SIZE_MAX);
  std::vector<int> pred_corr(n_states + 2, -1);  // witness corridor of the incoming segment
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  const auto relax = [&](std::size_t from, std::size_t to, double w, int corr) {
    const double nd = dist[from] + w;
    if (nd < dist[to]) {
      dist[to] = nd;
      pred[to] = from;
      pred_corr[to] = corr;
      heap.push({nd, to});
    }
  };
  dist[source] = 0.0;
  for (int k : cs)
    for (int n : tg.corridor_nodes[static_cast<std::size_t>(k)])
      relax(source, state_of(n, k), distance(start, tg.nodes[static_cast<std::size_t>(n)].position), k);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    if (u == sink) break;
    const int node = state_node[u], corr = state_corr[u];
    // The final segment may run in any goal corridor holding this node.
    const double to_goal = distance(tg.nodes[static_cast<std::size_t>(node)].position, goal);
    for (int k : tg.nodes[static_cast<std::size_t>(node)].owners)
      if (goal_corr[static_cast<std::size_t>(k)] && (k == corr || cg.edge_between(corr, k) >= 0))
        relax(u, sink, to_goal + (k != corr ? lambda : 0.0), k);
    for (int ei : tg.adjacency[static_cast<std::size_t>(node)]) {
      const TransitionEdge& e = tg.edges[static_cast<std::size_t>(ei)];
      const int other = e.a == node ? e.b : e.a;
      // Corridor changes happen only across corridor-graph edges.
      if (e.corridor != corr && cg.edge_between(corr, e.corridor) < 0) continue;
      relax(u, state_of(other, e.corridor), e.length + (e.corridor != corr ? lambda : 0.0), e.corridor);
    }
  }
  if (!std::isfinite(dist[sink])) throw Disconnected(cs.front(), cgoal.front());
  SearchPath path;
  path.cost = dist[sink];
  std::vector<Vec2> pts{goal};
  std::vector<int> corrs;
  for (std::size_t s = sink; s != source; s = pred[s]) {
    corrs.push_back(pred_corr[s]);
    const std::size_t p = pred[s];
    pts.push_back(p == source ? start : tg.nodes[static_cast<std::size_t>(state_node[p])].position);
  }
  std::reverse(pts.begin(), pts.end());
  std::reverse(corrs.begin(), corrs.end());
  path.points = std::move(pts);
  path.corridors = std::move(corrs);
  for (std::size_t i = 1; i < path.corridors.size(); ++i)
    if (path.corridors[i] != path.corridors[i - 1]) ++path.transitions;
  return path;
}

SearchPath remove_redundant(const SearchPath& path, const CorridorGraph& cg) {
  SearchPath out;
  out.cost = path.cost;
  out.transitions = path.transitions;
  if (path.points.empty()) return out;
  const std::vector<Vec2>& pts = path.points;
  const std::size_t n = pts.size();
  if (n == 1 || path.corridors.size() + 1 != n) {
    out.points = pts;
    out.corridors = path.corridors;
    if (n == 1) {
      out.points.push_back(pts.front());
      const auto own = containing_corridors(cg, pts.front());
      out.corridors = {own.empty() ? -1 : own.front()};
    }
    return out;
  }
  const auto compatible = [&](int a, int b) { return a < 0 || b < 0 || a == b || cg.edge_between(a, b) >= 0; };
  // Corridors holding segment a-b that can follow `prev` and precede `next`.
  const auto candidates = [&](Vec2 a, Vec2 b, int prev, int next) {
    std::vector<int> ks;
    for (const Rectangle& r : cg.rects)
      if (r.contains(a) && r.contains(b) && compatible(prev, r.id) && compatible(r.id, next)) ks.push_back(r.id);
    return ks;
  };
  const auto choose = [](const std::vector<int>& ks, int prev, int next) {
    for (int pref : {prev, next})
      if (std::find(ks.begin(), ks.end(), pref) != ks.end()) return pref;
    return ks.front();
  };
  // The pending segment out.points.back() -> pts[e] may run in any corridor of `pending`,
  // each compatible with the last fixed corridor and the raw corridor leaving pts[e].
  int last = -1;
  const auto raw_after = [&](std::size_t e) { return e + 1 < n ? path.corridors[e] : -1; };
  out.points.push_back(pts[0]);
  std::vector<int> pending = candidates(pts[0], pts[1], -1, raw_after(1));
  if (pending.empty()) pending = {path.corridors[0]};
  for (std::size_t e = 1; e + 1 < n; ++e) {
    auto merged = candidates(out.points.back(), pts[e + 1], last, raw_after(e + 1));
    if (!merged.empty()) {
      pending = std::move(merged);
      continue;
    }
    last = choose(pending, last, path.corridors[e]);
    out.corridors.push_back(last);
    out.points.push_back(pts[e]);
    pending = candidates(pts[e], pts[e + 1], last, raw_after(e + 1));
    if (pending.empty()) pending = {path.corridors[e]};
  }
  out.corridors.push_back(choose(pending, last, -1));
  out.points.push_back(pts[n - 1]);
  return out;
}

DirectedCorridor direction_for(const Rectangle& r, Vec2 entry, Vec2 exit, double ratio_threshold) {
  DirectedCorridor d;
  d.corridor_id = r.id;
  d.entry = entry;
  d.exit = exit;
  const Vec2 l = rotate(exit - entry, -r.angle);
  const double w = r.dims.x, h = r.dims.y;
  bool along_x;
  if (h > 0 && w / h > ratio_threshold) {
    along_x = true;
  } else if (w > 0 && h / w > ratio_threshold) {
    along_x = false;
  } else {
    const double ax = std::abs(l.x), ay = std::abs(l.y);
    const double tie = 1e-12 * std::max(1.0, std::max(ax, ay));
    if (std::abs(ax - ay) <= tie) along_x = !(h > w);
    else along_x = ax > ay;
  }
  const double comp = along_x ? l.x : l.y;
  const double local_deg = along_x ? (comp >= 0 ? 0.0 : 180.0) : (comp >= 0 ? 90.0 : 270.0);
  double deg = local_deg + rad2deg(r.angle);
  deg = std::fmod(deg, 360.0);
  if (deg < 0) deg += 360.0;
  d.direction_deg = deg;
  d.direction = rotate(along_x ? Vec2{comp >= 0 ? 1.0 : -1.0, 0.0} : Vec2{0.0, comp >= 0 ? 1.0 : -1.0}, r.angle);
  return d;
}

std::vector<DirectedCorridor> assign_directions(const RoutePlan& plan, const CorridorGraph& cg, double ratio_threshold) {
  std::vector<DirectedCorridor> out;
  const auto& sc = plan.segment_corridors;
  std::size_t i = 0;
  while (i < sc.size()) {
    std::size_t j = i;
    while (j + 1 < sc.size() && sc[j + 1] == sc[i]) ++j;
    const Rectangle& r = cg.rects[static_cast<std::size_t>(sc[i])];
    out.push_back(direction_for(r, plan.waypoints[i], plan.waypoints[j + 1], ratio_threshold));
    i = j + 1;
  }
  return out;
}

RoutePlan plan_route(const TransitionGraph& tg, const CorridorGraph& cg, Vec2 start, Vec2 goal, const RouteOptions& opts) {
  const std::vector<int> cs = containing_corridors(cg, start), cgoal = containing_corridors(cg, goal);
  if (cs.empty()) throw NotCovered(start);
  if (cgoal.empty()) throw NotCovered(goal);
  RoutePlan plan;
  int common = -1;
  for (int k : cs)
    if (std::find(cgoal.begin(), cgoal.end(), k) != cgoal.end()) {
      common = k;
      break;
    }
  if (common >= 0) {
    plan.direct = true;
    plan.waypoints = {start, goal};
    plan.segment_corridors = {common};
    plan.cost = distance(start, goal);
  } else {
    const SearchPath raw = search_route(tg, cg, start, goal, opts.lambda);
    const SearchPath clean = remove_redundant(raw, cg);
    plan.waypoints = clean.points;
    plan.segment_corridors = clean.corridors;
    plan.cost = raw.cost;
    plan.transitions = raw.transitions;
  }
  for (int k : plan.segment_corridors)
    if (plan.sequence.empty() || plan.sequence.back() != k) plan.sequence.push_back(k);
  plan.directed = assign_directions(plan, cg, opts.ratio_threshold);
  return plan;
}

}  // namespace corridor
