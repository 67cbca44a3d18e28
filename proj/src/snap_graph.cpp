#include "corridor/snap_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace corridor {

const char* to_string(SnapKind k) {
  switch (k) {
    case SnapKind::Full: return "full";
    case SnapKind::Half: return "half";
    case SnapKind::Double: return "double";
    case SnapKind::Acute: return "acute";
  }
  return "?";
}

const char* to_string(SnapSource s) {
  switch (s) {
    case SnapSource::Clustered: return "clustered";
    case SnapSource::Extension: return "extension";
    case SnapSource::ObtuseSplit: return "obtuse-split";
  }
  return "?";
}

int SnapGraph::add_node(Vec2 p) {
  nodes.push_back({p, {}, false});
  return static_cast<int>(nodes.size()) - 1;
}

int SnapGraph::add_wall(int na, int nb, Vec2 normal, bool extension, int loop) {
  GraphWall w;
  w.id = static_cast<int>(walls.size());
  w.node_a = na;
  w.node_b = nb;
  w.a = nodes[static_cast<std::size_t>(na)].position;
  w.b = nodes[static_cast<std::size_t>(nb)].position;
  w.normal = normal;
  w.extension = extension;
  w.loop = loop;
  walls.push_back(w);
  nodes[static_cast<std::size_t>(na)].walls.push_back(w.id);
  nodes[static_cast<std::size_t>(nb)].walls.push_back(w.id);
  return w.id;
}

int SnapGraph::split_wall(int wi, Vec2 p) {
  const int n = add_node(p);
  GraphWall& w = walls[static_cast<std::size_t>(wi)];
  const int old_b = w.node_b;
  const Vec2 normal = w.normal;
  const bool ext = w.extension;
  const int loop = w.loop;
  w.node_b = n;
  w.b = p;
  auto& bw = nodes[static_cast<std::size_t>(old_b)].walls;
  bw.erase(std::remove(bw.begin(), bw.end(), wi), bw.end());
  nodes[static_cast<std::size_t>(n)].walls.push_back(wi);
  add_wall(n, old_b, normal, ext, loop);
  return n;
}

std::vector<int> SnapGraph::active_walls_at(int node) const {
  std::vector<int> out;
  for (int w : nodes[static_cast<std::size_t>(node)].walls)
    if (!walls[static_cast<std::size_t>(w)].removed) out.push_back(w);
  return out;
}

std::size_t SnapGraph::active_wall_count() const {
  return static_cast<std::size_t>(std::count_if(walls.begin(), walls.end(), [](const GraphWall& w) { return !w.removed; }));
}

std::size_t SnapGraph::active_snap_count() const {
  return static_cast<std::size_t>(std::count_if(snaps.begin(), snaps.end(), [](const SnapPoint& s) { return !s.removed; }));
}

namespace {

struct UnionFind {
  std::vector<int> parent, rank;
  explicit UnionFind(std::size_t n) : parent(n), rank(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    if (rank[static_cast<std::size_t>(a)] == rank[static_cast<std::size_t>(b)]) ++rank[static_cast<std::size_t>(a)];
  }
};

std::optional<Vec2> line_intersection(Vec2 p, Vec2 u, Vec2 q, Vec2 v) {
  const double den = cross(u, v);
  if (std::abs(den) < 1e-12) return std::nullopt;
  const double t = cross(q - p, v) / den;
  return p + u * t;
}

}  // namespace

std::vector<std::vector<int>> cluster_points(const std::vector<Vec2>& pts, double d_s) {
  const std::size_t n = pts.size();
  UnionFind uf(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return pts[static_cast<std::size_t>(a)].x < pts[static_cast<std::size_t>(b)].x ||
           (pts[static_cast<std::size_t>(a)].x == pts[static_cast<std::size_t>(b)].x && a < b);
  });
  const double d2 = d_s * d_s;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 pi = pts[static_cast<std::size_t>(order[i])];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 pj = pts[static_cast<std::size_t>(order[j])];
      if (pj.x - pi.x > d_s) break;
      const Vec2 d = pj - pi;
      if (dot(d, d) <= d2) uf.unite(order[i], order[j]);
    }
  }
  std::map<int, std::vector<int>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[uf.find(static_cast<int>(i))].push_back(static_cast<int>(i));
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

std::vector<EndpointCluster> cluster_endpoints(const std::vector<WallLine>& walls, double d_s) {
  std::vector<Vec2> pts;
  pts.reserve(2 * walls.size());
  for (const WallLine& w : walls) {
    pts.push_back(w.p);
    pts.push_back(w.q);
  }
  std::vector<EndpointCluster> out;
  for (auto& members : cluster_points(pts, d_s)) {
    EndpointCluster c;
    for (int m : members) c.centroid += pts[static_cast<std::size_t>(m)];
    c.centroid = c.centroid / static_cast<double>(members.size());
    c.endpoints = std::move(members);
    out.push_back(std::move(c));
  }
  return out;
}

double interior_angle_deg(Vec2 corner, const WallLine& a, Vec2 a_far, const WallLine& b, Vec2 b_far) {
  const Vec2 da = normalized(a_far - corner), db = normalized(b_far - corner);
  const double theta = rad2deg(std::acos(std::clamp(dot(da, db), -1.0, 1.0)));
  const double sa = dot(a.normal, db), sb = dot(b.normal, da);
  if (sa > 1e-12 && sb > 1e-12) return theta;
  if (sa < -1e-12 && sb < -1e-12) return 360.0 - theta;
  return 180.0;
}

ClusterClass classify_cluster(const std::vector<WallLine>& walls, const EndpointCluster& cluster) {
  ClusterClass cc;
  cc.position = cluster.centroid;
  const auto& eps = cluster.endpoints;
  const auto wall_of = [&](int e) -> const WallLine& { return walls[static_cast<std::size_t>(e / 2)]; };
  const auto near_end = [&](int e) { return e % 2 == 0 ? wall_of(e).p : wall_of(e).q; };
  const auto far_end = [&](int e) { return e % 2 == 0 ? wall_of(e).q : wall_of(e).p; };
  if (eps.size() == 1) {
    cc.kind = SnapKind::Half;
    cc.half_pair = true;
    cc.position = near_end(eps[0]);
    cc.interior_angle_deg = 360.0;
    return cc;
  }
  if (eps.size() == 2) {
    const WallLine& a = wall_of(eps[0]);
    const WallLine& b = wall_of(eps[1]);
    const auto x = line_intersection(a.p, a.direction, b.p, b.direction);
    if (!x || distance(*x, cluster.centroid) > 4.0 * (distance(near_end(eps[0]), near_end(eps[1])) + 1.0)) {
      cc.kind = SnapKind::Half;
      cc.half_pair = true;
      cc.interior_angle_deg = 180.0;
      return cc;
    }
    cc.position = *x;
    const double ang = interior_angle_deg(*x, a, far_end(eps[0]), b, far_end(eps[1]));
    cc.interior_angle_deg = ang;
    if (ang >= 180.0 - 1e-9) {
      cc.kind = SnapKind::Half;
      cc.half_pair = true;
    } else if (ang < 90.0 - 1e-6) {
      cc.kind = SnapKind::Acute;
    } else {
      cc.kind = SnapKind::Full;
    }
    return cc;
  }
  // Three or more wall ends: least-squares point of the incident lines.
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  for (int e : eps) {
    const WallLine& w = wall_of(e);
    const Vec2 n = left_normal(w.direction);
    const double c = dot(n, w.p);
    a11 += n.x * n.x; a12 += n.x * n.y; a22 += n.y * n.y;
    b1 += n.x * c; b2 += n.y * c;
  }
  const double det = a11 * a22 - a12 * a12;
  if (std::abs(det) > 1e-9) {
    const Vec2 p{(a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det};
    if (distance(p, cluster.centroid) < 4.0 * 14.0) cc.position = p;
  }
  cc.kind = SnapKind::Full;
  cc.interior_angle_deg = 90.0;
  return cc;
}

SnapGraph build_snap_graph(const std::vector<WallLine>& input, double d_s) {
  std::vector<WallLine> walls = input;
  std::vector<EndpointCluster> clusters;
  std::vector<std::string> diags;
  // Walls collapsing into a single cluster carry no corner information.
  for (int iter = 0; iter < 8; ++iter) {
    clusters = cluster_endpoints(walls, d_s);
    std::vector<int> cluster_of(2 * walls.size());
    for (std::size_t c = 0; c < clusters.size(); ++c)
      for (int e : clusters[c].endpoints) cluster_of[static_cast<std::size_t>(e)] = static_cast<int>(c);
    std::vector<WallLine> kept;
    for (std::size_t w = 0; w < walls.size(); ++w) {
      if (cluster_of[2 * w] == cluster_of[2 * w + 1]) {
        diags.push_back("dropped wall collapsing into one snap cluster");
        continue;
      }
      kept.push_back(walls[w]);
    }
    if (kept.size() == walls.size()) break;
    walls = std::move(kept);
  }

  SnapGraph g;
  g.diagnostics = std::move(diags);
  std::vector<int> node_of_endpoint(2 * walls.size(), -1);
  for (const EndpointCluster& cl : clusters) {
    const ClusterClass cc = classify_cluster(walls, cl);
    const int node = g.add_node(cc.position);
    for (int e : cl.endpoints) node_of_endpoint[static_cast<std::size_t>(e)] = node;
    std::vector<int> wall_ids;
    for (int e : cl.endpoints) wall_ids.push_back(e / 2);
    if (cc.half_pair) {
      SnapPoint s0, s1;
      s0.node = s1.node = node;
      s0.position = s1.position = cc.position;
      s0.kind = s1.kind = SnapKind::Half;
      s0.incident_walls = s1.incident_walls = wall_ids;
      s0.interior_angle_deg = s1.interior_angle_deg = cc.interior_angle_deg;
      s0.id = static_cast<int>(g.snaps.size());
      s1.id = s0.id + 1;
      s0.sister = s1.id;
      s1.sister = s0.id;
      if (cl.endpoints.size() == 1) {
        const int e = cl.endpoints[0];
        const WallLine& w = walls[static_cast<std::size_t>(e / 2)];
        const Vec2 near = e % 2 == 0 ? w.p : w.q, far = e % 2 == 0 ? w.q : w.p;
        s0.ray_wall = -1;
        s0.ray_dir = normalized(near - far);
        s1.ray_wall = e / 2;
        s1.ray_dir = w.normal;
      } else {
        s0.ray_wall = wall_ids[0];
        s0.ray_dir = walls[static_cast<std::size_t>(wall_ids[0])].normal;
        s1.ray_wall = wall_ids[1];
        s1.ray_dir = walls[static_cast<std::size_t>(wall_ids[1])].normal;
      }
      g.snaps.push_back(s0);
      g.snaps.push_back(s1);
    } else {
      SnapPoint s;
      s.id = static_cast<int>(g.snaps.size());
      s.node = node;
      s.position = cc.position;
      s.kind = cc.kind;
      s.incident_walls = wall_ids;
      s.interior_angle_deg = cc.interior_angle_deg;
      g.snaps.push_back(s);
    }
  }
  // Incidence list entries above index the filtered wall list; graph wall ids match it.
  for (std::size_t w = 0; w < walls.size(); ++w) {
    const int na = node_of_endpoint[2 * w], nb = node_of_endpoint[2 * w + 1];
    g.add_wall(na, nb, walls[w].normal, false, walls[w].loop);
  }
  return g;
}

namespace {

struct RayHit {
  double t = 0.0;
  int wall = -1;
};

std::optional<RayHit> cast_ray(const SnapGraph& g, int from_node, Vec2 origin, Vec2 dir, double max_t) {
  std::optional<RayHit> best;
  const auto& own = g.nodes[static_cast<std::size_t>(from_node)].walls;
  for (const GraphWall& w : g.walls) {
    if (w.removed) continue;
    if (std::find(own.begin(), own.end(), w.id) != own.end()) continue;
    const auto t = ray_segment_hit(origin, dir, w.a, w.b, 1e-6);
    if (t && *t <= max_t && (!best || *t < best->t)) best = RayHit{*t, w.id};
  }
  return best;
}

// Connects `from` to the hit point, reusing an endpoint node when the hit lands on it.
int connect_to_hit(SnapGraph& g, int from, Vec2 hit, int wall, SnapSource source) {
  const GraphWall& w = g.walls[static_cast<std::size_t>(wall)];
  int target;
  if (distance(hit, w.a) < 0.5) {
    target = w.node_a;
  } else if (distance(hit, w.b) < 0.5) {
    target = w.node_b;
  } else {
    target = g.split_wall(wall, hit);
    SnapPoint s;
    s.id = static_cast<int>(g.snaps.size());
    s.node = target;
    s.position = hit;
    s.kind = SnapKind::Full;
    s.source = source;
    s.interior_angle_deg = 90.0;
    s.incident_walls = g.active_walls_at(target);
    g.snaps.push_back(s);
  }
  if (target == from) return -1;
  const Vec2 d = g.nodes[static_cast<std::size_t>(target)].position - g.nodes[static_cast<std::size_t>(from)].position;
  const int ext = g.add_wall(from, target, left_normal(normalized(d)), true, -1);
  for (SnapPoint& s : g.snaps)
    if (s.node == target && !s.removed && std::find(s.incident_walls.begin(), s.incident_walls.end(), ext) == s.incident_walls.end())
      s.incident_walls.push_back(ext);
  return ext;
}

}  // namespace

void extend_half_snaps(SnapGraph& g, const ExtensionOptions& opts) {
  std::vector<char> done(g.snaps.size(), 0);
  for (std::size_t i = 0; i < g.snaps.size(); ++i)
    if (g.snaps[i].extended) done[i] = 1;
  for (std::size_t i = 0; i < g.snaps.size(); ++i) {
    SnapPoint& s = g.snaps[i];
    if (s.removed || s.kind != SnapKind::Half || done[i]) continue;
    done[i] = 1;
    s.extended = true;
    const Vec2 origin = g.nodes[static_cast<std::size_t>(s.node)].position;
    const Vec2 dir = s.ray_dir;
    const auto hit = cast_ray(g, s.node, origin, dir, opts.max_ray);
    const double t_hit = hit ? hit->t : opts.max_ray;
    // Collinear counterpart: a Half casting back along the same line.
    int partner = -1;
    double t_partner = 1e300;
    for (std::size_t j = 0; j < g.snaps.size(); ++j) {
      const SnapPoint& o = g.snaps[j];
      if (j == i || o.removed || o.kind != SnapKind::Half || done[j] || o.node == s.node) continue;
      if (dot(o.ray_dir, dir) > -0.99) continue;
      const Vec2 rel = g.nodes[static_cast<std::size_t>(o.node)].position - origin;
      const double along = dot(rel, dir);
      const double lateral = std::abs(cross(dir, rel));
      if (along <= 0.0 || along > t_hit + opts.d_s || lateral > opts.d_s) continue;
      if (along < t_partner) {
        t_partner = along;
        partner = static_cast<int>(j);
      }
    }
    if (partner >= 0) {
      done[static_cast<std::size_t>(partner)] = 1;
      g.snaps[static_cast<std::size_t>(partner)].extended = true;
      const int pn = g.snaps[static_cast<std::size_t>(partner)].node;
      const Vec2 ppos = g.nodes[static_cast<std::size_t>(pn)].position;
      if (distance(ppos, origin) <= opts.d_s) {
        // Fuse the partner's node into ours.
        for (int w : g.nodes[static_cast<std::size_t>(pn)].walls) {
          GraphWall& gw = g.walls[static_cast<std::size_t>(w)];
          if (gw.node_a == pn) { gw.node_a = s.node; gw.a = origin; }
          if (gw.node_b == pn) { gw.node_b = s.node; gw.b = origin; }
          g.nodes[static_cast<std::size_t>(s.node)].walls.push_back(w);
        }
        g.nodes[static_cast<std::size_t>(pn)].walls.clear();
        g.nodes[static_cast<std::size_t>(pn)].removed = true;
        for (SnapPoint& o : g.snaps)
          if (o.node == pn) { o.node = s.node; o.position = origin; }
      } else {
        const int ext = g.add_wall(s.node, pn, left_normal(normalized(ppos - origin)), true, -1);
        s.incident_walls.push_back(ext);
        s.extension_wall = ext;
        g.snaps[static_cast<std::size_t>(partner)].extension_wall = ext;
        g.snaps[static_cast<std::size_t>(partner)].incident_walls.push_back(ext);
      }
      continue;
    }
    if (!hit) {
      s.unresolved = true;
      std::ostringstream msg;
      msg << "half snap " << s.id << " at (" << origin.x << ", " << origin.y << ") cast a ray that hit no wall";
      g.diagnostics.push_back(msg.str());
      continue;
    }
    const Vec2 hp = origin + dir * hit->t;
    const int ext = connect_to_hit(g, s.node, hp, hit->wall, SnapSource::Extension);
    g.snaps[i].extension_wall = ext;
    SnapPoint& sr = g.snaps[i];
    sr.incident_walls = g.active_walls_at(sr.node);
    done.resize(g.snaps.size(), 0);
  }
}

double face_score(const std::vector<Vec2>& cycle, const std::vector<Vec2>& normals, Vec2 center) {
  double score = 0.0;
  const std::size_t n = cycle.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = cycle[i], b = cycle[(i + 1) % n];
    const Vec2 m = (a + b) * 0.5;
    const double l = distance(a, b);
    const double d = dot(normals[i], center - m);
    score += d > 0.0 ? l : -l;
  }
  return score;
}

std::vector<Face> trace_faces(const SnapGraph& g) {
  // Outgoing half-edges per node sorted by angle; half-edge h = 2*wall + (0: a->b, 1: b->a).
  const std::size_t nn = g.nodes.size();
  std::vector<std::vector<int>> out(nn);
  const auto origin_of = [&](int h) {
    const GraphWall& w = g.walls[static_cast<std::size_t>(h / 2)];
    return h % 2 == 0 ? w.node_a : w.node_b;
  };
  const auto target_of = [&](int h) {
    const GraphWall& w = g.walls[static_cast<std::size_t>(h / 2)];
    return h % 2 == 0 ? w.node_b : w.node_a;
  };
  const auto dir_of = [&](int h) {
    return g.nodes[static_cast<std::size_t>(target_of(h))].position - g.nodes[static_cast<std::size_t>(origin_of(h))].position;
  };
  for (const GraphWall& w : g.walls) {
    if (w.removed || w.node_a == w.node_b) continue;
    out[static_cast<std::size_t>(w.node_a)].push_back(2 * w.id);
    out[static_cast<std::size_t>(w.node_b)].push_back(2 * w.id + 1);
  }
  for (std::size_t v = 0; v < nn; ++v) {
    if (out[v].size() >= 5) {
      std::ostringstream msg;
      msg << "non-manifold snap vertex " << v << " at (" << g.nodes[v].position.x << ", " << g.nodes[v].position.y
          << ") has " << out[v].size() << " incident walls";
      throw SnapGraphError(msg.str());
    }
    std::sort(out[v].begin(), out[v].end(), [&](int a, int b) {
      const double aa = angle_of(dir_of(a)), ab = angle_of(dir_of(b));
      return aa < ab || (aa == ab && a < b);
    });
  }
  std::vector<char> used(2 * g.walls.size(), 0);
  std::vector<Face> faces;
  for (const GraphWall& w : g.walls) {
    if (w.removed || w.node_a == w.node_b) continue;
    for (int start : {2 * w.id, 2 * w.id + 1}) {
      if (used[static_cast<std::size_t>(start)]) continue;
      Face f;
      int h = start;
      std::size_t guard = 0;
      while (!used[static_cast<std::size_t>(h)] && guard++ < 4 * g.walls.size() + 8) {
        used[static_cast<std::size_t>(h)] = 1;
        f.nodes.push_back(origin_of(h));
        f.walls.push_back(h / 2);
        f.forward.push_back(h % 2 == 0 ? 1 : 0);
        const int v = target_of(h);
        const auto& lst = out[static_cast<std::size_t>(v)];
        const int twin = h ^ 1;
        const auto it = std::find(lst.begin(), lst.end(), twin);
        const std::size_t k = lst.size();
        const std::size_t idx = static_cast<std::size_t>(it - lst.begin());
        h = lst[(idx + k - 1) % k];
      }
      std::vector<Vec2> cycle, normals;
      for (std::size_t i = 0; i < f.nodes.size(); ++i) {
        cycle.push_back(g.nodes[static_cast<std::size_t>(f.nodes[i])].position);
        const GraphWall& gw = g.walls[static_cast<std::size_t>(f.walls[i])];
        if (gw.extension) {
          const Vec2 d = f.forward[i] ? gw.b - gw.a : gw.a - gw.b;
          normals.push_back(left_normal(normalized(d)));
        } else {
          normals.push_back(gw.normal);
        }
      }
      f.signed_area = polygon_area(cycle);
      if (std::abs(f.signed_area) > 1e-9) {
        f.center = polygon_centroid(cycle);
      } else {
        for (Vec2 p : cycle) f.center += p;
        f.center = f.center / static_cast<double>(cycle.size());
      }
      f.score = face_score(cycle, normals, f.center);
      f.obstacle = f.score < 0.0;
      faces.push_back(std::move(f));
    }
  }
  std::stable_sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) { return a.score > b.score; });
  return faces;
}

void remove_obstacles(SnapGraph& g, const std::vector<Face>& faces) {
  // Walls adjacent to a bounded face that scores as an obstacle.
  std::vector<char> on_obstacle(g.walls.size(), 0);
  for (const Face& f : faces) {
    if (!f.obstacle || f.signed_area <= 0.0) continue;
    for (int w : f.walls) on_obstacle[static_cast<std::size_t>(w)] = 1;
  }
  // Components over original (non-extension) walls.
  UnionFind uf(g.nodes.size());
  for (const GraphWall& w : g.walls)
    if (!w.removed && !w.extension) uf.unite(w.node_a, w.node_b);
  std::map<int, std::vector<int>> comp_walls;
  for (const GraphWall& w : g.walls)
    if (!w.removed && !w.extension) comp_walls[uf.find(w.node_a)].push_back(w.id);
  std::vector<char> dead_node(g.nodes.size(), 0);
  for (auto& [root, ws] : comp_walls) {
    const bool all_obstacle = std::all_of(ws.begin(), ws.end(), [&](int w) { return on_obstacle[static_cast<std::size_t>(w)] != 0; });
    if (!all_obstacle) continue;
    Box bb{1e300, 1e300, -1e300, -1e300};
    std::vector<int> loops;
    for (int wi : ws) {
      GraphWall& w = g.walls[static_cast<std::size_t>(wi)];
      w.removed = true;
      dead_node[static_cast<std::size_t>(w.node_a)] = 1;
      dead_node[static_cast<std::size_t>(w.node_b)] = 1;
      for (Vec2 p : {w.a, w.b}) {
        bb.xmin = std::min(bb.xmin, p.x); bb.ymin = std::min(bb.ymin, p.y);
        bb.xmax = std::max(bb.xmax, p.x); bb.ymax = std::max(bb.ymax, p.y);
      }
      if (w.loop >= 0 && std::find(loops.begin(), loops.end(), w.loop) == loops.end()) loops.push_back(w.loop);
    }
    g.obstacle_boxes.push_back(bb);
    for (int l : loops) g.obstacle_loops.push_back(l);
  }
  // Extensions touching removed components go too; their Half sources get re-cast later.
  for (GraphWall& w : g.walls) {
    if (w.removed || !w.extension) continue;
    const bool touches = dead_node[static_cast<std::size_t>(w.node_a)] || dead_node[static_cast<std::size_t>(w.node_b)];
    if (!touches) continue;
    bool a_alive = false, b_alive = false;
    for (int x : g.nodes[static_cast<std::size_t>(w.node_a)].walls)
      if (!g.walls[static_cast<std::size_t>(x)].removed && !g.walls[static_cast<std::size_t>(x)].extension) a_alive = true;
    for (int x : g.nodes[static_cast<std::size_t>(w.node_b)].walls)
      if (!g.walls[static_cast<std::size_t>(x)].removed && !g.walls[static_cast<std::size_t>(x)].extension) b_alive = true;
    if (!a_alive || !b_alive) {
      w.removed = true;
      for (SnapPoint& s : g.snaps)
        if (s.kind == SnapKind::Half && s.extension_wall == w.id) {
          s.extended = false;
          s.extension_wall = -1;
        }
    }
  }
  for (std::size_t n = 0; n < g.nodes.size(); ++n)
    if (!g.nodes[n].removed && g.active_walls_at(static_cast<int>(n)).empty() && !g.nodes[n].walls.empty())
      g.nodes[n].removed = true;
  for (SnapPoint& s : g.snaps) {
    if (s.removed) continue;
    if (g.nodes[static_cast<std::size_t>(s.node)].removed) {
      s.removed = true;
      continue;
    }
    s.incident_walls = g.active_walls_at(s.node);
  }
  std::sort(g.obstacle_loops.begin(), g.obstacle_loops.end());
}

int resolve_obtuse(SnapGraph& g, const ObtuseOptions& opts) {
  int extensions = 0;
  const std::size_t n_snaps = g.snaps.size();
  for (std::size_t i = 0; i < n_snaps; ++i) {
    if (g.snaps[i].removed || g.snaps[i].kind != SnapKind::Full || g.snaps[i].source != SnapSource::Clustered) continue;
    const double ang = g.snaps[i].interior_angle_deg;
    if (!(ang > 90.0 + opts.angle_eps_deg && ang < 180.0 - opts.angle_eps_deg)) continue;
    const int node = g.snaps[i].node;
    std::vector<Vec2> normals;
    for (int w : g.active_walls_at(node)) {
      const GraphWall& gw = g.walls[static_cast<std::size_t>(w)];
      if (!gw.extension) normals.push_back(gw.normal);
    }
    if (normals.size() != 2) continue;
    g.snaps[i].kind = SnapKind::Double;
    for (Vec2 n : normals) {
      const Vec2 origin = g.nodes[static_cast<std::size_t>(node)].position;
      const auto hit = cast_ray(g, node, origin, n, 1e7);
      if (!hit) {
        std::ostringstream msg;
        msg << "obtuse snap " << g.snaps[i].id << " ray missed all walls";
        g.diagnostics.push_back(msg.str());
        continue;
      }
      connect_to_hit(g, node, origin + n * hit->t, hit->wall, SnapSource::ObtuseSplit);
      ++extensions;
    }
    g.snaps[i].incident_walls = g.active_walls_at(node);
  }
  return extensions;
}

}  // namespace corridor
