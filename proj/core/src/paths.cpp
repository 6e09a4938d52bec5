#include "pds/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace pds {

namespace {

int slot_of(const Mesh& m, TriId t, VertexId v) {
  const auto& tv = m.triangle(t);
  if (tv[0] == v) return 0;
  if (tv[1] == v) return 1;
  if (tv[2] == v) return 2;
  throw PathError("vertex not in triangle");
}

bool has_vertex(const Mesh& m, TriId t, VertexId v) {
  const auto& tv = m.triangle(t);
  return tv[0] == v || tv[1] == v || tv[2] == v;
}

// All triangles incident to v. Handles v on the hull by sweeping both ways.
std::vector<TriId> star(const Mesh& m, VertexId v) {
  std::vector<TriId> out;
  TriId t0 = m.incident_triangle(v);
  TriId t = t0;
  for (;;) {
    out.push_back(t);
    int i = slot_of(m, t, v);
    TriId nxt = m.neighbors(t)[(i + 1) % 3];
    if (nxt == t0) return out;
    if (nxt == kNoTriangle) break;
    t = nxt;
  }
  t = t0;
  for (;;) {
    int i = slot_of(m, t, v);
    TriId prv = m.neighbors(t)[(i + 2) % 3];
    if (prv == kNoTriangle) return out;
    t = prv;
    out.push_back(t);
  }
}

double edge_len(const Mesh& m, VertexId a, VertexId b) {
  const Point& pa = m.vertex(a);
  const Point& pb = m.vertex(b);
  return std::hypot(pb.x - pa.x, pb.y - pa.y);
}

void push_edge(const Mesh& m, PathResult& r, VertexId a, VertexId b) {
  r.vertices.push_back(b);
  r.edges.emplace_back(a, b);
  r.length += edge_len(m, a, b);
}

}  // namespace

WalkResult straight_walk(const Instance& inst) {
  const Mesh& m = inst.mesh;
  const Point& ps = inst.s();
  const Point& pt = inst.t();
  auto sigma = [&](VertexId v) { return orient2d(ps, pt, m.vertex(v)); };

  std::vector<TriId> sstar = star(m, inst.s_id);

  // Edge (s,t) in the mesh: the segment crosses nothing, the corridor is the
  // flanking pair (upper triangle first).
  std::vector<TriId> with_t;
  for (TriId t : sstar) {
    if (has_vertex(m, t, inst.t_id)) with_t.push_back(t);
  }
  if (!with_t.empty()) {
    if (with_t.size() != 2) {
      throw PathError("straight walk exited the hull");
    }
    VertexId apex0 = kNoVertex;
    for (VertexId v : m.triangle(with_t[0])) {
      if (v != inst.s_id && v != inst.t_id) apex0 = v;
    }
    if (sigma(apex0) < 0) std::swap(with_t[0], with_t[1]);
    return {{with_t[0], with_t[1]}, 1};
  }

  TriId start = kNoTriangle;
  for (TriId t : sstar) {
    int i = slot_of(m, t, inst.s_id);
    VertexId u = m.triangle(t)[(i + 1) % 3];
    VertexId w = m.triangle(t)[(i + 2) % 3];
    if (orient2d(ps, m.vertex(u), pt) > 0 &&
        orient2d(ps, m.vertex(w), pt) < 0) {
      start = t;
      break;
    }
  }
  if (start == kNoTriangle) {
    throw PathError("segment leaves s through a vertex or outside the hull");
  }

  WalkResult wr;
  wr.triangles.push_back(start);
  TriId cur = start, came = kNoTriangle;
  while (!has_vertex(m, cur, inst.t_id)) {
    if (wr.triangles.size() > m.triangle_count()) {
      throw PathError("straight walk did not terminate");
    }
    const auto& v = m.triangle(cur);
    TriId nxt = kNoTriangle;
    bool found = false;
    for (int e = 0; e < 3 && !found; ++e) {
      TriId nb = m.neighbors(cur)[e];
      if (nb == came && nb != kNoTriangle) continue;
      if (sigma(v[(e + 1) % 3]) * sigma(v[(e + 2) % 3]) < 0) {
        nxt = nb;
        found = true;
      }
    }
    if (!found) throw PathError("segment passes through a mesh vertex");
    if (nxt == kNoTriangle) throw PathError("straight walk exited the hull");
    came = cur;
    cur = nxt;
    wr.triangles.push_back(cur);
  }
  wr.crossed_edges = wr.triangles.size() - 1;
  return wr;
}

PathResult upper_path(const Instance& inst) {
  WalkResult wr = straight_walk(inst);
  const Mesh& m = inst.mesh;
  const Point& ps = inst.s();
  const Point& pt = inst.t();
  auto sigma = [&](VertexId v) { return orient2d(ps, pt, m.vertex(v)); };

  PathResult res;
  res.vertices.push_back(inst.s_id);

  if (has_vertex(m, wr.triangles[0], inst.t_id)) {
    // Degenerate corridor: route over the apex of the upper triangle.
    VertexId apex = kNoVertex;
    for (VertexId v : m.triangle(wr.triangles[0])) {
      if (v != inst.s_id && v != inst.t_id) apex = v;
    }
    push_edge(m, res, inst.s_id, apex);
    push_edge(m, res, apex, inst.t_id);
    res.size = res.edges.size();
    return res;
  }

  // State: the crossed edge between consecutive corridor triangles is always
  // (cur_up, cur_dn); each triangle's third vertex extends one chain.
  VertexId cur_up = kNoVertex, cur_dn = kNoVertex;
  for (VertexId v : m.triangle(wr.triangles[0])) {
    if (v == inst.s_id) continue;
    (sigma(v) > 0 ? cur_up : cur_dn) = v;
  }
  push_edge(m, res, inst.s_id, cur_up);
  for (std::size_t i = 1; i < wr.triangles.size(); ++i) {
    VertexId apex = kNoVertex;
    for (VertexId v : m.triangle(wr.triangles[i])) {
      if (v != cur_up && v != cur_dn) apex = v;
    }
    if (apex == inst.t_id) {
      push_edge(m, res, cur_up, apex);
    } else if (sigma(apex) > 0) {
      push_edge(m, res, cur_up, apex);
      cur_up = apex;
    } else {
      cur_dn = apex;
    }
  }
  res.size = res.edges.size();
  return res;
}

PathResult greedy_path(const Instance& inst) {
  WalkResult wr = straight_walk(inst);
  const Mesh& m = inst.mesh;

  std::unordered_map<VertexId, std::size_t> lastidx;
  for (std::size_t i = 0; i < wr.triangles.size(); ++i) {
    for (VertexId v : m.triangle(wr.triangles[i])) lastidx[v] = i;
  }

  PathResult res;
  res.vertices.push_back(inst.s_id);
  std::unordered_set<VertexId> visited{inst.s_id};
  VertexId w = inst.s_id;
  while (w != inst.t_id) {
    auto it = lastidx.find(w);
    if (it == lastidx.end()) throw PathError("greedy path left the corridor");
    const auto& tv = m.triangle(wr.triangles[it->second]);
    const Point& pw = m.vertex(w);
    VertexId best = kNoVertex;
    double best_angle = 0;
    for (VertexId x : tv) {
      if (x == w) continue;
      const Point& px = m.vertex(x);
      double angle = std::abs(std::atan2(px.y - pw.y, px.x - pw.x));
      if (best == kNoVertex || angle < best_angle ||
          (angle == best_angle && x < best)) {
        best = x;
        best_angle = angle;
      }
    }
    if (!visited.insert(best).second) {
      throw PathError("greedy path revisited a vertex");
    }
    push_edge(m, res, w, best);
    w = best;
  }
  res.size = res.edges.size();
  return res;
}

PathResult shortest_path(const Instance& inst, bool prune_ellipse) {
  const Mesh& m = inst.mesh;
  const std::size_t n = m.vertex_count();

  // Unique undirected edges: a triangle owns the edges whose twin triangle
  // has a larger id (or none).
  std::vector<std::uint32_t> deg(n, 0);
  auto for_each_edge = [&](auto&& fn) {
    for (TriId t = 0; t < m.triangle_count(); ++t) {
      const auto& tv = m.triangle(t);
      for (int e = 0; e < 3; ++e) {
        TriId nb = m.neighbors(t)[e];
        if (nb != kNoTriangle && nb < t) continue;
        fn(tv[(e + 1) % 3], tv[(e + 2) % 3]);
      }
    }
  };
  for_each_edge([&](VertexId a, VertexId b) {
    ++deg[a];
    ++deg[b];
  });
  std::vector<std::size_t> off(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) off[v + 1] = off[v] + deg[v];
  std::vector<VertexId> adj(off[n]);
  std::vector<std::size_t> fill(off.begin(), off.end() - 1);
  for_each_edge([&](VertexId a, VertexId b) {
    adj[fill[a]++] = b;
    adj[fill[b]++] = a;
  });

  std::vector<char> allowed(n, 1);
  if (prune_ellipse) {
    const Point& ps = inst.s();
    const Point& pt = inst.t();
    for (std::size_t v = 0; v < n; ++v) {
      const Point& p = m.vertex(VertexId(v));
      allowed[v] = std::hypot(p.x - ps.x, p.y - ps.y) +
                           std::hypot(p.x - pt.x, p.y - pt.y) <=
                       1.998 * inst.k
                   ? 1
                   : 0;
    }
    allowed[inst.s_id] = allowed[inst.t_id] = 1;
  }

  // Dijkstra from t, then a forward pass from s choosing, among neighbors
  // that keep the distance tight, the smallest vertex id. That produces the
  // lexicographically smallest optimal vertex sequence.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  using QItem = std::pair<double, VertexId>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
  dist[inst.t_id] = 0;
  pq.emplace(0.0, inst.t_id);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (std::size_t j = off[u]; j < off[u + 1]; ++j) {
      VertexId v = adj[j];
      if (!allowed[v]) continue;
      double nd = d + edge_len(m, u, v);
      if (nd < dist[v]) {
        dist[v] = nd;
        pq.emplace(nd, v);
      }
    }
  }
  if (dist[inst.s_id] == kInf) throw PathError("s and t are disconnected");

  PathResult res;
  res.vertices.push_back(inst.s_id);
  VertexId w = inst.s_id;
  std::size_t guard = 0;
  while (w != inst.t_id) {
    if (++guard > n) throw PathError("shortest path reconstruction cycled");
    VertexId best = kNoVertex;
    for (std::size_t j = off[w]; j < off[w + 1]; ++j) {
      VertexId v = adj[j];
      if (edge_len(m, w, v) + dist[v] == dist[w] && v < best) best = v;
    }
    if (best == kNoVertex) {
      throw PathError("shortest path reconstruction stalled");
    }
    push_edge(m, res, w, best);
    w = best;
  }
  res.size = res.edges.size();
  return res;
}

}  // namespace pds
