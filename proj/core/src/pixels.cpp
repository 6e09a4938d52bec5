#include "pds/pixels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "pds/delaunay.hpp"
#include "pds/geom.hpp"

namespace pds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool point_in_box(const Point& p, double cx, double cy, double h) {
  return cx - h <= p.x && p.x <= cx + h && cy - h <= p.y && p.y <= cy + h;
}

// Closed segment vs closed axis-aligned square. Exact whenever the square
// bounds are representable (integer center, half-integer half-width).
bool segment_meets_box(const Point& a, const Point& b, double cx, double cy,
                       double h) {
  if (point_in_box(a, cx, cy, h) || point_in_box(b, cx, cy, h)) return true;
  if (a == b) return false;
  const Point c00{cx - h, cy - h}, c10{cx + h, cy - h};
  const Point c11{cx + h, cy + h}, c01{cx - h, cy + h};
  const Segment e{a, b};
  return segment_crosses_segment(e, {c00, c10}) ||
         segment_crosses_segment(e, {c10, c11}) ||
         segment_crosses_segment(e, {c11, c01}) ||
         segment_crosses_segment(e, {c01, c00});
}

// Separating-axis test for a counterclockwise triangle against a square.
// Box axes are handled by the bounding-box reject, triangle edge normals by
// the three half-plane scans.
bool tri_meets_box(const Point& a, const Point& b, const Point& c, double cx,
                   double cy, double h) {
  const double xlo = cx - h, xhi = cx + h, ylo = cy - h, yhi = cy + h;
  if (std::max({a.x, b.x, c.x}) < xlo || std::min({a.x, b.x, c.x}) > xhi ||
      std::max({a.y, b.y, c.y}) < ylo || std::min({a.y, b.y, c.y}) > yhi)
    return false;
  const Point corner[4] = {{xlo, ylo}, {xhi, ylo}, {xhi, yhi}, {xlo, yhi}};
  const Point* tv[3] = {&a, &b, &c};
  for (int i = 0; i < 3; ++i) {
    const Point& p = *tv[i];
    const Point& q = *tv[(i + 1) % 3];
    bool separated = true;
    for (const Point& cr : corner) {
      if (orient2d(p, q, cr) >= 0) {
        separated = false;
        break;
      }
    }
    if (separated) return false;
  }
  return true;
}

// All live triangles meeting the square, found by flooding from the triangle
// containing its center. The set of triangles meeting a convex region is
// connected through shared edges, so the flood is exhaustive.
std::vector<TriId> triangles_meeting_box(const Mesh& m, double cx, double cy,
                                         double h) {
  LocateResult lr = locate(m, Point{cx, cy});
  if (!lr.inside_hull)
    throw WindowError("pixel neighborhood leaves the triangulated region");
  std::vector<TriId> out;
  std::vector<char> seen(m.triangle_count(), 0);
  std::vector<TriId> stack{lr.tri};
  seen[lr.tri] = 1;
  while (!stack.empty()) {
    TriId t = stack.back();
    stack.pop_back();
    const auto& tv = m.triangle(t);
    if (!tri_meets_box(m.vertex(tv[0]), m.vertex(tv[1]), m.vertex(tv[2]), cx,
                       cy, h))
      continue;
    out.push_back(t);
    for (TriId nb : m.neighbors(t)) {
      if (nb != kNoTriangle && !seen[nb]) {
        seen[nb] = 1;
        stack.push_back(nb);
      }
    }
  }
  return out;
}

Point cross_at(const Point& a, const Point& b, double x) {
  const double t = (x - a.x) / (b.x - a.x);
  return {x, a.y + t * (b.y - a.y)};
}

double dist(const Point& a, const Point& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

void require_c2_in_window(const Window& w, double vx, double vy,
                          const char* who) {
  if (vx - 1 < w.xmin || vx + 1 > w.xmax || vy - 1 < w.ymin || vy + 1 > w.ymax)
    throw WindowError(std::string(who) +
                      ": C_2(v) leaves the window; enlarge it");
}

std::uint64_t edge_key(VertexId u, VertexId w) {
  if (u > w) std::swap(u, w);
  return (std::uint64_t(u) << 32) | w;
}

}  // namespace

std::vector<Pixel> extract_animal(const std::vector<Point>& polyline,
                                  const GridSpec& grid) {
  if (polyline.empty())
    throw std::invalid_argument("extract_animal: empty polyline");
  if (grid.lambda < 1)
    throw std::invalid_argument("extract_animal: lambda must be >= 1");
  for (const Point& p : polyline)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("extract_animal: non-finite vertex");

  const double lam = double(grid.lambda);
  const double h = lam / 2.0;
  const auto off = color_offset(grid.color);
  std::vector<Pixel> out;

  auto scan = [&](const Point& a, const Point& b) {
    // Candidate range is padded by one grid step; the exact test filters.
    const double xlo = std::min(a.x, b.x) - h, xhi = std::max(a.x, b.x) + h;
    const double ylo = std::min(a.y, b.y) - h, yhi = std::max(a.y, b.y) + h;
    const auto i0 = std::int64_t(std::floor((xlo - off[0]) / lam)) - 1;
    const auto i1 = std::int64_t(std::ceil((xhi - off[0]) / lam)) + 1;
    const auto j0 = std::int64_t(std::floor((ylo - off[1]) / lam)) - 1;
    const auto j1 = std::int64_t(std::ceil((yhi - off[1]) / lam)) + 1;
    for (std::int64_t i = i0; i <= i1; ++i) {
      for (std::int64_t j = j0; j <= j1; ++j) {
        const std::int64_t px = grid.lambda * i + off[0];
        const std::int64_t py = grid.lambda * j + off[1];
        if (segment_meets_box(a, b, double(px), double(py), h))
          out.push_back(Pixel{px, py});
      }
    }
  };

  if (polyline.size() == 1) scan(polyline[0], polyline[0]);
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i)
    scan(polyline[i], polyline[i + 1]);

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Point> path_polyline(const Instance& inst, const PathResult& path) {
  if (path.vertices.empty())
    throw std::invalid_argument("path_polyline: empty path");
  std::vector<Point> poly;
  poly.reserve(path.vertices.size());
  for (VertexId id : path.vertices) {
    if (id >= inst.mesh.vertex_count())
      throw std::invalid_argument("path_polyline: vertex id out of range");
    poly.push_back(inst.mesh.vertex(id));
  }
  return poly;
}

std::vector<Pixel> extract_animal(const Instance& inst, const PathResult& path,
                                  const GridSpec& grid) {
  return extract_animal(path_polyline(inst, path), grid);
}

AnimalBound check_animal_bound(const std::vector<Point>& polyline) {
  const auto animal = extract_animal(polyline, GridSpec{});
  double len = 0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i)
    len += dist(polyline[i], polyline[i + 1]);
  AnimalBound r;
  r.size = animal.size();
  r.bound = 3.0 * std::sqrt(2.0) / 2.0 * len + 1.0;
  // The slack keeps constructions that meet the bound with equality in exact
  // arithmetic from flipping on the last ulp.
  r.ok = double(r.size) <= r.bound + 1e-9;
  return r;
}

bool independence_event(const Instance& inst, Pixel v, double eps) {
  if (!(eps > 0) || !std::isfinite(eps))
    throw std::invalid_argument("independence_event: eps must be positive");
  const double vx = double(v.x), vy = double(v.y);
  require_c2_in_window(inst.window, vx, vy, "independence_event");

  const Point& s = inst.s();
  const Point& t = inst.t();
  if (std::hypot(vx - s.x, vy - s.y) < 2.0) return false;
  if (std::hypot(vx - t.x, vy - t.y) < 2.0) return false;

  const Mesh& m = inst.mesh;
  for (TriId tr : triangles_meeting_box(m, vx, vy, 0.5 + eps)) {
    const auto& tv = m.triangle(tr);
    const Circle cc =
        circumcircle(m.vertex(tv[0]), m.vertex(tv[1]), m.vertex(tv[2]));
    if (!(cc.center.x - cc.radius >= vx - 1 &&
          cc.center.x + cc.radius <= vx + 1 &&
          cc.center.y - cc.radius >= vy - 1 &&
          cc.center.y + cc.radius <= vy + 1))
      return false;
  }
  return true;
}

HorizontalityWitness strong_horizontality_witness(const Instance& inst,
                                                  Pixel v, double rho) {
  if (rho < 0 || !std::isfinite(rho))
    throw std::invalid_argument("strong_horizontality: rho must be >= 0");
  const double vx = double(v.x), vy = double(v.y);
  require_c2_in_window(inst.window, vx, vy, "strong_horizontality");

  const Mesh& m = inst.mesh;
  const double lo = vx - 0.5, hi = vx + 0.5;
  auto seg_in_cv = [&](const Point& a, const Point& b) {
    return segment_meets_box(a, b, vx, vy, 0.5);
  };

  // Local edge graph. Vertices are indexed only when they lie in the closed
  // column [lo, hi]; edges reaching across a column line are recorded as
  // entries, exits, or direct crossings with their clipped pieces.
  std::unordered_map<VertexId, int> idx;
  std::vector<Point> vpts;
  auto column_index = [&](VertexId u) {
    auto [it, inserted] = idx.try_emplace(u, int(vpts.size()));
    if (inserted) vpts.push_back(m.vertex(u));
    return it->second;
  };

  struct Arc {
    int a, b;
    double len;
    bool touch;
  };
  std::vector<Arc> arcs;
  struct Portal {
    int node;
    double len;
    bool touch;
    Point cross;
  };
  std::vector<Portal> entries, exits;
  double best_direct = kInf;
  Point direct_lo{}, direct_hi{};

  std::unordered_set<std::uint64_t> dedup;
  for (TriId t : triangles_meeting_box(m, vx, vy, 1.0)) {
    const auto& tv = m.triangle(t);
    for (int i = 0; i < 3; ++i) {
      VertexId u = tv[i], w = tv[(i + 1) % 3];
      if (!dedup.insert(edge_key(u, w)).second) continue;
      Point a = m.vertex(u), b = m.vertex(w);
      if (b.x < a.x) {
        std::swap(a, b);
        std::swap(u, w);
      }
      if (b.x < lo || a.x > hi) continue;
      if (a.x < lo && b.x > hi) {
        const Point pl = cross_at(a, b, lo), ph = cross_at(a, b, hi);
        const double len = dist(pl, ph);
        if (seg_in_cv(pl, ph) && len < best_direct) {
          best_direct = len;
          direct_lo = pl;
          direct_hi = ph;
        }
      } else if (a.x < lo) {
        const Point pl = cross_at(a, b, lo);
        entries.push_back({column_index(w), dist(pl, b), seg_in_cv(pl, b), pl});
      } else if (b.x > hi) {
        const Point ph = cross_at(a, b, hi);
        exits.push_back({column_index(u), dist(a, ph), seg_in_cv(a, ph), ph});
      } else {
        const int iu = column_index(u), iw = column_index(w);
        arcs.push_back({iu, iw, dist(a, b), seg_in_cv(a, b)});
      }
    }
  }
  // A vertex exactly on a column line is a zero-length portal.
  for (std::size_t i = 0; i < vpts.size(); ++i) {
    const Point& p = vpts[i];
    const bool in = point_in_box(p, vx, vy, 0.5);
    if (p.x == lo) entries.push_back({int(i), 0.0, in, p});
    if (p.x == hi) exits.push_back({int(i), 0.0, in, p});
  }

  const int n = int(vpts.size());
  std::vector<std::vector<Arc>> adj(n);
  for (const Arc& e : arcs) {
    adj[e.a].push_back({e.a, e.b, e.len, e.touch});
    adj[e.b].push_back({e.b, e.a, e.len, e.touch});
  }

  // Two-state Dijkstra: node 2*i+f, f = path so far touches C(v).
  std::vector<double> d(std::size_t(2) * n, kInf);
  std::vector<int> prev(std::size_t(2) * n, -2);
  std::vector<Point> entry_pt(std::size_t(2) * n);
  using QItem = std::pair<double, int>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
  for (const Portal& e : entries) {
    const int node = 2 * e.node + (e.touch ? 1 : 0);
    if (e.len < d[node]) {
      d[node] = e.len;
      prev[node] = -1;
      entry_pt[node] = e.cross;
      pq.push({e.len, node});
    }
  }
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    const int f = u & 1;
    for (const Arc& e : adj[u >> 1]) {
      const int node = 2 * e.b + (f | (e.touch ? 1 : 0));
      const double nd = du + e.len;
      if (nd < d[node]) {
        d[node] = nd;
        prev[node] = u;
        pq.push({nd, node});
      }
    }
  }

  double best = best_direct;
  int best_node = -1;
  Point best_cross{};
  for (const Portal& e : exits) {
    for (int f = 0; f < 2; ++f) {
      if (!f && !e.touch) continue;
      const int node = 2 * e.node + f;
      const double tot = d[node] + e.len;
      if (tot < best) {
        best = tot;
        best_node = node;
        best_cross = e.cross;
      }
    }
  }

  HorizontalityWitness wit;
  if (!(best < 1.0 + rho)) return wit;
  wit.holds = true;
  wit.length = best;
  if (best_node < 0) {
    wit.polyline = {direct_lo, direct_hi};
    return wit;
  }
  std::vector<Point> chain{best_cross};
  int node = best_node;
  while (prev[node] != -1) {
    chain.push_back(vpts[node >> 1]);
    node = prev[node];
  }
  chain.push_back(vpts[node >> 1]);
  chain.push_back(entry_pt[node]);
  std::reverse(chain.begin(), chain.end());
  wit.polyline = std::move(chain);
  return wit;
}

bool strong_horizontality(const Instance& inst, Pixel v, double rho) {
  return strong_horizontality_witness(inst, v, rho).holds;
}

double weak_horizontality_length(const Instance& inst, Pixel v, double eps,
                                 double alpha) {
  if (!(eps > 0) || !std::isfinite(eps))
    throw std::invalid_argument(
        "weak_horizontality_length: eps must be positive");
  if (!(alpha >= 0) || !std::isfinite(alpha))
    throw std::invalid_argument(
        "weak_horizontality_length: alpha must be >= 0");
  const double vx = double(v.x), vy = double(v.y);
  require_c2_in_window(inst.window, vx, vy, "weak_horizontality_length");

  const Mesh& m = inst.mesh;
  const double h = 0.5 + eps;
  double total = 0;
  std::unordered_set<std::uint64_t> dedup;
  for (TriId t : triangles_meeting_box(m, vx, vy, h)) {
    const auto& tv = m.triangle(t);
    for (int i = 0; i < 3; ++i) {
      const VertexId u = tv[i], w = tv[(i + 1) % 3];
      if (!dedup.insert(edge_key(u, w)).second) continue;
      const Point& a = m.vertex(u);
      const Point& b = m.vertex(w);
      if (!segment_meets_box(a, b, vx, vy, h)) continue;
      const EdgeAngleHproj ah = edge_angle_and_hproj({a, b});
      if (ah.angle <= alpha) total += ah.hproj;
    }
  }
  return total;
}

bool strong_implies_weak_check(const Instance& inst, Pixel v,
                               const PixelParams& params) {
  if (!params.valid())
    throw std::invalid_argument("strong_implies_weak_check: invalid parameters");
  const HorizontalityWitness wit =
      strong_horizontality_witness(inst, v, params.rho);
  if (!wit.holds) return true;
  const double vx = double(v.x), vy = double(v.y);
  const double he = 0.5 + params.eps() + 1e-12;
  for (const Point& p : wit.polyline)
    if (!point_in_box(p, vx, vy, he)) return false;
  const double mass = weak_horizontality_length(inst, v, params.eps(),
                                                params.alpha());
  return mass >= 1.0 / params.kappa - 1e-9;
}

LengthAnimalResult length_animal_check(const Instance& inst, double rho,
                                       const PathResult& path) {
  if (!(rho >= 0) || !std::isfinite(rho))
    throw std::invalid_argument("length_animal_check: rho must be >= 0");
  const double k = inst.k;
  if (!(k >= 1.0) || std::floor(k) != k)
    throw std::invalid_argument(
        "length_animal_check: k must be a positive integer");

  LengthAnimalResult r;
  r.lhs = path.length;
  if (rho == 0) {
    // The horizontal counts do not enter the bound at rho = 0.
    r.rhs = k;
    r.ok = r.lhs >= r.rhs;
    return r;
  }

  const double eps_rho = PixelParams{rho}.eps();
  const std::vector<Point> poly = path_polyline(inst, path);
  std::size_t worst = 0;
  for (std::size_t ci = 0; ci < kAllColors.size(); ++ci) {
    std::size_t cnt = 0;
    for (const Pixel& px :
         extract_animal(poly, GridSpec{2, kAllColors[ci]})) {
      bool event;
      try {
        event = !independence_event(inst, px, eps_rho) ||
                strong_horizontality(inst, px, rho);
      } catch (const WindowError&) {
        // Cannot certify independence near the boundary; count the pixel
        // against the bound.
        event = true;
      }
      cnt += event ? 1 : 0;
    }
    r.h_counts[ci] = cnt;
    worst = std::max(worst, cnt);
  }
  r.rhs = k + rho * (k - 4.0 * double(worst));
  r.ok = r.lhs >= r.rhs;
  return r;
}

}  // namespace pds
