#include "pds/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <unordered_map>
#include <utility>

namespace pds {

namespace {

constexpr VertexId kInfVertex = std::numeric_limits<VertexId>::max();

// Hilbert index of (x, y) on a 2^16 x 2^16 grid.
std::uint64_t hilbert_key(std::uint32_t x, std::uint32_t y) {
  std::uint64_t d = 0;
  for (std::uint32_t s = 1u << 15; s > 0; s >>= 1) {
    std::uint32_t rx = (x & s) ? 1 : 0;
    std::uint32_t ry = (y & s) ? 1 : 0;
    d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

std::vector<VertexId> insertion_permutation(const std::vector<Point>& pts,
                                            InsertionOrder order) {
  std::vector<VertexId> perm(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) perm[i] = VertexId(i);
  if (order == InsertionOrder::kGiven) return perm;

  double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
  for (const Point& p : pts) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  double sx = xmax > xmin ? 65535.0 / (xmax - xmin) : 0.0;
  double sy = ymax > ymin ? 65535.0 / (ymax - ymin) : 0.0;
  std::vector<std::pair<std::uint64_t, VertexId>> keyed(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto gx = static_cast<std::uint32_t>((pts[i].x - xmin) * sx);
    auto gy = static_cast<std::uint32_t>((pts[i].y - ymin) * sy);
    keyed[i] = {hilbert_key(gx, gy), VertexId(i)};
  }
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t i = 0; i < pts.size(); ++i) perm[i] = keyed[i].second;
  return perm;
}

bool on_collinear_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

struct Builder {
  // One cache-line-friendly record per triangle slot. seen/status memoize
  // the conflict test within one insertion epoch.
  struct Tri {
    std::array<VertexId, 3> v;
    std::uint32_t seen;
    std::array<TriId, 3> n;
    std::uint8_t status;  // 1 in conflict, 2 clean
    std::uint8_t alive;
  };
  static_assert(sizeof(Tri) == 32);

  const std::vector<Point>& pts;
  std::vector<Tri> tris;
  std::vector<TriId> free_slots;
  std::uint32_t epoch = 0;
  TriId last = 0;

  std::vector<TriId> stack;
  std::vector<TriId> cavity;
  struct BoundaryEdge {
    VertexId u, w;
    TriId outside;
    std::uint8_t oslot;
  };
  std::vector<BoundaryEdge> boundary;
  std::vector<std::pair<VertexId, TriId>> ring;

  explicit Builder(const std::vector<Point>& points) : pts(points) {
    tris.reserve(2 * points.size() + 16);
  }

  int inf_slot(TriId t) const {
    const auto& v = tris[t].v;
    if (v[0] == kInfVertex) return 0;
    if (v[1] == kInfVertex) return 1;
    if (v[2] == kInfVertex) return 2;
    return 3;
  }

  TriId alloc(VertexId a, VertexId b, VertexId c) {
    TriId t;
    if (!free_slots.empty()) {
      t = free_slots.back();
      free_slots.pop_back();
    } else {
      t = TriId(tris.size());
      tris.push_back({{}, 0, {}, 0, 0});
    }
    tris[t].v = {a, b, c};
    tris[t].n = {kNoTriangle, kNoTriangle, kNoTriangle};
    tris[t].alive = 1;
    return t;
  }

  bool in_conflict(TriId t, const Point& p) const {
    int k = inf_slot(t);
    const auto& v = tris[t].v;
    if (k == 3) {
      return detail::incircle_assume_ccw(pts[v[0]], pts[v[1]], pts[v[2]], p) >
             0;
    }
    // Infinite triangle: conflict iff p lies strictly outside the hull edge,
    // or on the closed edge itself (point exactly on the hull boundary).
    const Point& u = pts[v[(k + 1) % 3]];
    const Point& w = pts[v[(k + 2) % 3]];
    int o = orient2d(u, w, p);
    if (o != 0) return o > 0;
    return on_collinear_segment(u, w, p);
  }

  std::uint8_t classify(TriId t, const Point& p) {
    Tri& tr = tris[t];
    if (tr.seen == epoch) return tr.status;
    tr.seen = epoch;
    return tr.status = in_conflict(t, p) ? 1 : 2;
  }

  TriId walk(const Point& p) const {
    TriId t = last;
    TriId came = kNoTriangle;
    for (std::size_t step = 0, cap = 4 * tris.size() + 64; step < cap;
         ++step) {
      const auto& v = tris[t].v;
      if (v[0] == kInfVertex || v[1] == kInfVertex || v[2] == kInfVertex) {
        return t;
      }
      TriId next = kNoTriangle;
      for (int i = 0; i < 3; ++i) {
        TriId nb = tris[t].n[i];
        if (nb == came) continue;
        if (orient2d(pts[v[(i + 1) % 3]], pts[v[(i + 2) % 3]], p) < 0) {
          next = nb;
          break;
        }
      }
      if (next == kNoTriangle) return t;
      came = t;
      t = next;
    }
    throw BuildError("point location walk did not terminate");
  }

  void insert(VertexId pid) {
    const Point& p = pts[pid];
    TriId t0 = walk(p);
    if (inf_slot(t0) == 3) {
      for (VertexId v : tris[t0].v) {
        if (pts[v] == p) throw BuildError("duplicate point");
      }
    }
    ++epoch;
    if (classify(t0, p) != 1) {
      // Walk ended in a triangle whose circumdisk does not contain p; with
      // duplicates excluded this cannot happen on a Delaunay mesh.
      throw BuildError("insertion found no conflicting triangle");
    }
    stack.assign(1, t0);
    cavity.clear();
    boundary.clear();
    while (!stack.empty()) {
      TriId t = stack.back();
      stack.pop_back();
      cavity.push_back(t);
      for (int i = 0; i < 3; ++i) {
        TriId nb = tris[t].n[i];
        bool fresh = tris[nb].seen != epoch;
        if (classify(nb, p) == 1) {
          if (fresh) stack.push_back(nb);
        } else {
          std::uint8_t oslot = 0;
          while (tris[nb].n[oslot] != t) ++oslot;
          boundary.push_back(
              {tris[t].v[(i + 1) % 3], tris[t].v[(i + 2) % 3], nb, oslot});
        }
      }
    }
    for (TriId t : cavity) {
      tris[t].alive = 0;
      free_slots.push_back(t);
    }
    ring.clear();
    TriId last_finite = kNoTriangle;
    for (const BoundaryEdge& be : boundary) {
      TriId nt = alloc(be.u, be.w, pid);
      tris[nt].n[2] = be.outside;
      tris[be.outside].n[be.oslot] = nt;
      ring.emplace_back(be.u, nt);
      if (be.u != kInfVertex && be.w != kInfVertex) last_finite = nt;
    }
    for (const auto& [u, nt] : ring) {
      VertexId w = tris[nt].v[1];
      for (const auto& [u2, mt] : ring) {
        if (u2 == w) {
          tris[nt].n[0] = mt;
          tris[mt].n[1] = nt;
          break;
        }
      }
    }
    // The walk hint must stay finite; a cavity always yields at least one
    // finite new triangle.
    last = last_finite;
  }
};

}  // namespace

Mesh build(const std::vector<Point>& points, InsertionOrder order) {
  if (points.size() < 3) throw BuildError("need at least 3 points");
  for (const Point& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw BuildError("non-finite coordinate");
    }
  }
  std::vector<VertexId> perm = insertion_permutation(points, order);

  // Work on a copy permuted into insertion order so that vertex indices of
  // nearby points are themselves nearby; ids are mapped back at the end.
  std::size_t n = points.size();
  std::vector<Point> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = points[perm[i]];

  // First triangle: the first distinct pair plus the first point off their
  // line, in insertion order.
  std::size_t j1 = 1;
  while (j1 < n && sorted[j1] == sorted[0]) ++j1;
  if (j1 == n) throw BuildError("all points coincident");
  std::size_t j2 = j1 + 1;
  int o = 0;
  while (j2 < n && (o = orient2d(sorted[0], sorted[j1], sorted[j2])) == 0) {
    ++j2;
  }
  if (j2 == n) throw BuildError("all points collinear");
  VertexId a = 0, b = VertexId(j1), c = VertexId(j2);
  if (o < 0) std::swap(b, c);

  Builder bld(sorted);
  TriId t0 = bld.alloc(a, b, c);
  TriId iab = bld.alloc(b, a, kInfVertex);
  TriId ibc = bld.alloc(c, b, kInfVertex);
  TriId ica = bld.alloc(a, c, kInfVertex);
  bld.tris[t0].n = {ibc, ica, iab};
  bld.tris[iab].n = {ica, ibc, t0};
  bld.tris[ibc].n = {iab, ica, t0};
  bld.tris[ica].n = {ibc, iab, t0};
  bld.last = t0;

  for (std::size_t j = 1; j < n; ++j) {
    if (j == j1 || j == j2) continue;
    if (sorted[j] == sorted[0]) throw BuildError("duplicate point");
    bld.insert(VertexId(j));
  }

  // Strip infinite triangles, compact slots, flag the hull.
  Mesh m;
  m.pts_ = points;
  m.hull_.assign(n, 0);
  auto alive_finite = [&bld](TriId t) {
    return bld.tris[t].alive && bld.inf_slot(t) == 3;
  };
  std::vector<TriId> remap(bld.tris.size(), kNoTriangle);
  TriId count = 0;
  for (TriId t = 0; t < bld.tris.size(); ++t) {
    if (alive_finite(t)) remap[t] = count++;
  }
  m.tris_.resize(count);
  m.nbrs_.resize(count);
  for (TriId t = 0; t < bld.tris.size(); ++t) {
    if (remap[t] == kNoTriangle) {
      if (bld.tris[t].alive) {  // infinite triangle: edge ends are on the hull
        for (VertexId v : bld.tris[t].v) {
          if (v != kInfVertex) m.hull_[perm[v]] = 1;
        }
      }
      continue;
    }
    for (int i = 0; i < 3; ++i) {
      m.tris_[remap[t]][i] = perm[bld.tris[t].v[i]];
      m.nbrs_[remap[t]][i] = remap[bld.tris[t].n[i]];
    }
  }
  m.incident_.assign(n, kNoTriangle);
  for (TriId t = 0; t < count; ++t) {
    for (VertexId v : m.tris_[t]) m.incident_[v] = t;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (m.incident_[v] == kNoTriangle) {
      throw BuildError("internal error: vertex without finite triangle");
    }
    m.hull_count_ += m.hull_[v];
  }
  return m;
}

LocateResult locate(const Mesh& mesh, const Point& p, TriId hint) {
  TriId t = hint < mesh.triangle_count() ? hint : 0;
  TriId came = kNoTriangle;
  for (std::size_t step = 0, cap = 4 * mesh.triangle_count() + 64; step < cap;
       ++step) {
    const auto& v = mesh.triangle(t);
    TriId next = kNoTriangle;
    int exit_slot = -1;
    for (int i = 0; i < 3; ++i) {
      TriId nb = mesh.neighbors(t)[i];
      if (nb == came && nb != kNoTriangle) continue;
      if (orient2d(mesh.vertex(v[(i + 1) % 3]), mesh.vertex(v[(i + 2) % 3]),
                   p) < 0) {
        next = nb;
        exit_slot = i;
        break;
      }
    }
    if (exit_slot >= 0 && next == kNoTriangle) return {t, false};
    if (exit_slot < 0) {
      // Containing triangle. Ties on shared edges and vertices resolve to
      // the lowest incident triangle id.
      TriId best = t;
      for (int i = 0; i < 3; ++i) {
        TriId nb = mesh.neighbors(t)[i];
        if (nb == kNoTriangle) continue;
        if (orient2d(mesh.vertex(v[(i + 1) % 3]), mesh.vertex(v[(i + 2) % 3]),
                     p) == 0) {
          best = std::min(best, nb);
        }
      }
      return {best, true};
    }
    came = t;
    t = next;
  }
  throw std::runtime_error("locate: walk did not terminate");
}

bool verify_delaunay(const Mesh& mesh) {
  const std::size_t tcount = mesh.triangle_count();
  for (TriId t = 0; t < tcount; ++t) {
    const auto& v = mesh.triangle(t);
    if (orient2d(mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2])) !=
        1) {
      return false;
    }
    for (int i = 0; i < 3; ++i) {
      TriId nb = mesh.neighbors(t)[i];
      if (nb == kNoTriangle) continue;
      if (nb >= tcount) return false;
      int back = -1;
      for (int j = 0; j < 3; ++j) {
        if (mesh.neighbors(nb)[j] == t) back = j;
      }
      if (back < 0) return false;
      VertexId u = v[(i + 1) % 3], w = v[(i + 2) % 3];
      const auto& nv = mesh.triangle(nb);
      if (nv[(back + 1) % 3] != w || nv[(back + 2) % 3] != u) return false;
    }
  }
  for (TriId t = 0; t < tcount; ++t) {
    const auto& v = mesh.triangle(t);
    const Point& a = mesh.vertex(v[0]);
    const Point& b = mesh.vertex(v[1]);
    const Point& c = mesh.vertex(v[2]);
    for (VertexId d = 0; d < mesh.vertex_count(); ++d) {
      if (d == v[0] || d == v[1] || d == v[2]) continue;
      if (detail::incircle_assume_ccw(a, b, c, mesh.vertex(d)) > 0) {
        return false;
      }
    }
  }
  return true;
}

Mesh Mesh::from_raw(std::vector<Point> vertices,
                    std::vector<std::array<VertexId, 3>> triangles) {
  Mesh m;
  m.pts_ = std::move(vertices);
  m.tris_ = std::move(triangles);
  m.finalize_from_raw();
  return m;
}

void Mesh::finalize_from_raw() {
  const std::size_t tcount = tris_.size();
  nbrs_.assign(tcount, {kNoTriangle, kNoTriangle, kNoTriangle});
  std::unordered_map<std::uint64_t, std::uint64_t> half;  // (u,w) -> t*3+slot
  half.reserve(tcount * 3);
  for (TriId t = 0; t < tcount; ++t) {
    const auto& v = tris_[t];
    for (VertexId vid : v) {
      if (vid >= pts_.size()) {
        throw std::invalid_argument("from_raw: vertex id out of range");
      }
    }
    if (orient2d(pts_[v[0]], pts_[v[1]], pts_[v[2]]) != 1) {
      throw std::invalid_argument("from_raw: triangle not counterclockwise");
    }
    for (int i = 0; i < 3; ++i) {
      VertexId u = v[(i + 1) % 3], w = v[(i + 2) % 3];
      std::uint64_t key = (std::uint64_t(u) << 32) | w;
      if (!half.emplace(key, std::uint64_t(t) * 3 + i).second) {
        throw std::invalid_argument("from_raw: duplicate directed edge");
      }
    }
  }
  hull_.assign(pts_.size(), 0);
  incident_.assign(pts_.size(), kNoTriangle);
  hull_count_ = 0;
  for (TriId t = 0; t < tcount; ++t) {
    const auto& v = tris_[t];
    for (int i = 0; i < 3; ++i) {
      VertexId u = v[(i + 1) % 3], w = v[(i + 2) % 3];
      auto it = half.find((std::uint64_t(w) << 32) | u);
      if (it != half.end()) {
        nbrs_[t][i] = TriId(it->second / 3);
      } else {
        hull_[u] = hull_[w] = 1;
      }
    }
    for (VertexId vid : v) incident_[vid] = t;
  }
  for (std::size_t v = 0; v < pts_.size(); ++v) {
    if (incident_[v] == kNoTriangle) {
      throw std::invalid_argument("from_raw: isolated vertex");
    }
    hull_count_ += hull_[v];
  }
}

void dump_off(const Mesh& mesh, std::ostream& os) {
  os << "OFF\n"
     << mesh.vertex_count() << ' ' << mesh.triangle_count() << " 0\n";
  for (const Point& p : mesh.points()) os << p.x << ' ' << p.y << " 0\n";
  for (TriId t = 0; t < mesh.triangle_count(); ++t) {
    const auto& v = mesh.triangle(t);
    os << "3 " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  }
}

}  // namespace pds
