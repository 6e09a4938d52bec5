#include "pds/paths.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "doctest.h"
#include "rational_oracle.hpp"

using pds::Instance;
using pds::Mesh;
using pds::PathResult;
using pds::Point;
using pds::TriId;
using pds::VertexId;
using pds::WalkResult;

namespace {

constexpr VertexId kInvalid() { return pds::kNoVertex; }

Instance synthetic(std::vector<Point> pts, double k,
                   pds::InsertionOrder order = pds::InsertionOrder::kGiven) {
  Instance inst;
  inst.mesh = pds::build(pts, order);
  inst.s_id = kInvalid();
  inst.t_id = kInvalid();
  for (VertexId v = 0; v < inst.mesh.vertex_count(); ++v) {
    if (inst.mesh.vertex(v) == Point{0, 0}) inst.s_id = v;
    if (inst.mesh.vertex(v) == Point{k, 0}) inst.t_id = v;
  }
  inst.k = k;
  inst.intensity = double(pts.size());
  return inst;
}

bool has_v(const Mesh& m, TriId t, VertexId v) {
  const auto& tv = m.triangle(t);
  return tv[0] == v || tv[1] == v || tv[2] == v;
}

VertexId apex_of(const Instance& inst, TriId t) {
  for (VertexId v : inst.mesh.triangle(t)) {
    if (v != inst.s_id && v != inst.t_id) return v;
  }
  return kInvalid();
}

std::unordered_set<std::uint64_t> edge_set(const Mesh& m) {
  std::unordered_set<std::uint64_t> edges;
  for (TriId t = 0; t < m.triangle_count(); ++t) {
    const auto& v = m.triangle(t);
    for (int i = 0; i < 3; ++i) {
      VertexId a = std::min(v[i], v[(i + 1) % 3]);
      VertexId b = std::max(v[i], v[(i + 1) % 3]);
      edges.insert((std::uint64_t(a) << 32) | b);
    }
  }
  return edges;
}

bool is_mesh_edge(const std::unordered_set<std::uint64_t>& edges, VertexId a,
                  VertexId b) {
  return edges.count((std::uint64_t(std::min(a, b)) << 32) |
                     std::max(a, b)) > 0;
}

double recomputed_length(const Mesh& m, const PathResult& p) {
  double len = 0;
  for (auto [a, b] : p.edges) {
    const Point& pa = m.vertex(a);
    const Point& pb = m.vertex(b);
    len += std::hypot(pb.x - pa.x, pb.y - pa.y);
  }
  return len;
}

// Exact interval of segment parameters (s at 0, t at 1) where the segment
// lies inside the closed triangle; empty or a point means the triangle's
// interior misses the open segment.
bool triangle_meets_open_segment(const Point& s, const Point& t,
                                 const Point& a, const Point& b,
                                 const Point& c, oracle::Rat* mid = nullptr) {
  const Point* tri[3] = {&a, &b, &c};
  if (oracle::orient(a, b, c) < 0) std::swap(tri[1], tri[2]);
  oracle::Rat lo = 0, hi = 1;
  for (int e = 0; e < 3; ++e) {
    const Point& p = *tri[e];
    const Point& q = *tri[(e + 1) % 3];
    oracle::Rat c0 = oracle::orient_value(p, q, s);
    oracle::Rat c1 = oracle::orient_value(p, q, t);
    oracle::Rat d = c1 - c0;  // constraint c0 + tau*d >= 0
    if (d == 0) {
      if (c0 < 0) return false;
    } else if (d > 0) {
      oracle::Rat bound = -c0 / d;
      if (bound > lo) lo = bound;
    } else {
      oracle::Rat bound = -c0 / d;
      if (bound < hi) hi = bound;
    }
  }
  if (!(lo < hi)) return false;
  if (mid) *mid = (lo + hi) / 2;
  return true;
}

// Independent re-derivation of the greedy construction from a corridor.
std::vector<VertexId> gp_oracle(const Instance& inst,
                                const std::vector<TriId>& corridor) {
  const Mesh& m = inst.mesh;
  std::map<VertexId, std::size_t> lastidx;
  for (std::size_t i = 0; i < corridor.size(); ++i) {
    for (VertexId v : m.triangle(corridor[i])) lastidx[v] = i;
  }
  std::vector<VertexId> out{inst.s_id};
  VertexId w = inst.s_id;
  for (std::size_t step = 0; w != inst.t_id; ++step) {
    REQUIRE(step < 10000);
    const auto& tv = m.triangle(corridor[lastidx.at(w)]);
    VertexId best = kInvalid();
    double best_angle = 1e300;
    for (VertexId x : tv) {
      if (x == w) continue;
      double ang = std::abs(std::atan2(m.vertex(x).y - m.vertex(w).y,
                                       m.vertex(x).x - m.vertex(w).x));
      if (ang < best_angle || (ang == best_angle && x < best)) {
        best = x;
        best_angle = ang;
      }
    }
    out.push_back(best);
    w = best;
  }
  return out;
}

// All-pairs relaxation oracle for shortest path length.
double bellman_ford_length(const Instance& inst) {
  const Mesh& m = inst.mesh;
  std::size_t n = m.vertex_count();
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::uint64_t key : edge_set(m)) {
    edges.emplace_back(VertexId(key >> 32), VertexId(key & 0xffffffffu));
  }
  std::vector<double> dist(n, 1e300);
  dist[inst.s_id] = 0;
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (auto [a, b] : edges) {
      const Point& pa = m.vertex(a);
      const Point& pb = m.vertex(b);
      double w = std::hypot(pb.x - pa.x, pb.y - pa.y);
      if (dist[a] + w < dist[b]) dist[b] = dist[a] + w, changed = true;
      if (dist[b] + w < dist[a]) dist[a] = dist[b] + w, changed = true;
    }
    if (!changed) break;
  }
  return dist[inst.t_id];
}

void check_common_invariants(const Instance& inst, const PathResult& p) {
  auto edges = edge_set(inst.mesh);
  REQUIRE(!p.vertices.empty());
  CHECK(p.vertices.front() == inst.s_id);
  CHECK(p.vertices.back() == inst.t_id);
  CHECK(p.size == p.edges.size());
  CHECK(p.edges.size() + 1 == p.vertices.size());
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    CHECK(p.edges[i].first == p.vertices[i]);
    CHECK(p.edges[i].second == p.vertices[i + 1]);
    CHECK(is_mesh_edge(edges, p.edges[i].first, p.edges[i].second));
  }
  CHECK(p.length ==
        doctest::Approx(recomputed_length(inst.mesh, p)).epsilon(1e-12));
}

}  // namespace

TEST_CASE("four-point instance: corridor, UP, GP, SP") {
  Instance inst = synthetic({{0, 0}, {2, 0}, {1, 0.8}, {1, -0.9}}, 2.0);
  REQUIRE(inst.s_id != kInvalid());
  REQUIRE(inst.t_id != kInvalid());
  VertexId a = kInvalid(), b = kInvalid();
  for (VertexId v = 0; v < 4; ++v) {
    if (inst.mesh.vertex(v).y > 0) a = v;
    if (inst.mesh.vertex(v).y < 0) b = v;
  }
  auto edges = edge_set(inst.mesh);
  bool st_edge = is_mesh_edge(edges, inst.s_id, inst.t_id);
  // Exactly one diagonal is present.
  CHECK(st_edge != is_mesh_edge(edges, a, b));

  WalkResult wr = pds::straight_walk(inst);
  CHECK(wr.triangles.size() == 2);
  CHECK(wr.crossed_edges == 1);

  PathResult up = pds::upper_path(inst);
  CHECK(up.vertices == std::vector<VertexId>{inst.s_id, a, inst.t_id});
  double expect_up = std::hypot(1, 0.8) + std::hypot(1, 0.8);
  CHECK(up.length == doctest::Approx(expect_up).epsilon(1e-12));
  CHECK(up.size == 2);

  PathResult gp = pds::greedy_path(inst);
  if (st_edge) {
    CHECK(gp.vertices == std::vector<VertexId>{inst.s_id, inst.t_id});
  } else {
    // At s the edge toward a (|angle| 0.675) beats the edge toward b
    // (|angle| 0.733); at a the edge toward t beats the vertical diagonal.
    CHECK(gp.vertices == std::vector<VertexId>{inst.s_id, a, inst.t_id});
  }

  PathResult sp = pds::shortest_path(inst);
  double direct = 2.0;
  double via_a = expect_up;
  double via_b = 2 * std::hypot(1, 0.9);
  double expect_sp = st_edge ? direct : std::min(via_a, via_b);
  CHECK(sp.length == doctest::Approx(expect_sp).epsilon(1e-12));
  check_common_invariants(inst, up);
  check_common_invariants(inst, gp);
  check_common_invariants(inst, sp);
}

TEST_CASE("direct edge (s,t): all paths degenerate correctly") {
  Instance inst =
      synthetic({{0, 0}, {0.3, 0}, {0.15, 0.5}, {0.15, -0.5}}, 0.3);
  auto edges = edge_set(inst.mesh);
  REQUIRE(is_mesh_edge(edges, inst.s_id, inst.t_id));

  WalkResult wr = pds::straight_walk(inst);
  CHECK(wr.triangles.size() == 2);
  CHECK(wr.crossed_edges == 1);
  // Upper flanking triangle first.
  CHECK(inst.mesh.vertex(apex_of(inst, wr.triangles[0])).y > 0);

  PathResult sp = pds::shortest_path(inst);
  CHECK(sp.vertices == std::vector<VertexId>{inst.s_id, inst.t_id});
  CHECK(sp.length == 0.3);

  PathResult gp = pds::greedy_path(inst);
  CHECK(gp.vertices == std::vector<VertexId>{inst.s_id, inst.t_id});

  PathResult up = pds::upper_path(inst);
  CHECK(up.vertices.size() == 3);
  CHECK(inst.mesh.vertex(up.vertices[1]).y > 0);
}

TEST_CASE("cocircular rhombus: deterministic lexicographic tie-break") {
  Instance inst = synthetic({{0, 0}, {2, 0}, {1, 1}, {1, -1}}, 2.0);
  auto edges = edge_set(inst.mesh);
  PathResult sp = pds::shortest_path(inst);
  if (is_mesh_edge(edges, inst.s_id, inst.t_id)) {
    CHECK(sp.vertices == std::vector<VertexId>{inst.s_id, inst.t_id});
    CHECK(sp.length == 2.0);
  } else {
    // Both detours have bitwise-equal length; ids break the tie.
    CHECK(sp.vertices == std::vector<VertexId>{0, 2, 1});
    CHECK(sp.length == 2 * std::hypot(1.0, 1.0));
  }
}

TEST_CASE("vertex exactly on the segment is an error") {
  Instance inst =
      synthetic({{0, 0}, {2, 0}, {1, 0}, {0.9, 1}, {1.1, -1}}, 2.0);
  CHECK_THROWS_AS(pds::straight_walk(inst), pds::PathError);
}

TEST_CASE("corridor matches the exact clipping oracle") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    double n = seed < 15 ? 300 : 2000;
    Instance inst = pds::make_instance(n, 1.0, {}, pds::mix_seed(808, seed));
    WalkResult wr = pds::straight_walk(inst);

    std::vector<std::pair<oracle::Rat, TriId>> expect;
    const Mesh& m = inst.mesh;
    for (TriId t = 0; t < m.triangle_count(); ++t) {
      const auto& v = m.triangle(t);
      oracle::Rat mid;
      if (triangle_meets_open_segment(inst.s(), inst.t(), m.vertex(v[0]),
                                      m.vertex(v[1]), m.vertex(v[2]), &mid)) {
        expect.emplace_back(mid, t);
      }
    }
    std::sort(expect.begin(), expect.end());
    std::vector<TriId> expect_order;
    for (auto& [mid, t] : expect) expect_order.push_back(t);

    CHECK(wr.triangles == expect_order);
    CHECK(wr.crossed_edges == wr.triangles.size() - 1);
    for (std::size_t i = 0; i + 1 < wr.triangles.size(); ++i) {
      const auto& nb = m.neighbors(wr.triangles[i]);
      CHECK(std::count(nb.begin(), nb.end(), wr.triangles[i + 1]) == 1);
    }
    REQUIRE(!wr.triangles.empty());
    CHECK(has_v(m, wr.triangles.front(), inst.s_id));
    CHECK(has_v(m, wr.triangles.back(), inst.t_id));
  }
}

TEST_CASE("path invariants and oracles on random instances") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    Instance inst = pds::make_instance(250, 1.0, {}, pds::mix_seed(909, seed));
    const Mesh& m = inst.mesh;
    WalkResult wr = pds::straight_walk(inst);

    PathResult up = pds::upper_path(inst);
    check_common_invariants(inst, up);
    for (std::size_t i = 1; i + 1 < up.vertices.size(); ++i) {
      CHECK(m.vertex(up.vertices[i]).y > 0);
    }
    // Every UP edge lies on a corridor triangle.
    std::unordered_set<std::uint64_t> corridor_edges;
    for (TriId t : wr.triangles) {
      const auto& v = m.triangle(t);
      for (int i = 0; i < 3; ++i) {
        VertexId x = std::min(v[i], v[(i + 1) % 3]);
        VertexId y = std::max(v[i], v[(i + 1) % 3]);
        corridor_edges.insert((std::uint64_t(x) << 32) | y);
      }
    }
    std::map<std::pair<VertexId, VertexId>, int> multiplicity;
    for (auto [a, b] : up.edges) {
      CHECK(corridor_edges.count(
                (std::uint64_t(std::min(a, b)) << 32) | std::max(a, b)) == 1);
      multiplicity[{std::min(a, b), std::max(a, b)}]++;
    }
    for (auto& [e, count] : multiplicity) CHECK(count <= 2);

    PathResult gp = pds::greedy_path(inst);
    check_common_invariants(inst, gp);
    CHECK(gp.vertices == gp_oracle(inst, wr.triangles));

    PathResult sp = pds::shortest_path(inst);
    check_common_invariants(inst, sp);
    CHECK(sp.length <= gp.length * (1 + 1e-12));
    CHECK(sp.length <= up.length * (1 + 1e-12));
    CHECK(sp.length >= inst.k * (1 - 1e-12));
    CHECK(sp.length < 1.998 * inst.k);
    CHECK(sp.length == doctest::Approx(bellman_ford_length(inst)).epsilon(1e-12));

    PathResult sp_pruned = pds::shortest_path(inst, true);
    CHECK(sp_pruned.vertices == sp.vertices);
    CHECK(sp_pruned.length == sp.length);
  }
}

TEST_CASE("statistical smoke: Table 1 neighborhoods at n=1e4") {
  const int trials = 40;
  const double n = 1e4;
  double sw = 0, up_len = 0, gp_len = 0, sp_len = 0, up_size = 0, sp_size = 0;
  for (int i = 0; i < trials; ++i) {
    Instance inst = pds::make_instance(n, 1.0, {}, pds::mix_seed(12321, i));
    sw += double(pds::straight_walk(inst).crossed_edges);
    PathResult up = pds::upper_path(inst);
    PathResult gp = pds::greedy_path(inst);
    PathResult sp = pds::shortest_path(inst);
    up_len += up.length;
    gp_len += gp.length;
    sp_len += sp.length;
    up_size += double(up.size);
    sp_size += double(sp.size);
  }
  double rt = std::sqrt(n) * trials;
  CHECK(sw / rt > 2.00);
  CHECK(sw / rt < 2.30);
  CHECK(up_len / trials > 1.15);
  CHECK(up_len / trials < 1.22);
  CHECK(gp_len / trials > 1.08);
  CHECK(gp_len / trials < 1.14);
  CHECK(sp_len / trials > 1.02);
  CHECK(sp_len / trials < 1.06);
  CHECK(up_size / rt > 1.00);
  CHECK(up_size / rt < 1.16);
  CHECK(sp_size / rt > 0.85);
  CHECK(sp_size / rt < 1.00);
}

TEST_CASE("truncation safety and Xia ellipse confinement") {
  const double n = 1e4;
  const double delta = pds::MarginPolicy{}.delta(n);
  for (int i = 0; i < 1000; ++i) {
    Instance inst = pds::make_instance(n, 1.0, {}, pds::mix_seed(777000, i));
    auto near_boundary = [&](VertexId v) {
      const Point& p = inst.mesh.vertex(v);
      const pds::Window& w = inst.window;
      double margin = std::min(
          std::min(p.x - w.xmin, w.xmax - p.x),
          std::min(p.y - w.ymin, w.ymax - p.y));
      return margin < delta / 2;
    };
    PathResult sp = pds::shortest_path(inst);
    PathResult up = pds::upper_path(inst);
    for (VertexId v : sp.vertices) {
      CHECK_FALSE(near_boundary(v));
      CHECK(std::abs(inst.mesh.vertex(v).y) <= 0.866 * inst.k);
    }
    for (VertexId v : up.vertices) CHECK_FALSE(near_boundary(v));
  }
}
