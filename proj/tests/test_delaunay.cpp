#include "pds/delaunay.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "rational_oracle.hpp"

using pds::kNoTriangle;
using pds::Mesh;
using pds::Point;
using pds::TriId;
using pds::VertexId;

namespace {

double uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<Point> random_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> pts(n);
  for (auto& p : pts) p = {uniform(rng), uniform(rng)};
  return pts;
}

using Triple = std::array<VertexId, 3>;

std::set<Triple> triangle_set(const Mesh& m) {
  std::set<Triple> out;
  for (TriId t = 0; t < m.triangle_count(); ++t) {
    Triple v = m.triangle(t);
    std::sort(v.begin(), v.end());
    out.insert(v);
  }
  return out;
}

// Every circumdisk-empty CCW triple; the Delaunay triangle set in general
// position. Exact rational incircle, O(n^4).
std::set<Triple> brute_force_delaunay(const std::vector<Point>& pts) {
  std::set<Triple> out;
  const auto n = static_cast<VertexId>(pts.size());
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) {
      for (VertexId k = j + 1; k < n; ++k) {
        Point a = pts[i], b = pts[j], c = pts[k];
        if (oracle::orient(a, b, c) == 0) continue;
        if (oracle::orient(a, b, c) < 0) std::swap(b, c);
        bool empty = true;
        for (VertexId d = 0; d < n && empty; ++d) {
          if (d == i || d == j || d == k) continue;
          if (oracle::incircle(a, b, c, pts[d]) > 0) empty = false;
        }
        if (empty) out.insert({i, j, k});
      }
    }
  }
  return out;
}

void check_euler(const Mesh& m) {
  CHECK(m.triangle_count() ==
        2 * m.vertex_count() - 2 - m.hull_vertex_count());
  // Edge count consistency: 3T directed edges, hull edges unpaired.
  std::size_t boundary_slots = 0;
  for (TriId t = 0; t < m.triangle_count(); ++t) {
    for (TriId nb : m.neighbors(t)) {
      if (nb == kNoTriangle) ++boundary_slots;
    }
  }
  CHECK(boundary_slots == m.hull_vertex_count());  // hull is a closed polygon
}

}  // namespace

TEST_CASE("build: three points give one triangle") {
  Mesh m = pds::build({{0, 0}, {1, 0}, {0, 1}});
  CHECK(m.triangle_count() == 1);
  CHECK(m.vertex_count() == 3);
  CHECK(m.hull_vertex_count() == 3);
  CHECK(pds::verify_delaunay(m));
  check_euler(m);
}

TEST_CASE("build: four points pick the empty-circle diagonal") {
  std::vector<Point> pts{{0, 0}, {1, 0}, {0, 1}, {0.9, 0.9}};
  Mesh m = pds::build(pts);
  REQUIRE(m.triangle_count() == 2);
  CHECK(pds::verify_delaunay(m));

  // Decide the correct diagonal by testing both candidate triangulations
  // with the exact oracle.
  auto diagonal_ok = [&](VertexId p, VertexId q, VertexId r, VertexId s) {
    // triangles (p,q,r) and (p,r,s), oriented
    auto ccw = [&](VertexId x, VertexId y, VertexId z) {
      return oracle::orient(pts[x], pts[y], pts[z]) > 0;
    };
    auto fix = [&](VertexId x, VertexId y, VertexId z) {
      return ccw(x, y, z) ? Triple{x, y, z} : Triple{x, z, y};
    };
    Triple t1 = fix(p, q, r), t2 = fix(p, r, s);
    for (const Triple& t : {t1, t2}) {
      for (VertexId d = 0; d < 4; ++d) {
        if (d == t[0] || d == t[1] || d == t[2]) continue;
        if (oracle::incircle(pts[t[0]], pts[t[1]], pts[t[2]], pts[d]) > 0) {
          return false;
        }
      }
    }
    return true;
  };
  bool diag03 = diagonal_ok(0, 1, 3, 2);  // diagonal (0,0)-(0.9,0.9)
  bool diag12 = diagonal_ok(1, 3, 2, 0);  // diagonal (1,0)-(0,1)
  REQUIRE(diag03 != diag12);

  std::set<std::pair<VertexId, VertexId>> edges;
  for (TriId t = 0; t < m.triangle_count(); ++t) {
    const auto& v = m.triangle(t);
    for (int i = 0; i < 3; ++i) {
      VertexId a = v[i], b = v[(i + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  CHECK(edges.count({0, 3}) == (diag03 ? 1 : 0));
  CHECK(edges.count({1, 2}) == (diag12 ? 1 : 0));
}

TEST_CASE("build matches the brute-force oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    auto pts = random_points(18, 1000 + seed);
    Mesh m = pds::build(pts);
    CHECK(triangle_set(m) == brute_force_delaunay(pts));
    CHECK(pds::verify_delaunay(m));
    check_euler(m);
  }
}

TEST_CASE("build: 64-point instances verify") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto pts = random_points(64, 42 * 1000 + seed);
    Mesh m = pds::build(pts);
    CHECK(pds::verify_delaunay(m));
    check_euler(m);
  }
}

TEST_CASE("build is deterministic and permutation invariant") {
  auto pts = random_points(32, 2024u);
  Mesh ref = pds::build(pts);
  std::set<Triple> ref_set = triangle_set(ref);

  Mesh again = pds::build(pts);
  CHECK(again.triangles() == ref.triangles());

  std::mt19937_64 rng(7u);
  std::vector<VertexId> idx(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) idx[i] = VertexId(i);
  for (int shuffle = 0; shuffle < 20; ++shuffle) {
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<Point> shuffled(pts.size());
    std::vector<VertexId> back(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      shuffled[i] = pts[idx[i]];
      back[i] = idx[i];
    }
    Mesh m = pds::build(shuffled, pds::InsertionOrder::kGiven);
    std::set<Triple> got;
    for (TriId t = 0; t < m.triangle_count(); ++t) {
      Triple v = m.triangle(t);
      for (auto& x : v) x = back[x];
      std::sort(v.begin(), v.end());
      got.insert(v);
    }
    CHECK(got == ref_set);
  }
}

TEST_CASE("build handles degenerate layouts") {
  SUBCASE("collinear prefix") {
    Mesh m = pds::build({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {1, 2}},
                        pds::InsertionOrder::kGiven);
    CHECK(m.vertex_count() == 5);
    CHECK(pds::verify_delaunay(m));
    check_euler(m);
  }
  SUBCASE("insert on hull edge") {
    Mesh m = pds::build({{0, 0}, {2, 0}, {0, 2}, {1, 0}},
                        pds::InsertionOrder::kGiven);
    CHECK(m.triangle_count() == 2);
    CHECK(m.hull_vertex_count() == 4);
    CHECK(pds::verify_delaunay(m));
    check_euler(m);
  }
  SUBCASE("insert collinear beyond hull edge") {
    Mesh m = pds::build({{0, 0}, {1, 0}, {0, 1}, {2, 0}},
                        pds::InsertionOrder::kGiven);
    CHECK(m.triangle_count() == 2);
    CHECK(m.hull_vertex_count() == 4);
    CHECK(pds::verify_delaunay(m));
    check_euler(m);
  }
  SUBCASE("grid with cocircular quads") {
    std::vector<Point> pts;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) pts.push_back({double(i), double(j)});
    }
    Mesh m = pds::build(pts);
    CHECK(pds::verify_delaunay(m));
    check_euler(m);
    Mesh g = pds::build(pts, pds::InsertionOrder::kGiven);
    CHECK(pds::verify_delaunay(g));
    check_euler(g);
  }
}

TEST_CASE("build error cases") {
  CHECK_THROWS_AS(pds::build({{0, 0}, {1, 0}}), pds::BuildError);
  CHECK_THROWS_AS(pds::build({{0, 0}, {1, 1}, {2, 2}, {3, 3}}),
                  pds::BuildError);
  CHECK_THROWS_AS(pds::build({{0, 0}, {1, 0}, {0, 1}, {1, 0}}),
                  pds::BuildError);
  CHECK_THROWS_AS(pds::build({{0, 0}, {0, 0}, {0, 0}}), pds::BuildError);
  double nan = std::nan("");
  CHECK_THROWS_AS(pds::build({{0, 0}, {1, 0}, {nan, 1}}), pds::BuildError);
}

TEST_CASE("locate agrees with exhaustive scan") {
  auto pts = random_points(400, 99u);
  Mesh m = pds::build(pts);
  REQUIRE(pds::verify_delaunay(m));

  auto scan = [&](const Point& p) {
    std::vector<TriId> hits;
    for (TriId t = 0; t < m.triangle_count(); ++t) {
      const auto& v = m.triangle(t);
      bool inside = true;
      for (int i = 0; i < 3 && inside; ++i) {
        if (pds::orient2d(m.vertex(v[(i + 1) % 3]), m.vertex(v[(i + 2) % 3]),
                          p) < 0) {
          inside = false;
        }
      }
      if (inside) hits.push_back(t);
    }
    return hits;
  };

  std::mt19937_64 rng(3u);
  int interior_queries = 0;
  for (int q = 0; q < 10000; ++q) {
    Point p{uniform(rng) * 1.2 - 0.1, uniform(rng) * 1.2 - 0.1};
    auto hits = scan(p);
    TriId hint = TriId(rng() % m.triangle_count());
    auto res = pds::locate(m, p, hint);
    if (hits.empty()) {
      CHECK_FALSE(res.inside_hull);
    } else {
      CHECK(res.inside_hull);
      CHECK(std::count(hits.begin(), hits.end(), res.tri) == 1);
      ++interior_queries;
    }
  }
  CHECK(interior_queries > 5000);

  SUBCASE("centroid of each triangle locates to it") {
    for (TriId t = 0; t < std::min<std::size_t>(m.triangle_count(), 500);
         ++t) {
      const auto& v = m.triangle(t);
      Point g{(m.vertex(v[0]).x + m.vertex(v[1]).x + m.vertex(v[2]).x) / 3,
              (m.vertex(v[0]).y + m.vertex(v[1]).y + m.vertex(v[2]).y) / 3};
      auto res = pds::locate(m, g, 0);
      CHECK(res.inside_hull);
      CHECK(res.tri == t);
    }
  }

  SUBCASE("edge midpoints tie-break to the lower triangle id") {
    int edge_queries = 0;
    for (TriId t = 0; t < m.triangle_count() && edge_queries < 300; ++t) {
      for (int i = 0; i < 3; ++i) {
        TriId nb = m.neighbors(t)[i];
        if (nb == kNoTriangle || nb < t) continue;
        const auto& v = m.triangle(t);
        Point u = m.vertex(v[(i + 1) % 3]), w = m.vertex(v[(i + 2) % 3]);
        Point mid{(u.x + w.x) / 2, (u.y + w.y) / 2};
        // Only exact-on-edge queries test the tie rule.
        if (pds::orient2d(u, w, mid) != 0) continue;
        auto r1 = pds::locate(m, mid, 0);
        auto r2 = pds::locate(m, mid, TriId(m.triangle_count() - 1));
        CHECK(r1.inside_hull);
        CHECK(r1.tri == std::min(t, nb));
        CHECK(r2.tri == r1.tri);
        ++edge_queries;
      }
    }
    CHECK(edge_queries > 100);
  }

  SUBCASE("vertex queries return an incident triangle") {
    for (VertexId v = 0; v < 200; ++v) {
      auto res = pds::locate(m, m.vertex(v), TriId(v % m.triangle_count()));
      CHECK(res.inside_hull);
      const auto& tv = m.triangle(res.tri);
      CHECK((tv[0] == v || tv[1] == v || tv[2] == v));
    }
  }
}

TEST_CASE("verify_delaunay rejects a flipped mesh") {
  // Convex quad in general position: exactly one diagonal is Delaunay.
  std::vector<Point> pts{{0, 0}, {1, 0}, {1.2, 1.1}, {-0.1, 0.9}};
  Mesh good = pds::build(pts);
  REQUIRE(pds::verify_delaunay(good));
  std::set<Triple> good_set = triangle_set(good);

  auto ccw = [&](Triple t) {
    if (oracle::orient(pts[t[0]], pts[t[1]], pts[t[2]]) < 0) {
      std::swap(t[1], t[2]);
    }
    return t;
  };
  std::vector<Triple> flipped;
  if (good_set.count({0, 1, 2})) {
    flipped = {ccw({0, 1, 3}), ccw({1, 2, 3})};
  } else {
    flipped = {ccw({0, 1, 2}), ccw({0, 2, 3})};
  }
  Mesh bad = Mesh::from_raw(pts, flipped);
  CHECK_FALSE(pds::verify_delaunay(bad));
  CHECK(pds::verify_delaunay(Mesh::from_raw(
      {{0, 0}, {1, 0}, {0, 1}}, {{VertexId(0), VertexId(1), VertexId(2)}})));
}

TEST_CASE("spatial sort and given order agree on general position input") {
  auto pts = random_points(300, 31337u);
  Mesh a = pds::build(pts, pds::InsertionOrder::kSpatialSort);
  Mesh b = pds::build(pts, pds::InsertionOrder::kGiven);
  CHECK(triangle_set(a) == triangle_set(b));
}

TEST_CASE("mesh accessors are consistent") {
  auto pts = random_points(200, 5150u);
  Mesh m = pds::build(pts);
  REQUIRE(pds::verify_delaunay(m));
  CHECK(m.points().size() == m.vertex_count());

  for (VertexId v = 0; v < m.vertex_count(); ++v) {
    TriId t = m.incident_triangle(v);
    REQUIRE(t < m.triangle_count());
    const auto& tv = m.triangle(t);
    CHECK((tv[0] == v || tv[1] == v || tv[2] == v));
  }

  // A vertex is on the hull iff it is not strictly inside the convex hull:
  // some half-plane through it contains all points.
  std::size_t hull_seen = 0;
  for (VertexId v = 0; v < m.vertex_count(); ++v) {
    bool extreme = false;
    for (VertexId a = 0; a < m.vertex_count() && !extreme; ++a) {
      if (a == v) continue;
      bool all_left = true;
      for (VertexId b = 0; b < m.vertex_count() && all_left; ++b) {
        if (b == v || b == a) continue;
        if (oracle::orient(m.vertex(v), m.vertex(a), m.vertex(b)) < 0) {
          all_left = false;
        }
      }
      extreme = all_left;
    }
    CHECK(m.on_hull(v) == extreme);
    hull_seen += m.on_hull(v) ? 1 : 0;
  }
  CHECK(hull_seen == m.hull_vertex_count());
}

TEST_CASE("dump_off golden output") {
  Mesh m = pds::build({{0, 0}, {1, 0}, {0, 1}});
  std::ostringstream os;
  pds::dump_off(m, os);
  const auto& v = m.triangle(0);
  std::ostringstream want;
  want << "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 " << v[0] << ' ' << v[1] << ' '
       << v[2] << '\n';
  CHECK(os.str() == want.str());
}
