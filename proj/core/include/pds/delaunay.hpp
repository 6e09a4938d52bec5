#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pds/geom.hpp"

namespace pds {

using VertexId = std::uint32_t;
using TriId = std::uint32_t;

// Boundary marker in adjacency slots of a finished mesh.
inline constexpr TriId kNoTriangle = std::numeric_limits<TriId>::max();
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

enum class InsertionOrder {
  kSpatialSort,  // Hilbert-curve order; near-linear expected build time
  kGiven,        // insert in input order
};

struct BuildError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Immutable planar triangulation. Triangles are counterclockwise;
// neighbors(t)[i] faces vertex triangle(t)[i] across the opposite edge and is
// kNoTriangle on the hull. Safe for concurrent read-only use.
class Mesh {
 public:
  Mesh() = default;

  // Builds adjacency from bare triangles. Validates orientation and that
  // every edge is shared by at most two triangles, consistently oriented.
  // Intended for tests and small hand-built meshes; build() is the real
  // constructor.
  static Mesh from_raw(std::vector<Point> vertices,
                       std::vector<std::array<VertexId, 3>> triangles);

  std::size_t vertex_count() const { return pts_.size(); }
  std::size_t triangle_count() const { return tris_.size(); }
  std::size_t hull_vertex_count() const { return hull_count_; }

  const Point& vertex(VertexId v) const { return pts_[v]; }
  const std::vector<Point>& points() const { return pts_; }
  const std::array<VertexId, 3>& triangle(TriId t) const { return tris_[t]; }
  const std::array<TriId, 3>& neighbors(TriId t) const { return nbrs_[t]; }
  const std::vector<std::array<VertexId, 3>>& triangles() const {
    return tris_;
  }

  // Some live triangle containing v as a vertex.
  TriId incident_triangle(VertexId v) const { return incident_[v]; }
  bool on_hull(VertexId v) const { return hull_[v] != 0; }

 private:
  friend Mesh build(const std::vector<Point>&, InsertionOrder);

  void finalize_from_raw();

  std::vector<Point> pts_;
  std::vector<std::array<VertexId, 3>> tris_;
  std::vector<std::array<TriId, 3>> nbrs_;
  std::vector<TriId> incident_;
  std::vector<std::uint8_t> hull_;
  std::size_t hull_count_ = 0;
};

// Incremental Bowyer-Watson construction. Throws BuildError on fewer than 3
// points, all-collinear input, duplicate points, or non-finite coordinates.
// Deterministic for a fixed point list and order policy.
Mesh build(const std::vector<Point>& points,
           InsertionOrder order = InsertionOrder::kSpatialSort);

struct LocateResult {
  TriId tri = kNoTriangle;  // containing triangle, or last hull triangle seen
  bool inside_hull = false;
};

// Straight walk from hint. For a point on a shared edge or vertex the lowest
// incident triangle id is returned. Outside the hull, inside_hull is false
// and tri is the hull triangle whose boundary edge the walk exited through.
LocateResult locate(const Mesh& mesh, const Point& p, TriId hint = 0);

// Brute-force check of the empty-circumdisk property, orientation, and
// adjacency consistency. O(T*V): meant for meshes up to ~1e4 vertices.
bool verify_delaunay(const Mesh& mesh);

// Plain-text OFF listing (z written as 0) for debugging.
void dump_off(const Mesh& mesh, std::ostream& os);

}  // namespace pds
