#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pds/sampling.hpp"

namespace pds {

// An s-to-t walk along mesh edges. Edges are an ordered multiset: the upper
// path may traverse an edge twice, and both traversals count in length and
// size.
struct PathResult {
  std::vector<VertexId> vertices;
  std::vector<std::pair<VertexId, VertexId>> edges;
  double length = 0.0;
  std::size_t size = 0;
};

// The ordered corridor of triangles met by segment [s,t]; consecutive
// corridor triangles share a crossed edge, so crossed_edges = triangles - 1.
struct WalkResult {
  std::vector<TriId> triangles;
  std::size_t crossed_edges = 0;
};

class PathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Corridor of triangles whose region meets [s,t], left to right. If the mesh
// contains the edge (s,t) itself the corridor degenerates to the two
// triangles flanking it.
WalkResult straight_walk(const Instance& inst);

// Traversal of the upper boundary of the straight-walk corridor. Reentrant
// boundary vertices cause an edge to appear once in each direction.
PathResult upper_path(const Instance& inst);

// From the current vertex w, take the rightmost corridor triangle containing
// w and follow its edge at w whose direction is flattest against the x-axis
// (ties to the smaller vertex id).
PathResult greedy_path(const Instance& inst);

// Globally shortest s-to-t path over mesh edges with Euclidean weights.
// Among equal-length optima the lexicographically smallest vertex-id
// sequence is returned. prune_ellipse restricts the search to the vertices
// that any optimal path can visit (sum of distances to s and t below the
// 1.998k stretch bound); the result is identical.
PathResult shortest_path(const Instance& inst, bool prune_ellipse = false);

}  // namespace pds
