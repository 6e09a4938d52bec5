#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pds/delaunay.hpp"
#include "pds/geom.hpp"

namespace pds {

struct Window {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  bool contains(const Point& p) const {
    return xmin <= p.x && p.x <= xmax && ymin <= p.y && p.y <= ymax;
  }
};

// Margin around the region of interest. The default radius delta makes the
// Gaussian tail e^{-n pi delta^2} equal to 1e-12, so the truncated window is
// statistically indistinguishable from the full plane.
struct MarginPolicy {
  double override_delta = -1.0;  // negative: use the default rule

  double delta(double intensity) const;
};

struct Instance {
  Mesh mesh;
  VertexId s_id = 0, t_id = 0;
  double intensity = 0;
  double k = 0;
  std::uint64_t seed = 0;
  Window window;

  const Point& s() const { return mesh.vertex(s_id); }
  const Point& t() const { return mesh.vertex(t_id); }
};

class SampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// i-th derived seed of a master seed (splitmix64 output stream). Published
// so that externally scripted runs can reproduce per-trial streams.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t counter);

// Homogeneous Poisson point process of the given intensity on the window.
// The draw is fully determined by the seed.
std::vector<Point> sample_ppp(double intensity, const Window& window,
                              std::uint64_t seed);

// X = X_n with s=(0,0) and t=(k,0) appended, triangulated. Degenerate draws
// (too few points, collinear, s or t on the hull) are retried with derived
// sub-seeds, at most 8 attempts.
Instance make_instance(double intensity, double k, MarginPolicy margin,
                       std::uint64_t seed);

}  // namespace pds
