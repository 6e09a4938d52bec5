#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pds/paths.hpp"

namespace pds {

// The four translates of the doubled grid. Same-color squares C_2(v) tile
// the plane with disjoint interiors.
enum class Color { kGreen, kPink, kBlue, kYellow };

constexpr std::array<Color, 4> kAllColors = {Color::kGreen, Color::kPink,
                                             Color::kBlue, Color::kYellow};

constexpr std::array<std::int64_t, 2> color_offset(Color c) {
  switch (c) {
    case Color::kGreen: return {0, 0};
    case Color::kPink: return {1, 0};
    case Color::kBlue: return {0, 1};
    default: return {1, 1};
  }
}

// Grid of points lambda*Z^2 + O_color; each grid point v carries the square
// C_lambda(v) = v + [-lambda/2, lambda/2]^2.
struct GridSpec {
  std::int64_t lambda = 1;
  Color color = Color::kGreen;
};

// A grid point in absolute integer coordinates.
struct Pixel {
  std::int64_t x = 0, y = 0;
  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

struct PixelParams {
  double rho = 0;
  double kappa = 1.5;

  double eps() const { return std::sqrt(rho) * std::sqrt(2.0 + rho); }
  double alpha() const {
    return std::sqrt(2.0 * kappa / (kappa - 1.0) * rho);
  }
  // The near-horizontal edge family is only meaningful while the angle
  // threshold stays below pi/2; callers validate before use.
  bool valid() const {
    return rho > 0 && kappa > 1 &&
           kappa / (kappa - 1.0) * rho <
               3.141592653589793 * 3.141592653589793 / 8.0;
  }
};

class WindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lattice animal of a polyline: all grid points whose closed square meets
// the polyline (exact segment-vs-square tests). Sorted by (x, y).
std::vector<Pixel> extract_animal(const std::vector<Point>& polyline,
                                  const GridSpec& grid = {});
std::vector<Pixel> extract_animal(const Instance& inst, const PathResult& path,
                                  const GridSpec& grid = {});

std::vector<Point> path_polyline(const Instance& inst, const PathResult& path);

// size <= (3*sqrt(2)/2) * length + 1 for the unit green grid.
struct AnimalBound {
  std::size_t size = 0;
  double bound = 0;
  bool ok = false;
};
AnimalBound check_animal_bound(const std::vector<Point>& polyline);

// True iff every Delaunay triangle meeting C^eps(v) has its circumdisk
// inside C_2(v), and v is at distance >= 2 from both s and t.
bool independence_event(const Instance& inst, Pixel v, double eps);

// True iff some Delaunay-edge path crosses the vertical unit column of v,
// touches C(v), and has clipped length strictly below 1 + rho. The search
// is restricted to the neighborhood C_2(v), which is exact for rho < 0.1.
bool strong_horizontality(const Instance& inst, Pixel v, double rho);

struct HorizontalityWitness {
  bool holds = false;
  double length = 0;
  std::vector<Point> polyline;  // clipped: entry point, vertices, exit point
};
HorizontalityWitness strong_horizontality_witness(const Instance& inst,
                                                  Pixel v, double rho);

// Total horizontal projection of Delaunay edges meeting C^eps(v) whose
// folded angle against the x-axis is at most alpha.
double weak_horizontality_length(const Instance& inst, Pixel v, double eps,
                                 double alpha);

// For a pixel where strong horizontality holds: the witness path stays in
// C^eps_rho(v) and the weak horizontal mass reaches 1/kappa. Vacuously true
// when strong horizontality does not hold.
bool strong_implies_weak_check(const Instance& inst, Pixel v,
                               const PixelParams& params);

// Length-vs-animal inequality for an s-t path with integer k:
// lhs = length, rhs = k + rho*(k - 4*max_color #horizontal(animal_color)).
struct LengthAnimalResult {
  double lhs = 0;
  double rhs = 0;
  bool ok = false;
  std::array<std::size_t, 4> h_counts{};  // per color, kAllColors order
};
LengthAnimalResult length_animal_check(const Instance& inst, double rho,
                                       const PathResult& path);

}  // namespace pds
