#pragma once

#include <stdexcept>
#include <vector>

namespace pds {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Segment {
  Point a;
  Point b;
};

struct Circle {
  Point center;
  double radius = 0.0;
};

// Sign of the signed area of triangle (a,b,c): +1 counterclockwise,
// -1 clockwise, 0 collinear. Exact decision; a floating filter handles
// the common case and an expansion-arithmetic fallback the rest.
int orient2d(const Point& a, const Point& b, const Point& c);

// +1 if d lies strictly inside the circumcircle of (a,b,c), 0 on it,
// -1 outside. Requires orient2d(a,b,c) == +1; throws std::invalid_argument
// otherwise. Exact decision.
int incircle(const Point& a, const Point& b, const Point& c, const Point& d);

// Circumcenter and circumradius. Throws std::invalid_argument on collinear
// input. Floating computation, relative accuracy ~1e-12 on the radius.
Circle circumcircle(const Point& a, const Point& b, const Point& c);

// Closed-segment intersection (touching at a point or overlapping counts).
bool segment_crosses_segment(const Segment& s1, const Segment& s2);

struct EdgeAngleHproj {
  double angle = 0.0;  // |angle with the x-axis| folded to [0, pi/2]
  double hproj = 0.0;  // |x_b - x_a|
};

// Throws std::invalid_argument on a zero-length segment.
EdgeAngleHproj edge_angle_and_hproj(const Segment& e);

// When set, orient2d/incircle skip the floating filter and always take the
// exact fallback. Testing hook; not thread safe against concurrent predicate
// calls that race with the toggle itself.
void set_force_exact_predicates(bool on);
bool force_exact_predicates();

namespace detail {

// incircle without the orientation precondition check; callers guarantee
// (a,b,c) counterclockwise.
int incircle_assume_ccw(const Point& a, const Point& b, const Point& c,
                        const Point& d);

// Exact-fallback entry points, exposed so tests can compare the filtered
// and exact paths on identical inputs.
int orient2d_exact(const Point& a, const Point& b, const Point& c);
int incircle_exact(const Point& a, const Point& b, const Point& c,
                   const Point& d);

}  // namespace detail

}  // namespace pds
