#include "pds/geom.hpp"

#include <atomic>
#include <cmath>
#include <limits>

namespace pds {

namespace {

std::atomic<bool> g_force_exact{false};

// Error-free transformations. Each returns the rounded result and the exact
// roundoff term, so (hi + lo) == a op b exactly.
inline void two_sum(double a, double b, double& hi, double& lo) {
  hi = a + b;
  double bv = hi - a;
  double av = hi - bv;
  lo = (a - av) + (b - bv);
}

inline void two_prod(double a, double b, double& hi, double& lo) {
  hi = a * b;
  lo = std::fma(a, b, -hi);
}

// Expansions: nonoverlapping sums of doubles ordered by increasing
// magnitude. The empty expansion represents zero.
using Expansion = std::vector<double>;

Expansion grow(const Expansion& e, double b) {
  Expansion h;
  h.reserve(e.size() + 1);
  double q = b;
  for (double ei : e) {
    double hi, lo;
    two_sum(q, ei, hi, lo);
    q = hi;
    if (lo != 0.0) h.push_back(lo);
  }
  if (q != 0.0 || h.empty()) h.push_back(q);
  return h;
}

Expansion add(const Expansion& e, const Expansion& f) {
  Expansion h = e;
  for (double fi : f) h = grow(h, fi);
  return h;
}

Expansion scale(const Expansion& e, double b) {
  Expansion h;
  for (double ei : e) {
    double hi, lo;
    two_prod(ei, b, hi, lo);
    h = grow(h, lo);
    h = grow(h, hi);
  }
  return h;
}

Expansion negate(Expansion e) {
  for (double& c : e) c = -c;
  return e;
}

int sign_of(const Expansion& e) {
  for (auto it = e.rbegin(); it != e.rend(); ++it) {
    if (*it > 0.0) return 1;
    if (*it < 0.0) return -1;
  }
  return 0;
}

Expansion prod2(double a, double b) {
  double hi, lo;
  two_prod(a, b, hi, lo);
  Expansion e;
  if (lo != 0.0) e.push_back(lo);
  if (hi != 0.0) e.push_back(hi);
  return e;
}

// Exact 3x3 determinant |x_p y_p 1; x_q y_q 1; x_r y_r 1| as an expansion.
Expansion orient_det(const Point& p, const Point& q, const Point& r) {
  Expansion d = prod2(p.x, q.y);
  d = add(d, negate(prod2(p.x, r.y)));
  d = add(d, negate(prod2(p.y, q.x)));
  d = add(d, add(prod2(p.y, r.x), add(prod2(q.x, r.y), negate(prod2(q.y, r.x)))));
  return d;
}

Expansion lift(const Point& p) {
  return add(prod2(p.x, p.x), prod2(p.y, p.y));
}

Expansion mul(const Expansion& e, const Expansion& f) {
  Expansion h;
  for (double fi : f) h = add(h, scale(e, fi));
  return h;
}

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;
constexpr double kCcwErrBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncErrBound = (10.0 + 96.0 * kEps) * kEps;

}  // namespace

void set_force_exact_predicates(bool on) { g_force_exact.store(on, std::memory_order_relaxed); }
bool force_exact_predicates() { return g_force_exact.load(std::memory_order_relaxed); }

namespace detail {

int orient2d_exact(const Point& a, const Point& b, const Point& c) {
  return sign_of(orient_det(a, b, c));
}

int incircle_exact(const Point& a, const Point& b, const Point& c,
                   const Point& d) {
  // Sign of the 4x4 lifted determinant, expanded along the lift column:
  //   +La*D(b,c,d) - Lb*D(a,c,d) + Lc*D(a,b,d) - Ld*D(a,b,c)
  Expansion det = mul(lift(a), orient_det(b, c, d));
  det = add(det, negate(mul(lift(b), orient_det(a, c, d))));
  det = add(det, mul(lift(c), orient_det(a, b, d)));
  det = add(det, negate(mul(lift(d), orient_det(a, b, c))));
  return sign_of(det);
}

int incircle_assume_ccw(const Point& a, const Point& b, const Point& c,
                        const Point& d) {
  double adx = a.x - d.x, ady = a.y - d.y;
  double bdx = b.x - d.x, bdy = b.y - d.y;
  double cdx = c.x - d.x, cdy = c.y - d.y;

  double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  double cdxady = cdx * ady, adxcdy = adx * cdy;
  double adxbdy = adx * bdy, bdxady = bdx * ady;
  double alift = adx * adx + ady * ady;
  double blift = bdx * bdx + bdy * bdy;
  double clift = cdx * cdx + cdy * cdy;

  double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
               clift * (adxbdy - bdxady);

  if (!force_exact_predicates()) {
    double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                       (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                       (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
    double errbound = kIncErrBound * permanent;
    if (det > errbound) return 1;
    if (det < -errbound) return -1;
  }
  return incircle_exact(a, b, c, d);
}

}  // namespace detail

int orient2d(const Point& a, const Point& b, const Point& c) {
  double detleft = (a.x - c.x) * (b.y - c.y);
  double detright = (a.y - c.y) * (b.x - c.x);
  double det = detleft - detright;

  if (!force_exact_predicates()) {
    double detsum;
    if (detleft > 0.0) {
      if (detright <= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
      detsum = detleft + detright;
    } else if (detleft < 0.0) {
      if (detright >= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
      detsum = -detleft - detright;
    } else {
      return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    }
    double errbound = kCcwErrBound * detsum;
    if (det >= errbound) return 1;
    if (-det >= errbound) return -1;
  }
  return detail::orient2d_exact(a, b, c);
}

int incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  if (orient2d(a, b, c) != 1) {
    throw std::invalid_argument("incircle: a,b,c must be counterclockwise");
  }
  return detail::incircle_assume_ccw(a, b, c, d);
}

Circle circumcircle(const Point& a, const Point& b, const Point& c) {
  if (orient2d(a, b, c) == 0) {
    throw std::invalid_argument("circumcircle: collinear points");
  }
  double bx = b.x - a.x, by = b.y - a.y;
  double cx = c.x - a.x, cy = c.y - a.y;
  double bl = bx * bx + by * by;
  double cl = cx * cx + cy * cy;
  double d = 2.0 * (bx * cy - by * cx);
  double ux = (cy * bl - by * cl) / d;
  double uy = (bx * cl - cx * bl) / d;
  return Circle{{a.x + ux, a.y + uy}, std::hypot(ux, uy)};
}

namespace {

inline bool bbox_overlaps(const Point& p, const Point& q, const Point& r,
                          const Point& s) {
  return std::fmin(p.x, q.x) <= std::fmax(r.x, s.x) &&
         std::fmin(r.x, s.x) <= std::fmax(p.x, q.x) &&
         std::fmin(p.y, q.y) <= std::fmax(r.y, s.y) &&
         std::fmin(r.y, s.y) <= std::fmax(p.y, q.y);
}

}  // namespace

bool segment_crosses_segment(const Segment& s1, const Segment& s2) {
  int d1 = orient2d(s2.a, s2.b, s1.a);
  int d2 = orient2d(s2.a, s2.b, s1.b);
  int d3 = orient2d(s1.a, s1.b, s2.a);
  int d4 = orient2d(s1.a, s1.b, s2.b);
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  // Touching or collinear cases: some orientation vanishes; the closed
  // segments then intersect iff their bounding boxes do.
  if (d1 == 0 || d2 == 0 || d3 == 0 || d4 == 0) {
    return bbox_overlaps(s1.a, s1.b, s2.a, s2.b) &&
           (d1 * d2 <= 0 && d3 * d4 <= 0);
  }
  return false;
}

EdgeAngleHproj edge_angle_and_hproj(const Segment& e) {
  if (e.a == e.b) {
    throw std::invalid_argument("edge_angle_and_hproj: zero-length segment");
  }
  double dx = std::fabs(e.b.x - e.a.x);
  double dy = std::fabs(e.b.y - e.a.y);
  return EdgeAngleHproj{std::atan2(dy, dx), dx};
}

}  // namespace pds
