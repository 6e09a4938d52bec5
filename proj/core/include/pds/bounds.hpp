#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pds {

// Bound on the probability that a pixel fails the independence event or
// admits a near-horizontal crossing, as a function of the horizontality
// slack rho and the intensity n.
double eval_P(double rho, double n);      // requires rho in (0, 4e-6), n > 0
double eval_P_raw(double rho, double n);  // same formula, no domain gate

// rho * (1 - 16 sqrt(P(rho, n))), clamped at zero once the root term
// reaches 1. Evaluates the ungated formula so callers can probe the
// feasibility boundary.
double lower_bound_objective(double rho, double n);

struct SearchPoint {
  double rho = 0;
  double n = 0;
  double p = 0;      // P(rho, n)
  double value = 0;  // objective at (rho, n)
};

struct SearchResult {
  SearchPoint best;
  SearchPoint reference;  // fixed comparison point (1.25e-10, 153)
};

// Maximizes the objective over a log grid in rho and integer n, keeping
// only candidates with P < 0.01. The reference point joins the candidate
// set when it lies inside the ranges, so best.value never falls below it.
// Throws std::runtime_error when no candidate is feasible.
SearchResult objective_and_search(double rho_lo = 1e-12, double rho_hi = 4e-6,
                                  std::size_t rho_steps = 161, int n_lo = 50,
                                  int n_hi = 500);

// Closed form of int_lower^inf exp(-n pi r^2) r^j dr.
// Supported: j in {4, 5, 6, 8, 10, 12} with lower = 0, and (j, lower) = (5, 1).
double gaussian_moment(int j, double n, double lower);

struct IntegralCheck {
  std::string id;
  double estimate = 0;
  double closed_form = 0;
  double rel_err = 0;
  bool pass = false;
};

// Recomputes every closed-form integral numerically: adaptive quadrature
// for the radial moments (gated at 1e-9), Monte Carlo plus a fixed-order
// Gauss-Legendre cross check for the angular integrals (both gated at
// `tolerance`). `samples` drives the Monte Carlo estimates; results are
// deterministic for a given sample count.
std::vector<IntegralCheck> verify_integrals(std::uint64_t samples,
                                            double tolerance = 1e-2);

struct NamedConstant {
  std::string name;
  double value = 0;
};

const std::vector<NamedConstant>& constants();

// Smallest lambda in [1.6/sqrt(p), 2/sqrt(p)] congruent to 2 mod 4, if any.
std::optional<std::int64_t> percolation_scale_witness(double p);

// Tail expression 4 e^10 exp(-(x - 3.98) k sqrt(p)).
double percolation_tail_bound(double x, double k, double p);

}  // namespace pds
