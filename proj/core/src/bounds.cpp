#include "pds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>

namespace pds {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double first_two_terms(double n) {
  return 95.0 * n * n * n * std::exp(-0.194 * n) +
         (19.0 * n * n + 13.0 * n + 4.0) * std::exp(-n * kPi);
}

double third_term(double rho, double n) {
  const double base = 0.75 + std::sqrt(rho) * std::sqrt(rho + 2.0) / 2.0;
  return 31.76 * base * base * std::sqrt(rho * n);
}

}  // namespace

double eval_P_raw(double rho, double n) {
  if (!(rho >= 0) || !std::isfinite(rho) || !(n > 0) || !std::isfinite(n))
    throw std::domain_error("eval_P_raw: need rho >= 0 and n > 0");
  return first_two_terms(n) + third_term(rho, n);
}

double eval_P(double rho, double n) {
  if (!(rho > 0) || !(rho < 4e-6))
    throw std::domain_error("eval_P: rho outside (0, 4e-6)");
  if (!(n > 0) || !std::isfinite(n))
    throw std::domain_error("eval_P: need n > 0");
  return eval_P_raw(rho, n);
}

double lower_bound_objective(double rho, double n) {
  const double factor = 1.0 - 16.0 * std::sqrt(eval_P_raw(rho, n));
  return factor > 0 ? rho * factor : 0.0;
}

SearchResult objective_and_search(double rho_lo, double rho_hi,
                                  std::size_t rho_steps, int n_lo, int n_hi) {
  if (!(rho_lo > 0) || !(rho_hi >= rho_lo) || rho_steps < 2 || n_lo < 1 ||
      n_hi < n_lo)
    throw std::invalid_argument("objective_and_search: bad search ranges");

  SearchResult res;
  res.reference.rho = 1.25e-10;
  res.reference.n = 153.0;
  res.reference.p = eval_P_raw(res.reference.rho, res.reference.n);
  res.reference.value =
      lower_bound_objective(res.reference.rho, res.reference.n);

  bool found = false;
  auto consider = [&](double rho, double n) {
    const double p = eval_P_raw(rho, n);
    if (!(p < 0.01)) return;
    const double value = lower_bound_objective(rho, n);
    if (!found || value > res.best.value) {
      res.best = SearchPoint{rho, n, p, value};
      found = true;
    }
  };
  const double step = std::log(rho_hi / rho_lo) / double(rho_steps - 1);
  for (int n = n_lo; n <= n_hi; ++n)
    for (std::size_t i = 0; i < rho_steps; ++i)
      consider(rho_lo * std::exp(step * double(i)), double(n));
  if (res.reference.rho >= rho_lo && res.reference.rho <= rho_hi &&
      res.reference.n >= double(n_lo) && res.reference.n <= double(n_hi))
    consider(res.reference.rho, res.reference.n);
  if (!found)
    throw std::runtime_error("objective_and_search: empty feasible set");
  return res;
}

double gaussian_moment(int j, double n, double lower) {
  if (!(n > 0) || !std::isfinite(n))
    throw std::domain_error("gaussian_moment: need n > 0");
  const double a = n * kPi;
  if (lower == 1.0) {
    if (j != 5)
      throw std::invalid_argument(
          "gaussian_moment: lower limit 1 supported only for j = 5");
    return std::exp(-a) * (1.0 / (2.0 * a) + 1.0 / (a * a) + 1.0 / (a * a * a));
  }
  if (lower != 0.0)
    throw std::invalid_argument("gaussian_moment: lower must be 0 or 1");
  const double rn = std::sqrt(n);
  switch (j) {
    case 4:
      return 3.0 / (8.0 * kPi * kPi * n * n * rn);
    case 5:
      return 1.0 / (kPi * kPi * kPi * n * n * n);
    case 6:
      return 15.0 / (16.0 * kPi * kPi * kPi * n * n * n * rn);
    case 8:
      return 105.0 / (32.0 * std::pow(kPi, 4) * std::pow(n, 4) * rn);
    case 10:
      return 945.0 / (64.0 * std::pow(kPi, 5) * std::pow(n, 5) * rn);
    case 12:
      return 10395.0 / (128.0 * std::pow(kPi, 6) * std::pow(n, 6) * rn);
    default:
      throw std::invalid_argument("gaussian_moment: unsupported exponent");
  }
}

namespace {

// Twice the signed area of the triangle inscribed in the unit circle at
// angles b1, b2, b3; nonnegative when the angles are increasing.
double det3(double b1, double b2, double b3) {
  return std::sin(b3 - b2) - std::sin(b3 - b1) + std::sin(b2 - b1);
}

double projection_closed_form(double alpha) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  return 64.0 / 9.0 * c * c * c * s + 32.0 / 3.0 * c * s +
         32.0 / 3.0 * alpha;
}

double relative_error(double estimate, double closed) {
  const double scale = std::max(std::abs(closed), 1e-300);
  return std::abs(estimate - closed) / scale;
}

double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

// Numeric value of int_lower^inf exp(-a r^2) r^j dr. Evaluated in log
// space so the tail never produces 0 * inf.
double radial_moment_quadrature(int j, double a, double lower) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [=](double u) {
    const double r = lower + u;
    if (r <= 0) return 0.0;
    return std::exp(double(j) * std::log(r) - a * r * r);
  };
  return integrator.integrate(f, 1e-12);
}

using Gauss = boost::math::quadrature::gauss<double, 30>;

// |det3| over the full angle cube, via the ordered form where the
// determinant keeps one sign.
double area_cube_quadrature() {
  auto outer = [&](double u3) {
    const double b3 = 2.0 * kPi * u3;
    auto mid = [&](double u2) {
      const double b2 = b3 * u2;
      auto inner = [&](double u1) { return det3(b2 * u1, b2, b3); };
      return Gauss::integrate(inner, 0.0, 1.0) * b2;
    };
    return Gauss::integrate(mid, 0.0, 1.0) * b3;
  };
  return 6.0 * 2.0 * kPi * Gauss::integrate(outer, 0.0, 1.0);
}

// Domain with two angles on the upper arc and one on the lower arc,
// parametrized by the half-gap phi (the height is sin(phi)).
double area_band_quadrature() {
  auto fphi = [&](double phi) {
    auto f3 = [&](double b3) {
      auto f2 = [&](double b2) {
        auto f1 = [&](double u1) {
          const double b1 = -phi + (b2 + phi) * u1;
          return det3(b1, b2, b3);
        };
        return Gauss::integrate(f1, 0.0, 1.0) * (b2 + phi);
      };
      return Gauss::integrate(f2, -phi, kPi + phi);
    };
    return std::cos(phi) * Gauss::integrate(f3, kPi + phi, 2.0 * kPi - phi);
  };
  return 2.0 * Gauss::integrate(fphi, -kPi / 2.0, kPi / 2.0);
}

// Same domain weighted by the chord length between the two upper angles.
double area_chord_quadrature() {
  auto fphi = [&](double phi) {
    auto f3 = [&](double b3) {
      auto f2 = [&](double b2) {
        auto f1 = [&](double u1) {
          const double b1 = -phi + (b2 + phi) * u1;
          return det3(b1, b2, b3) * 2.0 * std::sin((b2 - b1) / 2.0);
        };
        return Gauss::integrate(f1, 0.0, 1.0) * (b2 + phi);
      };
      return Gauss::integrate(f2, -phi, kPi + phi);
    };
    return std::cos(phi) * Gauss::integrate(f3, kPi + phi, 2.0 * kPi - phi);
  };
  return Gauss::integrate(fphi, -kPi / 2.0, kPi / 2.0);
}

double projection_quadrature(double alpha) {
  auto f3 = [&](double b3) {
    auto f2 = [&](double b2) {
      auto f1 = [&](double b1) {
        return det3(b1, b2, b3) * (std::cos(b1) - std::cos(b2));
      };
      return Gauss::integrate(f1, kPi - b2 - 2.0 * alpha,
                              kPi - b2 + 2.0 * alpha);
    };
    return Gauss::integrate(f2, kPi - b3, kPi / 2.0);
  };
  return Gauss::integrate(f3, kPi / 2.0, 3.0 * kPi / 2.0);
}

}  // namespace

std::vector<IntegralCheck> verify_integrals(std::uint64_t samples,
                                            double tolerance) {
  if (samples == 0) throw std::invalid_argument("verify_integrals: samples");
  if (!(tolerance > 0))
    throw std::invalid_argument("verify_integrals: tolerance");
  std::vector<IntegralCheck> report;
  auto push = [&](std::string id, double estimate, double closed,
                  double gate) {
    IntegralCheck row;
    row.id = std::move(id);
    row.estimate = estimate;
    row.closed_form = closed;
    row.rel_err = relative_error(estimate, closed);
    row.pass = row.rel_err <= gate;
    report.push_back(std::move(row));
  };

  const int moments[6] = {4, 5, 6, 8, 10, 12};
  const double intensities[4] = {1.0, 10.0, 153.0, 1e4};
  for (double n : intensities) {
    for (int j : moments) {
      push("radial_moment_j" + std::to_string(j) + "_n" +
               std::to_string(int(n)),
           radial_moment_quadrature(j, n * kPi, 0.0), gaussian_moment(j, n, 0),
           1e-9);
    }
    push("radial_moment_j5_tail_n" + std::to_string(int(n)),
         radial_moment_quadrature(5, n * kPi, 1.0), gaussian_moment(5, n, 1),
         1e-9);
  }

  std::mt19937_64 rng(0x5851f42d4c957f2dULL);
  const double n_samples = double(samples);

  {
    double acc = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
      const double b1 = 2.0 * kPi * uniform01(rng);
      const double b2 = 2.0 * kPi * uniform01(rng);
      const double b3 = 2.0 * kPi * uniform01(rng);
      acc += std::abs(det3(b1, b2, b3));
    }
    const double vol = std::pow(2.0 * kPi, 3);
    push("inscribed_area_full_mc", acc / n_samples * vol,
         24.0 * kPi * kPi, tolerance);
    push("inscribed_area_full_quad", area_cube_quadrature(), 24.0 * kPi * kPi,
         tolerance);
  }

  {
    double acc_plain = 0, acc_chord = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
      const double phi = kPi * (uniform01(rng) - 0.5);
      const double w12 = kPi + 2.0 * phi;
      const double w3 = kPi - 2.0 * phi;
      const double x = -phi + w12 * uniform01(rng);
      const double y = -phi + w12 * uniform01(rng);
      const double b3 = kPi + phi + w3 * uniform01(rng);
      const double lo = std::min(x, y), hi = std::max(x, y);
      const double weight = std::cos(phi) * w12 * w12 * w3;
      acc_plain += weight * std::abs(det3(x, y, b3));
      acc_chord +=
          weight * det3(lo, hi, b3) * 2.0 * std::sin((hi - lo) / 2.0) * 0.5;
    }
    push("inscribed_area_band_mc", kPi * acc_plain / n_samples, 512.0 / 9.0,
         tolerance);
    push("inscribed_area_band_quad", area_band_quadrature(), 512.0 / 9.0,
         tolerance);
    push("inscribed_area_chord_mc", kPi * acc_chord / n_samples,
         35.0 * kPi / 3.0, tolerance);
    push("inscribed_area_chord_quad", area_chord_quadrature(),
         35.0 * kPi / 3.0, tolerance);
  }

  const double alphas[3] = {0.01, 0.1, kPi / 8.0};
  for (int idx = 0; idx < 3; ++idx) {
    const double alpha = alphas[idx];
    double acc = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
      const double b3 = kPi / 2.0 + kPi * uniform01(rng);
      const double w2 = b3 - kPi / 2.0;
      const double b2 = (kPi - b3) + w2 * uniform01(rng);
      const double b1 = kPi - b2 - 2.0 * alpha + 4.0 * alpha * uniform01(rng);
      acc += det3(b1, b2, b3) * (std::cos(b1) - std::cos(b2)) * kPi * w2 *
             4.0 * alpha;
    }
    const std::string suffix = "_a" + std::to_string(idx + 1);
    push("projection_band_mc" + suffix, acc / n_samples,
         projection_closed_form(alpha), tolerance);
    push("projection_band_quad" + suffix, projection_quadrature(alpha),
         projection_closed_form(alpha), tolerance);
  }

  return report;
}

const std::vector<NamedConstant>& constants() {
  static const std::vector<NamedConstant> table = {
      {"straight_walk_triangle_rate", 64.0 / (3.0 * kPi * kPi)},
      {"upper_path_length_rate", 35.0 / (3.0 * kPi * kPi)},
      {"stretch_upper_bound", 1.998},
      {"stretch_lower_construction", 1.5932},
      {"circular_stretch_limit", kPi / 2.0},
      {"animal_size_per_length", 3.0 * std::sqrt(2.0) / 2.0},
      {"shortest_path_animal_budget", 4.24},
      {"animal_budget_whp", 2.55},
      {"stretch_excess", 2.47e-11},
      {"mean_stretch_upper", 4.0 / kPi},
      {"origin_star_length_rate", 6.8},
      {"upper_tail_threshold", 1.2},
  };
  return table;
}

std::optional<std::int64_t> percolation_scale_witness(double p) {
  if (!(p > 0) || !std::isfinite(p))
    throw std::domain_error("percolation_scale_witness: need p > 0");
  const double lo = 1.6 / std::sqrt(p);
  const double hi = 2.0 / std::sqrt(p);
  const auto q = std::int64_t(std::ceil((lo - 2.0) / 4.0));
  const std::int64_t lambda = 4 * q + 2;
  if (double(lambda) <= hi) return lambda;
  return std::nullopt;
}

double percolation_tail_bound(double x, double k, double p) {
  if (!(p >= 0) || !std::isfinite(x) || !std::isfinite(k))
    throw std::domain_error("percolation_tail_bound: need p >= 0");
  return 4.0 * std::exp(10.0) * std::exp(-(x - 3.98) * k * std::sqrt(p));
}

}  // namespace pds
