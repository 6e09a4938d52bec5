#include "pds/sampling.hpp"

#include <cmath>
#include <random>

namespace pds {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inversion by multiplication of uniforms; cost grows linearly in lambda.
std::uint64_t poisson_small(double lambda, std::mt19937_64& rng) {
  const double limit = std::exp(-lambda);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform01(rng);
  } while (p > limit);
  return k - 1;
}

// Hoermann's transformed rejection (PTRS), valid for lambda >= 10; constant
// expected number of uniforms per draw.
std::uint64_t poisson_ptrs(double lambda, std::mt19937_64& rng) {
  const double b = 0.931 + 2.53 * std::sqrt(lambda);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_lambda = std::log(lambda);
  for (;;) {
    double u = uniform01(rng) - 0.5;
    double v = uniform01(rng);
    double us = 0.5 - std::abs(u);
    double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    double rhs = kf * log_lambda - lambda - std::lgamma(kf + 1.0);
    if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
  }
}

std::uint64_t poisson_draw(double lambda, std::mt19937_64& rng) {
  return lambda < 30.0 ? poisson_small(lambda, rng)
                       : poisson_ptrs(lambda, rng);
}

}  // namespace

double MarginPolicy::delta(double intensity) const {
  if (override_delta >= 0.0) return override_delta;
  constexpr double kPi = 3.141592653589793238462643383279502884;
  return std::sqrt(12.0 * std::log(10.0) / (kPi * intensity));
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t counter) {
  std::uint64_t z = master + (counter + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<Point> sample_ppp(double intensity, const Window& window,
                              std::uint64_t seed) {
  if (!(intensity > 0.0)) throw SampleError("intensity must be positive");
  std::mt19937_64 rng(seed);
  std::uint64_t count = poisson_draw(intensity * window.area(), rng);
  std::vector<Point> pts(count);
  for (auto& p : pts) {
    p.x = window.xmin + uniform01(rng) * window.width();
    p.y = window.ymin + uniform01(rng) * window.height();
  }
  return pts;
}

Instance make_instance(double intensity, double k, MarginPolicy margin,
                       std::uint64_t seed) {
  if (!(intensity > 0.0)) throw SampleError("intensity must be positive");
  if (!(k > 0.0)) throw SampleError("k must be positive");
  const double d = margin.delta(intensity);
  Window w{-d, k + d, -(0.87 * k + d), 0.87 * k + d};

  for (int attempt = 0; attempt < 8; ++attempt) {
    std::uint64_t sub =
        attempt == 0 ? seed : mix_seed(seed, 0x7265736d70ull + attempt);
    std::vector<Point> pts = sample_ppp(intensity, w, sub);
    auto s_id = static_cast<VertexId>(pts.size());
    auto t_id = static_cast<VertexId>(pts.size() + 1);
    pts.push_back({0.0, 0.0});
    pts.push_back({k, 0.0});

    Instance inst;
    try {
      inst.mesh = build(pts);
    } catch (const BuildError&) {
      continue;  // too few points, collinear, or a duplicate of s/t
    }
    if (inst.mesh.on_hull(s_id) || inst.mesh.on_hull(t_id)) continue;
    inst.s_id = s_id;
    inst.t_id = t_id;
    inst.intensity = intensity;
    inst.k = k;
    inst.seed = seed;
    inst.window = w;
    return inst;
  }
  throw SampleError("degenerate sample: no usable draw in 8 attempts");
}

}  // namespace pds
