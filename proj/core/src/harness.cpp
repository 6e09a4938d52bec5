#include "pds/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "pds/delaunay.hpp"
#include "pds/geom.hpp"

namespace pds {

std::string_view path_tag(PathKind kind) {
  switch (kind) {
    case PathKind::kStraightWalk: return "sw";
    case PathKind::kUpperPath: return "up";
    case PathKind::kGreedyPath: return "gp";
    default: return "sp";
  }
}

std::optional<PathKind> parse_path_tag(std::string_view tag) {
  if (tag == "sw") return PathKind::kStraightWalk;
  if (tag == "up") return PathKind::kUpperPath;
  if (tag == "gp") return PathKind::kGreedyPath;
  if (tag == "sp") return PathKind::kShortestPath;
  return std::nullopt;
}

double pairwise_sum(const double* data, std::size_t count) {
  if (count <= 32) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

StatSummary summarize(const std::vector<double>& values) {
  StatSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  s.mean = pairwise_sum(values.data(), values.size()) / double(values.size());
  if (values.size() == 1) {
    s.std_dev = 0.0;
    s.se = 0.0;
    return s;
  }
  std::vector<double> dev2(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - s.mean;
    dev2[i] = d * d;
  }
  const double ssd = pairwise_sum(dev2.data(), dev2.size());
  s.std_dev = std::sqrt(ssd / double(values.size() - 1));
  s.se = s.std_dev / std::sqrt(double(values.size()));
  return s;
}

std::size_t worker_count(std::size_t trials) {
  std::size_t w = std::thread::hardware_concurrency();
  if (w == 0) w = 1;
  if (const char* env = std::getenv("PDS_STRETCH_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      w = std::min<std::size_t>(w, v);
  }
  return std::max<std::size_t>(1, std::min(w, trials));
}

void run_trials(std::size_t trials,
                const std::function<void(std::size_t)>& body) {
  if (trials == 0) return;
  const std::size_t workers = worker_count(trials);
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= trials) return;
      try {
        body(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  for (std::size_t t = 0; t < trials; ++t)
    if (errors[t]) std::rethrow_exception(errors[t]);
}

namespace {

void validate_base(const ExperimentConfig& cfg) {
  if (!(cfg.intensity > 0))
    throw std::invalid_argument("harness: intensity must be positive");
  if (!(cfg.k > 0)) throw std::invalid_argument("harness: k must be positive");
  if (cfg.trials < 1)
    throw std::invalid_argument("harness: trials must be >= 1");
}

[[noreturn]] void rethrow_with_trial(std::size_t trial, std::uint64_t seed,
                                     const std::exception& e) {
  throw std::runtime_error("trial " + std::to_string(trial) + " (seed " +
                           std::to_string(seed) + "): " + e.what());
}

}  // namespace

std::vector<PathStats> run_path_experiment(const ExperimentConfig& cfg) {
  validate_base(cfg);
  if (cfg.paths.empty())
    throw std::invalid_argument("harness: no paths requested");
  for (std::size_t i = 0; i < cfg.paths.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.paths.size(); ++j)
      if (cfg.paths[i] == cfg.paths[j])
        throw std::invalid_argument("harness: duplicate path requested");

  const std::size_t np = cfg.paths.size();
  std::vector<std::vector<double>> lengths(np), sizes(np);
  for (auto& v : lengths) v.assign(cfg.trials, 0.0);
  for (auto& v : sizes) v.assign(cfg.trials, 0.0);
  const double rn = std::sqrt(cfg.intensity);

  run_trials(cfg.trials, [&](std::size_t t) {
    const std::uint64_t sub = mix_seed(cfg.master_seed, t);
    try {
      const Instance inst =
          make_instance(cfg.intensity, cfg.k, cfg.margin, sub);
      for (std::size_t p = 0; p < np; ++p) {
        switch (cfg.paths[p]) {
          case PathKind::kStraightWalk: {
            const WalkResult w = straight_walk(inst);
            sizes[p][t] = double(w.triangles.size()) / rn;
            break;
          }
          case PathKind::kUpperPath: {
            const PathResult r = upper_path(inst);
            lengths[p][t] = r.length;
            sizes[p][t] = double(r.size) / rn;
            break;
          }
          case PathKind::kGreedyPath: {
            const PathResult r = greedy_path(inst);
            lengths[p][t] = r.length;
            sizes[p][t] = double(r.size) / rn;
            break;
          }
          default: {
            const PathResult r = shortest_path(inst, true);
            lengths[p][t] = r.length;
            sizes[p][t] = double(r.size) / rn;
            break;
          }
        }
      }
    } catch (const std::exception& e) {
      rethrow_with_trial(t, sub, e);
    }
  });

  std::vector<PathStats> out(np);
  for (std::size_t p = 0; p < np; ++p) {
    out[p].path = cfg.paths[p];
    if (cfg.paths[p] != PathKind::kStraightWalk)
      out[p].length = summarize(lengths[p]);
    out[p].size_over_sqrt_n = summarize(sizes[p]);
  }
  return out;
}

namespace {

// Window radius 2*delta: a triangle whose circumdisk reaches the origin
// keeps its vertices within twice the empty-disk radius, and the disk tail
// at delta is already 1e-12.
Window origin_window(double intensity) {
  const double r = 2.0 * MarginPolicy{}.delta(intensity);
  return Window{-r, r, -r, r};
}

Mesh build_origin_mesh(double intensity, std::uint64_t seed,
                       bool insert_origin, VertexId* origin_id) {
  const Window w = origin_window(intensity);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const std::uint64_t sub =
        attempt == 0 ? seed : mix_seed(seed, 0x6f726967696eull + attempt);
    std::vector<Point> pts = sample_ppp(intensity, w, sub);
    if (insert_origin) pts.push_back({0.0, 0.0});
    try {
      Mesh mesh = build(pts);
      if (origin_id) *origin_id = VertexId(pts.size() - 1);
      return mesh;
    } catch (const BuildError&) {
    }
  }
  throw SampleError("degenerate sample: no usable draw in 8 attempts");
}

}  // namespace

StatSummary estimate_N0(double intensity, std::size_t trials,
                        std::uint64_t seed) {
  if (!(intensity > 0))
    throw std::invalid_argument("harness: intensity must be positive");
  if (trials < 1) throw std::invalid_argument("harness: trials must be >= 1");
  std::vector<double> counts(trials, 0.0);
  run_trials(trials, [&](std::size_t t) {
    const std::uint64_t sub = mix_seed(seed, t);
    try {
      const Mesh mesh = build_origin_mesh(intensity, sub, false, nullptr);
      const Point origin{0.0, 0.0};
      double c = 0.0;
      for (TriId i = 0; i < TriId(mesh.triangle_count()); ++i) {
        const auto& tri = mesh.triangle(i);
        if (incircle(mesh.vertex(tri[0]), mesh.vertex(tri[1]),
                     mesh.vertex(tri[2]), origin) > 0)
          c += 1.0;
      }
      counts[t] = c;
    } catch (const std::exception& e) {
      rethrow_with_trial(t, sub, e);
    }
  });
  return summarize(counts);
}

L0Estimate estimate_L0(double intensity, std::size_t trials,
                       std::uint64_t seed) {
  if (!(intensity > 0))
    throw std::invalid_argument("harness: intensity must be positive");
  if (trials < 1) throw std::invalid_argument("harness: trials must be >= 1");
  std::vector<double> sums(trials, 0.0);
  run_trials(trials, [&](std::size_t t) {
    const std::uint64_t sub = mix_seed(seed, t);
    try {
      VertexId oid = 0;
      const Mesh mesh = build_origin_mesh(intensity, sub, true, &oid);
      std::vector<VertexId> nb;
      for (const auto& tri : mesh.triangles())
        for (int e = 0; e < 3; ++e)
          if (tri[e] == oid) {
            nb.push_back(tri[(e + 1) % 3]);
            nb.push_back(tri[(e + 2) % 3]);
          }
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
      const Point& o = mesh.vertex(oid);
      double total = 0.0;
      for (VertexId v : nb)
        total += std::hypot(mesh.vertex(v).x - o.x, mesh.vertex(v).y - o.y);
      sums[t] = total;
    } catch (const std::exception& e) {
      rethrow_with_trial(t, sub, e);
    }
  });
  L0Estimate est;
  est.raw = summarize(sums);
  const double rn = std::sqrt(intensity);
  est.scaled = est.raw;
  est.scaled.mean *= rn;
  est.scaled.std_dev *= rn;
  est.scaled.se *= rn;
  return est;
}

VarianceStudy variance_scaling_study(const std::vector<double>& intensities,
                                     std::size_t trials, double k,
                                     std::uint64_t seed) {
  if (intensities.size() < 2)
    throw std::invalid_argument("variance study needs >= 2 intensities");
  for (double n : intensities)
    if (!(n > 0))
      throw std::invalid_argument("variance study: intensity must be positive");
  if (trials < 2)
    throw std::invalid_argument("variance study needs >= 2 trials");
  if (!(k > 0)) throw std::invalid_argument("variance study: k must be positive");

  std::vector<double> ns = intensities;
  std::sort(ns.begin(), ns.end());
  if (std::adjacent_find(ns.begin(), ns.end()) != ns.end())
    throw std::invalid_argument("variance study: duplicate intensity");

  VarianceStudy study;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::vector<double> lengths(trials, 0.0);
    const std::uint64_t master = mix_seed(seed, 0x766172ull + i);
    run_trials(trials, [&](std::size_t t) {
      const std::uint64_t sub = mix_seed(master, t);
      try {
        const Instance inst = make_instance(ns[i], k, MarginPolicy{}, sub);
        lengths[t] = upper_path(inst).length;
      } catch (const std::exception& e) {
        rethrow_with_trial(t, sub, e);
      }
    });
    const StatSummary s = summarize(lengths);
    VarianceRow row;
    row.intensity = ns[i];
    row.trials = trials;
    row.var_length = s.std_dev * s.std_dev;
    row.var_times_sqrt_n = row.var_length * std::sqrt(ns[i]);
    std::size_t over = 0;
    for (double len : lengths)
      if (len > 1.2 * k) ++over;
    row.tail_fraction = double(over) / double(trials);
    study.rows.push_back(row);
  }

  study.variance_decreasing = true;
  for (std::size_t i = 1; i < study.rows.size(); ++i)
    if (!(study.rows[i].var_length < study.rows[i - 1].var_length))
      study.variance_decreasing = false;

  study.ratio_within_factor_3 = true;
  const double log3 = std::log(3.0);
  for (std::size_t i = 0; i < study.rows.size(); ++i)
    for (std::size_t j = i + 1; j < study.rows.size(); ++j) {
      const double ri = study.rows[i].var_times_sqrt_n;
      const double rj = study.rows[j].var_times_sqrt_n;
      if (!(ri > 0) || !(rj > 0)) {
        study.ratio_within_factor_3 = false;
        continue;
      }
      const double allowance =
          log3 * std::max(1.0, std::log10(study.rows[j].intensity /
                                          study.rows[i].intensity));
      if (std::abs(std::log(ri / rj)) > allowance)
        study.ratio_within_factor_3 = false;
    }
  return study;
}

std::vector<CheckRow> theorem_checks(const ExperimentConfig& cfg) {
  validate_base(cfg);
  if (cfg.k != std::floor(cfg.k))
    throw std::invalid_argument("theorem checks need integer k");
  if (!(cfg.rho >= 0))
    throw std::invalid_argument("theorem checks: rho must be nonnegative");
  const PixelParams params{cfg.rho, cfg.kappa};
  const bool scan_pixels = cfg.rho > 0;
  if (scan_pixels && !params.valid())
    throw std::invalid_argument("theorem checks: invalid pixel parameters");

  constexpr std::size_t kChecks = 12;
  static const char* const kNames[kChecks] = {
      "animal_bound_sp",      "animal_bound_gp",
      "animal_bound_up",      "sp_animal_budget",
      "length_animal_sp",     "length_animal_gp",
      "length_animal_up",     "strong_implies_weak",
      "sp_not_longer_than_gp", "sp_not_longer_than_up",
      "sp_stretch_upper",     "sp_at_least_k"};

  struct Tally {
    std::uint32_t evals = 0, fails = 0;
  };
  struct TrialResult {
    std::array<Tally, kChecks> tally{};
    std::uint64_t seed = 0;
  };
  std::vector<TrialResult> slots(cfg.trials);

  run_trials(cfg.trials, [&](std::size_t t) {
    const std::uint64_t sub = mix_seed(cfg.master_seed, t);
    slots[t].seed = sub;
    try {
      const Instance inst =
          make_instance(cfg.intensity, cfg.k, cfg.margin, sub);
      auto& tl = slots[t].tally;
      auto note = [&](std::size_t idx, bool ok) {
        tl[idx].evals += 1;
        if (!ok) tl[idx].fails += 1;
      };

      const PathResult sp = shortest_path(inst, true);
      const PathResult gp = greedy_path(inst);
      const PathResult up = upper_path(inst);

      const AnimalBound ab_sp = check_animal_bound(path_polyline(inst, sp));
      note(0, ab_sp.ok);
      note(1, check_animal_bound(path_polyline(inst, gp)).ok);
      note(2, check_animal_bound(path_polyline(inst, up)).ok);
      note(3, double(ab_sp.size) < 4.24 * cfg.k + 1.0);
      note(4, length_animal_check(inst, cfg.rho, sp).ok);
      note(5, length_animal_check(inst, cfg.rho, gp).ok);
      note(6, length_animal_check(inst, cfg.rho, up).ok);

      if (scan_pixels) {
        const Window& w = inst.window;
        const auto x_lo = std::int64_t(std::ceil(w.xmin + 1.0));
        const auto x_hi = std::int64_t(std::floor(w.xmax - 1.0));
        const auto y_lo = std::int64_t(std::ceil(w.ymin + 1.0));
        const auto y_hi = std::int64_t(std::floor(w.ymax - 1.0));
        for (std::int64_t x = x_lo; x <= x_hi; ++x)
          for (std::int64_t y = y_lo; y <= y_hi; ++y) {
            const Pixel v{x, y};
            if (!strong_horizontality(inst, v, cfg.rho)) continue;
            note(7, strong_implies_weak_check(inst, v, params));
          }
      }

      note(8, sp.length <= gp.length);
      note(9, sp.length <= up.length);
      note(10, sp.length < 1.998 * cfg.k);
      note(11, sp.length >= cfg.k);
    } catch (const std::exception& e) {
      rethrow_with_trial(t, sub, e);
    }
  });

  std::vector<CheckRow> rows(kChecks);
  for (std::size_t c = 0; c < kChecks; ++c) {
    rows[c].check = kNames[c];
    for (const auto& slot : slots) {
      const Tally& tl = slot.tally[c];
      rows[c].instances += tl.evals;
      rows[c].failures += tl.fails;
      if (tl.fails > 0 && !rows[c].first_failing_seed)
        rows[c].first_failing_seed = slot.seed;
    }
    rows[c].passes = rows[c].instances - rows[c].failures;
  }
  return rows;
}

PixelEventStats pixel_event_mc(const ExperimentConfig& cfg) {
  validate_base(cfg);
  if (!(cfg.rho > 0))
    throw std::invalid_argument("pixel events need rho > 0");
  const PixelParams params{cfg.rho, cfg.kappa};
  if (!params.valid())
    throw std::invalid_argument("pixel events: invalid pixel parameters");
  const double eps = params.eps();

  struct Counts {
    std::uint64_t pixels = 0, h = 0, ni = 0, either = 0;
  };
  std::vector<Counts> slots(cfg.trials);

  run_trials(cfg.trials, [&](std::size_t t) {
    const std::uint64_t sub = mix_seed(cfg.master_seed, t);
    try {
      const Instance inst =
          make_instance(cfg.intensity, cfg.k, cfg.margin, sub);
      const Window& w = inst.window;
      const auto x_lo = std::int64_t(std::ceil(w.xmin + 1.0));
      const auto x_hi = std::int64_t(std::floor(w.xmax - 1.0));
      const auto y_lo = std::int64_t(std::ceil(w.ymin + 1.0));
      const auto y_hi = std::int64_t(std::floor(w.ymax - 1.0));
      Counts& c = slots[t];
      for (std::int64_t x = x_lo; x <= x_hi; ++x)
        for (std::int64_t y = y_lo; y <= y_hi; ++y) {
          // Skip pixels where the independence distance clause would fire.
          const double ds = std::hypot(double(x), double(y));
          const double dt = std::hypot(double(x) - cfg.k, double(y));
          if (ds < 2.0 || dt < 2.0) continue;
          const Pixel v{x, y};
          const bool h = strong_horizontality(inst, v, cfg.rho);
          const bool ind = independence_event(inst, v, eps);
          c.pixels += 1;
          if (h) c.h += 1;
          if (!ind) c.ni += 1;
          if (h || !ind) c.either += 1;
        }
    } catch (const std::exception& e) {
      rethrow_with_trial(t, sub, e);
    }
  });

  PixelEventStats out;
  for (const Counts& c : slots) {
    out.pixels += c.pixels;
    out.h_events += c.h;
    out.not_i_events += c.ni;
    out.union_events += c.either;
  }
  if (out.pixels == 0)
    throw std::runtime_error("pixel events: window admits no pixels");
  out.p_hat = double(out.union_events) / double(out.pixels);
  out.se = std::sqrt(out.p_hat * (1.0 - out.p_hat) / double(out.pixels));
  return out;
}

GateResult stat_gate(double value, double target, double tolerance,
                     double se) {
  if (!(tolerance >= 0) || !(se >= 0))
    throw std::invalid_argument("stat_gate: negative band");
  GateResult g;
  g.value = value;
  g.target = target;
  g.tolerance = tolerance;
  g.se = se;
  const double floor3 = 3.0 * se;
  g.widened = floor3 > tolerance;
  g.pass = std::abs(value - target) <= std::max(tolerance, floor3);
  return g;
}

namespace {

void append_double(std::string& out, double v) {
  if (std::isnan(v)) return;  // empty field
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_u64(std::string& out, std::uint64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

std::string path_stats_csv(const ExperimentConfig& cfg,
                           const std::vector<PathStats>& rows) {
  std::string out =
      "path,intensity,k,trials,master_seed,mean_length,std_length,"
      "mean_size_over_sqrt_n,std_size_over_sqrt_n\n";
  for (const PathStats& r : rows) {
    out += path_tag(r.path);
    out += ',';
    append_double(out, cfg.intensity);
    out += ',';
    append_double(out, cfg.k);
    out += ',';
    append_u64(out, cfg.trials);
    out += ',';
    append_u64(out, cfg.master_seed);
    out += ',';
    append_double(out, r.length.mean);
    out += ',';
    append_double(out, r.length.std_dev);
    out += ',';
    append_double(out, r.size_over_sqrt_n.mean);
    out += ',';
    append_double(out, r.size_over_sqrt_n.std_dev);
    out += '\n';
  }
  return out;
}

std::string check_report_csv(const std::vector<CheckRow>& rows) {
  std::string out = "check,instances,passes,failures,first_failing_seed\n";
  for (const CheckRow& r : rows) {
    out += r.check;
    out += ',';
    append_u64(out, r.instances);
    out += ',';
    append_u64(out, r.passes);
    out += ',';
    append_u64(out, r.failures);
    out += ',';
    if (r.first_failing_seed) append_u64(out, *r.first_failing_seed);
    out += '\n';
  }
  return out;
}

std::string integral_report_csv(const std::vector<IntegralCheck>& rows) {
  std::string out = "integral_id,estimate,closed_form,rel_err,pass\n";
  for (const IntegralCheck& r : rows) {
    out += r.id;
    out += ',';
    append_double(out, r.estimate);
    out += ',';
    append_double(out, r.closed_form);
    out += ',';
    append_double(out, r.rel_err);
    out += ',';
    out += r.pass ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string variance_csv(const VarianceStudy& study) {
  std::string out =
      "intensity,trials,var_length,var_times_sqrt_n,tail_fraction\n";
  for (const VarianceRow& r : study.rows) {
    append_double(out, r.intensity);
    out += ',';
    append_u64(out, r.trials);
    out += ',';
    append_double(out, r.var_length);
    out += ',';
    append_double(out, r.var_times_sqrt_n);
    out += ',';
    append_double(out, r.tail_fraction);
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(contents.data(), std::streamsize(contents.size()));
  os.flush();
  if (!os.good()) throw std::runtime_error("failed writing " + path);
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void append_coord(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  out += buf;
}

void append_label(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  out += buf;
}

}  // namespace

std::string band_plot_svg(const std::string& title, const std::string& x_label,
                          std::vector<BandPoint> points) {
  if (points.empty())
    throw std::invalid_argument("band_plot_svg: no points");
  for (const BandPoint& p : points)
    if (!(p.x > 0) || !std::isfinite(p.mean) || !(p.dev >= 0) ||
        !std::isfinite(p.dev))
      throw std::invalid_argument("band_plot_svg: bad point");
  std::sort(points.begin(), points.end(),
            [](const BandPoint& a, const BandPoint& b) { return a.x < b.x; });

  const double kw = 640, kh = 400;
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  double x0 = std::log10(points.front().x);
  double x1 = std::log10(points.back().x);
  if (x1 - x0 < 1e-9) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  double ylo = points[0].mean - points[0].dev;
  double yhi = points[0].mean + points[0].dev;
  for (const BandPoint& p : points) {
    ylo = std::min(ylo, p.mean - p.dev);
    yhi = std::max(yhi, p.mean + p.dev);
  }
  double pad = 0.1 * (yhi - ylo);
  if (!(pad > 0)) pad = 0.1 * std::max(1.0, std::abs(ylo));
  ylo -= pad;
  yhi += pad;

  auto px = [&](double x) {
    return ml + (std::log10(x) - x0) / (x1 - x0) * (kw - ml - mr);
  };
  auto py = [&](double y) {
    return kh - mb - (y - ylo) / (yhi - ylo) * (kh - mt - mb);
  };

  std::string svg =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
      "height=\"400\" viewBox=\"0 0 640 400\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" "
         "fill=\"#ffffff\"/>\n";

  svg += "<polygon fill=\"#c3d7ee\" stroke=\"none\" points=\"";
  for (const BandPoint& p : points) {
    append_coord(svg, px(p.x));
    svg += ',';
    append_coord(svg, py(p.mean + p.dev));
    svg += ' ';
  }
  for (auto it = points.rbegin(); it != points.rend(); ++it) {
    append_coord(svg, px(it->x));
    svg += ',';
    append_coord(svg, py(it->mean - it->dev));
    if (it + 1 != points.rend()) svg += ' ';
  }
  svg += "\"/>\n";

  svg += "<polyline fill=\"none\" stroke=\"#245a8d\" stroke-width=\"1.5\" "
         "points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) svg += ' ';
    append_coord(svg, px(points[i].x));
    svg += ',';
    append_coord(svg, py(points[i].mean));
  }
  svg += "\"/>\n";

  for (const BandPoint& p : points) {
    svg += "<circle r=\"2.5\" fill=\"#245a8d\" cx=\"";
    append_coord(svg, px(p.x));
    svg += "\" cy=\"";
    append_coord(svg, py(p.mean));
    svg += "\"/>\n";
  }

  // Axes.
  svg += "<line stroke=\"#333333\" x1=\"";
  append_coord(svg, ml);
  svg += "\" y1=\"";
  append_coord(svg, kh - mb);
  svg += "\" x2=\"";
  append_coord(svg, kw - mr);
  svg += "\" y2=\"";
  append_coord(svg, kh - mb);
  svg += "\"/>\n<line stroke=\"#333333\" x1=\"";
  append_coord(svg, ml);
  svg += "\" y1=\"";
  append_coord(svg, mt);
  svg += "\" x2=\"";
  append_coord(svg, ml);
  svg += "\" y2=\"";
  append_coord(svg, kh - mb);
  svg += "\"/>\n";

  for (const BandPoint& p : points) {
    const double x = px(p.x);
    svg += "<line stroke=\"#333333\" y1=\"";
    append_coord(svg, kh - mb);
    svg += "\" y2=\"";
    append_coord(svg, kh - mb + 5);
    svg += "\" x1=\"";
    append_coord(svg, x);
    svg += "\" x2=\"";
    append_coord(svg, x);
    svg += "\"/>\n<text font-family=\"sans-serif\" font-size=\"11\" "
           "fill=\"#333333\" text-anchor=\"middle\" x=\"";
    append_coord(svg, x);
    svg += "\" y=\"";
    append_coord(svg, kh - mb + 18);
    svg += "\">";
    append_label(svg, p.x);
    svg += "</text>\n";
  }

  for (int i = 0; i <= 4; ++i) {
    const double y = ylo + (yhi - ylo) * double(i) / 4.0;
    const double yc = py(y);
    svg += "<line stroke=\"#333333\" x1=\"";
    append_coord(svg, ml - 5);
    svg += "\" x2=\"";
    append_coord(svg, ml);
    svg += "\" y1=\"";
    append_coord(svg, yc);
    svg += "\" y2=\"";
    append_coord(svg, yc);
    svg += "\"/>\n<text font-family=\"sans-serif\" font-size=\"11\" "
           "fill=\"#333333\" text-anchor=\"end\" x=\"";
    append_coord(svg, ml - 8);
    svg += "\" y=\"";
    append_coord(svg, yc + 4);
    svg += "\">";
    append_label(svg, y);
    svg += "</text>\n";
  }

  svg += "<text font-family=\"sans-serif\" font-size=\"14\" "
         "fill=\"#111111\" text-anchor=\"middle\" x=\"320\" y=\"22\">";
  svg += xml_escape(title);
  svg += "</text>\n<text font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#333333\" text-anchor=\"middle\" x=\"320\" y=\"392\">";
  svg += xml_escape(x_label);
  svg += "</text>\n</svg>\n";
  return svg;
}

}  // namespace pds
