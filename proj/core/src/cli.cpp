#include "pds/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pds/bounds.hpp"
#include "pds/harness.hpp"
#include "pds/pixels.hpp"

namespace pds::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::size_t as_count(double v, const char* what) {
  if (!(v >= 1) || v != std::floor(v) || v > 1e15)
    throw std::invalid_argument(std::string(what) +
                                " must be a positive integer");
  return std::size_t(v);
}

// Holds raw flag values; every subcommand owns one.
struct Opts {
  double intensity = 1e5;
  double k = 1.0;
  double trials = 100;
  std::uint64_t seed = 0;
  double rho = 1e-4;
  double kappa = 1.5;
  std::vector<std::string> paths;
  std::vector<double> intensities = {1e3, 1e4};
  double samples = 2e6;
  double tolerance = 1e-2;
  std::string out;
  std::string svg;
  std::string file;
  std::string color = "green";
  std::int64_t lambda = 1;
  bool search = false;
  bool list = false;
};

ExperimentConfig to_config(const Opts& o) {
  ExperimentConfig cfg;
  cfg.intensity = o.intensity;
  cfg.k = o.k;
  cfg.trials = as_count(o.trials, "trials");
  cfg.master_seed = o.seed;
  cfg.rho = o.rho;
  cfg.kappa = o.kappa;
  if (!o.paths.empty()) {
    cfg.paths.clear();
    for (const std::string& tag : o.paths) {
      const auto kind = parse_path_tag(tag);
      if (!kind)
        throw std::invalid_argument("unknown path tag '" + tag +
                                    "' (expected sw, up, gp or sp)");
      cfg.paths.push_back(*kind);
    }
  }
  return cfg;
}

// CSV goes to --out when given (summary to out stream), to the out stream
// otherwise (summary to err).
void emit_csv(const std::string& csv, const std::string& out_path,
              const std::string& summary, std::ostream& out,
              std::ostream& err) {
  if (out_path.empty()) {
    out << csv;
    err << summary;
  } else {
    write_file(out_path, csv);
    out << summary;
  }
}

int run_simulate(const Opts& o, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = to_config(o);
  const auto stats = run_path_experiment(cfg);
  std::string summary = "simulate: " + std::to_string(cfg.trials) +
                        " trials at n=" + fmt(cfg.intensity) +
                        ", k=" + fmt(cfg.k) + "\n";
  emit_csv(path_stats_csv(cfg, stats), o.out, summary, out, err);
  return 0;
}

int run_walk_count(const Opts& o, std::ostream& out, std::ostream& err) {
  Opts only_sw = o;
  only_sw.paths = {"sw"};
  const ExperimentConfig cfg = to_config(only_sw);
  const auto stats = run_path_experiment(cfg);
  double rate = 0;
  for (const auto& c : constants())
    if (c.name == "straight_walk_triangle_rate") rate = c.value;
  const std::string summary =
      "walk-count: mean_size_over_sqrt_n=" + fmt(stats[0].size_over_sqrt_n.mean) +
      " se=" + fmt(stats[0].size_over_sqrt_n.se) + " rate=" + fmt(rate) + "\n";
  emit_csv(path_stats_csv(cfg, stats), o.out, summary, out, err);
  return 0;
}

int run_n0(const Opts& o, std::ostream& out, std::ostream&) {
  const StatSummary s =
      estimate_N0(o.intensity, as_count(o.trials, "trials"), o.seed);
  const GateResult g = stat_gate(s.mean, 4.0, 0.15, s.se);
  out << "trials=" << s.count << " mean=" << fmt(s.mean)
      << " std=" << fmt(s.std_dev) << " se=" << fmt(s.se) << "\n"
      << "target=4 band=0.15 widened=" << int(g.widened)
      << " pass=" << int(g.pass) << "\n";
  return g.pass ? 0 : 1;
}

int run_l0(const Opts& o, std::ostream& out, std::ostream&) {
  const L0Estimate e =
      estimate_L0(o.intensity, as_count(o.trials, "trials"), o.seed);
  const GateResult g = stat_gate(e.scaled.mean, 6.8, 0.5, e.scaled.se);
  out << "trials=" << e.raw.count << " raw_mean=" << fmt(e.raw.mean)
      << " scaled_mean=" << fmt(e.scaled.mean)
      << " scaled_std=" << fmt(e.scaled.std_dev)
      << " scaled_se=" << fmt(e.scaled.se) << "\n"
      << "target=6.8 band=0.5 widened=" << int(g.widened)
      << " pass=" << int(g.pass) << "\n";
  return g.pass ? 0 : 1;
}

int run_variance(const Opts& o, std::ostream& out, std::ostream& err) {
  const VarianceStudy st = variance_scaling_study(
      o.intensities, as_count(o.trials, "trials"), o.k, o.seed);
  if (!o.svg.empty()) {
    std::vector<BandPoint> pts;
    for (const auto& r : st.rows)
      pts.push_back({r.intensity, r.var_times_sqrt_n, 0.0});
    write_file(o.svg, band_plot_svg("upper path length variance, scaled",
                                    "intensity", pts));
  }
  const std::string summary =
      "variance_decreasing=" + std::to_string(int(st.variance_decreasing)) +
      " ratio_within_factor_3=" +
      std::to_string(int(st.ratio_within_factor_3)) + "\n";
  emit_csv(variance_csv(st), o.out, summary, out, err);
  return st.variance_decreasing && st.ratio_within_factor_3 ? 0 : 1;
}

int run_pixels(const Opts& o, std::ostream& out, std::ostream&) {
  const ExperimentConfig cfg = to_config(o);
  const PixelEventStats st = pixel_event_mc(cfg);
  const double bound = eval_P_raw(cfg.rho, cfg.intensity);
  const bool pass = st.p_hat <= bound + 3.0 * st.se;
  out << "pixels=" << st.pixels << " h_events=" << st.h_events
      << " not_i_events=" << st.not_i_events
      << " union_events=" << st.union_events << " p_hat=" << fmt(st.p_hat)
      << " se=" << fmt(st.se) << "\n"
      << "bound=" << fmt(bound) << " pass=" << int(pass) << "\n";
  return pass ? 0 : 1;
}

int run_theorems(const Opts& o, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = to_config(o);
  const auto rows = theorem_checks(cfg);
  std::size_t instances = 0, failures = 0;
  for (const auto& r : rows) {
    instances += r.instances;
    failures += r.failures;
  }
  const std::string summary = "checks=" + std::to_string(rows.size()) +
                              " instances=" + std::to_string(instances) +
                              " failures=" + std::to_string(failures) + "\n";
  emit_csv(check_report_csv(rows), o.out, summary, out, err);
  return failures == 0 ? 0 : 1;
}

int run_integrals(const Opts& o, std::ostream& out, std::ostream& err) {
  const auto report =
      verify_integrals(as_count(o.samples, "samples"), o.tolerance);
  std::size_t failures = 0;
  for (const auto& r : report)
    if (!r.pass) ++failures;
  const std::string summary = "integrals=" + std::to_string(report.size()) +
                              " failures=" + std::to_string(failures) + "\n";
  emit_csv(integral_report_csv(report), o.out, summary, out, err);
  return failures == 0 ? 0 : 1;
}

int run_bound(const Opts& o, std::ostream& out, std::ostream&) {
  const double p = eval_P_raw(o.rho, o.intensity);
  const double obj = lower_bound_objective(o.rho, o.intensity);
  out << "P=" << fmt(p) << "\n" << "objective=" << fmt(obj) << "\n";
  if (o.search) {
    const SearchResult res = objective_and_search();
    out << "best rho=" << fmt(res.best.rho) << " n=" << fmt(res.best.n)
        << " P=" << fmt(res.best.p) << " value=" << fmt(res.best.value) << "\n"
        << "reference rho=" << fmt(res.reference.rho)
        << " n=" << fmt(res.reference.n) << " P=" << fmt(res.reference.p)
        << " value=" << fmt(res.reference.value) << "\n";
  }
  return 0;
}

std::vector<Point> read_polyline(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open " + path);
  std::vector<Point> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double x = 0, y = 0;
    if (!(ls >> x)) {
      std::string rest;
      if (ls.clear(), ls >> rest)
        throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                    ": expected two numbers");
      continue;  // blank or comment-only line
    }
    std::string extra;
    if (!(ls >> y) || (ls >> extra))
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected two numbers");
    pts.push_back({x, y});
  }
  if (pts.size() < 2)
    throw std::invalid_argument(path + ": polyline needs at least 2 points");
  return pts;
}

int run_animal(const Opts& o, std::ostream& out, std::ostream&) {
  const std::vector<Point> poly = read_polyline(o.file);
  Color color = Color::kGreen;
  if (o.color == "green") color = Color::kGreen;
  else if (o.color == "pink") color = Color::kPink;
  else if (o.color == "blue") color = Color::kBlue;
  else if (o.color == "yellow") color = Color::kYellow;
  else
    throw std::invalid_argument("unknown color '" + o.color +
                                "' (green, pink, blue or yellow)");
  if (o.lambda < 1)
    throw std::invalid_argument("lambda must be a positive integer");
  const GridSpec grid{o.lambda, color};
  const auto animal = extract_animal(poly, grid);
  out << "points=" << poly.size() << " size=" << animal.size() << "\n";
  int rc = 0;
  if (o.lambda == 1 && color == Color::kGreen) {
    const AnimalBound ab = check_animal_bound(poly);
    out << "bound=" << fmt(ab.bound) << " ok=" << int(ab.ok) << "\n";
    rc = ab.ok ? 0 : 1;
  }
  if (o.list)
    for (const Pixel& v : animal) out << "pixel " << v.x << " " << v.y << "\n";
  return rc;
}

void add_instance_flags(CLI::App* sub, Opts& o) {
  sub->add_option("--intensity,--n", o.intensity, "point process intensity");
  sub->add_option("--k", o.k, "endpoint separation");
  sub->add_option("--trials", o.trials, "trial count (integer)");
  sub->add_option("--seed", o.seed, "master seed");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Path stretch experiments on planar Poisson-Delaunay "
               "triangulations"};
  app.name("pds-stretch");
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config with [subcommand] tables");
  app.allow_config_extras(CLI::config_extras_mode::error);

  int rc = 0;

  Opts sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Path length and size statistics over sampled instances");
  add_instance_flags(simulate, sim);
  simulate->add_option("--paths,--path", sim.paths,
                       "paths to run (sw, up, gp, sp)")
      ->delimiter(',');
  simulate->add_option("--out", sim.out, "CSV output file (default stdout)");
  simulate->callback([&] { rc = run_simulate(sim, out, err); });

  Opts wc;
  auto* walk = app.add_subcommand(
      "walk-count", "Triangle count of the straight walk, scaled by sqrt(n)");
  add_instance_flags(walk, wc);
  walk->add_option("--out", wc.out, "CSV output file (default stdout)");
  walk->callback([&] { rc = run_walk_count(wc, out, err); });

  Opts n0;
  n0.trials = 1e4;
  auto* n0cmd = app.add_subcommand(
      "n0", "Mean count of triangles whose circumdisk covers the origin");
  n0cmd->add_option("--intensity,--n", n0.intensity, "point process intensity");
  n0cmd->add_option("--trials", n0.trials, "trial count (integer)");
  n0cmd->add_option("--seed", n0.seed, "master seed");
  n0cmd->callback([&] { rc = run_n0(n0, out, err); });

  Opts l0;
  l0.trials = 1e4;
  auto* l0cmd = app.add_subcommand(
      "l0", "Mean total edge length at an inserted origin, scaled by sqrt(n)");
  l0cmd->add_option("--intensity,--n", l0.intensity, "point process intensity");
  l0cmd->add_option("--trials", l0.trials, "trial count (integer)");
  l0cmd->add_option("--seed", l0.seed, "master seed");
  l0cmd->callback([&] { rc = run_l0(l0, out, err); });

  Opts var;
  var.trials = 60;
  auto* variance = app.add_subcommand(
      "variance", "Upper path length variance against intensity");
  variance
      ->add_option("--intensities", var.intensities,
                   "intensities to compare (comma separated)")
      ->delimiter(',');
  variance->add_option("--trials", var.trials, "trial count per intensity");
  variance->add_option("--k", var.k, "endpoint separation");
  variance->add_option("--seed", var.seed, "master seed");
  variance->add_option("--out", var.out, "CSV output file (default stdout)");
  variance->add_option("--svg", var.svg, "SVG plot output file");
  variance->callback([&] { rc = run_variance(var, out, err); });

  Opts pix;
  pix.intensity = 153.0;
  pix.k = 5.0;
  auto* pixels = app.add_subcommand(
      "pixels", "Frequency of horizontality or failed independence per pixel");
  add_instance_flags(pixels, pix);
  pixels->add_option("--rho", pix.rho, "length slack");
  pixels->add_option("--kappa", pix.kappa, "weak horizontality factor");
  pixels->callback([&] { rc = run_pixels(pix, out, err); });

  Opts thm;
  thm.intensity = 153.0;
  thm.k = 5.0;
  auto* theorems = app.add_subcommand(
      "theorems", "Per-instance property checks (integer k)");
  add_instance_flags(theorems, thm);
  theorems->add_option("--rho", thm.rho, "length slack");
  theorems->add_option("--kappa", thm.kappa, "weak horizontality factor");
  theorems->add_option("--out", thm.out, "CSV output file (default stdout)");
  theorems->callback([&] { rc = run_theorems(thm, out, err); });

  Opts intg;
  auto* integrals = app.add_subcommand(
      "integrals", "Quadrature and Monte Carlo checks of the closed forms");
  integrals->add_option("--samples", intg.samples,
                        "Monte Carlo sample count (integer)");
  integrals->add_option("--tolerance", intg.tolerance,
                        "relative error gate for Monte Carlo rows");
  integrals->add_option("--out", intg.out, "CSV output file (default stdout)");
  integrals->callback([&] { rc = run_integrals(intg, out, err); });

  Opts bnd;
  bnd.rho = 1.25e-10;
  bnd.intensity = 153.0;
  auto* bound = app.add_subcommand(
      "bound", "Event probability bound P(rho, n) and the lower bound "
               "objective");
  bound->add_option("--rho", bnd.rho, "length slack")->required();
  bound->add_option("--intensity,--n", bnd.intensity, "point process intensity")
      ->required();
  bound->add_flag("--search", bnd.search, "also run the grid search");
  bound->callback([&] { rc = run_bound(bnd, out, err); });

  Opts ani;
  auto* animal = app.add_subcommand(
      "animal", "Lattice animal of a polyline file (x y per line)");
  animal->add_option("file", ani.file, "polyline file")
      ->required()
      ->check(CLI::ExistingFile);
  animal->add_option("--lambda", ani.lambda, "grid scale");
  animal->add_option("--color", ani.color, "grid color");
  animal->add_flag("--list", ani.list, "print the animal's pixels");
  animal->callback([&] { rc = run_animal(ani, out, err); });

  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace pds::cli
