#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pds/bounds.hpp"
#include "pds/paths.hpp"
#include "pds/pixels.hpp"
#include "pds/sampling.hpp"

namespace pds {

enum class PathKind { kStraightWalk, kUpperPath, kGreedyPath, kShortestPath };

// Short lowercase tag used in CSV output and CLI flags: sw, up, gp, sp.
std::string_view path_tag(PathKind kind);
std::optional<PathKind> parse_path_tag(std::string_view tag);

struct ExperimentConfig {
  double intensity = 1e5;
  double k = 1.0;
  std::size_t trials = 100;
  std::uint64_t master_seed = 0;
  std::vector<PathKind> paths = {PathKind::kStraightWalk, PathKind::kUpperPath,
                                 PathKind::kGreedyPath,
                                 PathKind::kShortestPath};
  MarginPolicy margin{};
  // Pixel parameters for theorem and pixel-event runs.
  double rho = 1e-4;
  double kappa = 1.5;
};

// Sample statistics of one metric. A metric with no observations keeps
// count 0 and NaN moments (the straight walk has no length column).
struct StatSummary {
  std::size_t count = 0;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std_dev = std::numeric_limits<double>::quiet_NaN();
  double se = std::numeric_limits<double>::quiet_NaN();
};

// Sum with pairwise splitting; the result does not depend on how trials
// were distributed over workers.
double pairwise_sum(const double* data, std::size_t count);

// count, mean, sample standard deviation (0 for a single observation),
// se = std/sqrt(count). Two pairwise passes.
StatSummary summarize(const std::vector<double>& values);

// min(trials, hardware threads, PDS_STRETCH_THREADS when set positive).
std::size_t worker_count(std::size_t trials);

// Runs body(trial) for every trial index on a worker pool. Bodies write to
// per-trial slots owned by the caller; workers never share mutable state.
// If bodies throw, the exception of the lowest failing trial index is
// rethrown, so failures too are independent of the worker count.
void run_trials(std::size_t trials, const std::function<void(std::size_t)>& body);

struct PathStats {
  PathKind path = PathKind::kShortestPath;
  StatSummary length;
  StatSummary size_over_sqrt_n;
};

// Per requested path over cfg.trials independent instances: statistics of
// the path length and of size/sqrt(n). Trial t uses the instance seed
// mix_seed(master_seed, t); results are a pure function of the config.
std::vector<PathStats> run_path_experiment(const ExperimentConfig& cfg);

// Mean count of triangles whose open circumdisk contains the origin, over
// independent draws on a window sized by the margin policy around the
// origin (twice the margin radius, covering circumdisks that reach past
// the margin itself).
StatSummary estimate_N0(double intensity, std::size_t trials,
                        std::uint64_t seed);

struct L0Estimate {
  StatSummary raw;     // total edge length at the inserted origin
  StatSummary scaled;  // raw * sqrt(intensity)
};
L0Estimate estimate_L0(double intensity, std::size_t trials,
                       std::uint64_t seed);

struct VarianceRow {
  double intensity = 0;
  std::size_t trials = 0;
  double var_length = 0;  // Var of the upper path length
  double var_times_sqrt_n = 0;
  double tail_fraction = 0;  // fraction of trials with length > 1.2 k
};

struct VarianceStudy {
  std::vector<VarianceRow> rows;  // ascending intensity
  bool variance_decreasing = false;
  // var*sqrt(n) drifts by at most a factor 3 per decade of intensity
  // between every pair of rows (closer pairs get a full decade's allowance).
  bool ratio_within_factor_3 = false;
};

VarianceStudy variance_scaling_study(const std::vector<double>& intensities,
                                     std::size_t trials, double k,
                                     std::uint64_t seed);

struct CheckRow {
  std::string check;
  std::size_t instances = 0;  // evaluations, not necessarily trials
  std::size_t passes = 0;
  std::size_t failures = 0;
  std::optional<std::uint64_t> first_failing_seed;
};

// Deterministic property checks over cfg.trials instances: animal bounds on
// the three edge paths, the shortest-path animal budget 4.24k+1, the
// length-vs-animal inequality at cfg.rho, the strong-to-weak witness check
// on every pixel where strong horizontality is detected, the path ordering
// sp <= gp and sp <= up, and k <= sp length < 1.998k. Requires integer k.
std::vector<CheckRow> theorem_checks(const ExperimentConfig& cfg);

struct PixelEventStats {
  std::uint64_t pixels = 0;    // evaluated pixels over all instances
  std::uint64_t h_events = 0;  // strong horizontality held
  std::uint64_t not_i_events = 0;
  std::uint64_t union_events = 0;
  double p_hat = 0;  // union_events / pixels
  double se = 0;     // binomial standard error
};

// Frequency of (strong horizontality or failed independence) over all
// in-window pixels at distance >= 2 from both endpoints, across
// cfg.trials instances at eps = sqrt(rho (2 + rho)).
PixelEventStats pixel_event_mc(const ExperimentConfig& cfg);

// Pass/fail band around a target. The effective band is widened to 3 se
// when the requested tolerance is tighter than the noise floor.
struct GateResult {
  double value = 0, target = 0, tolerance = 0, se = 0;
  bool widened = false;
  bool pass = false;
};
GateResult stat_gate(double value, double target, double tolerance, double se);

// CSV producers return complete file contents; doubles are written with
// shortest round-trip formatting and NaN as an empty field.
std::string path_stats_csv(const ExperimentConfig& cfg,
                           const std::vector<PathStats>& rows);
std::string check_report_csv(const std::vector<CheckRow>& rows);
std::string integral_report_csv(const std::vector<IntegralCheck>& rows);
std::string variance_csv(const VarianceStudy& study);

// Throws std::runtime_error when the path cannot be written.
void write_file(const std::string& path, const std::string& contents);

struct BandPoint {
  double x = 0;
  double mean = 0;
  double dev = 0;
};

// Mean line with a +-dev band against log10(x). Points need x > 0 and are
// drawn in ascending x order.
std::string band_plot_svg(const std::string& title, const std::string& x_label,
                          std::vector<BandPoint> points);

}  // namespace pds
