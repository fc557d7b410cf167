#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "swlog/model.hpp"
#include "swlog/schemes.hpp"

namespace swlog {

enum class SchemeKind { Truncated, Plain, Classical, Reference };

std::string to_string(SchemeKind kind);

enum class ReferenceKind { ClosedForm, TruncatedFinest };

// One level of a strong-error study.
struct ErrorCurveEntry {
  double dt = 0.0;
  double error = 0.0;       // E|x(T) - X(T)|^p, p-th root applied if root_mean
  double std_error = 0.0;   // delta-method standard error of `error`
  std::size_t n = 0;        // trajectories
  double cap_fraction = 0.0;  // capped steps / total steps at this level
};

struct ErrorCurve {
  std::vector<ErrorCurveEntry> entries;  // ascending dt
  double horizon = 0.0;
  double p = 1.0;
  bool root_mean = false;
  std::uint64_t master_seed = 0;
};

struct StrongErrorOptions {
  std::vector<double> dts;       // each an integer multiple of dt_reference
  std::size_t trajectories = 0;
  double horizon = 0.0;
  double p = 1.0;
  bool root_mean = false;
  double cap_constant = 10.0;
  double theta = 0.4;
  double dt_reference = 0.0;
  ReferenceKind reference = ReferenceKind::ClosedForm;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

// Couples every level to one finest lattice and chain per trajectory and
// measures the terminal distance to the reference path. Output is invariant
// under the worker count: per-trajectory results are reduced in index order.
ErrorCurve strong_error(const SwitchingLogisticModel& model,
                        const StrongErrorOptions& options);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t levels_used = 0;
};

// Least squares of log error against log dt. Drops `drop_levels` coarsest
// levels first, then any remaining coarsest levels whose cap fraction
// exceeds `cap_saturation_limit`. Requires >= 3 usable levels with positive
// errors.
SlopeFit fit_slope(const ErrorCurve& curve, std::size_t drop_levels = 0,
                   double cap_saturation_limit = 0.01);

// Terminal log-state over elapsed time, log(X_N) / (N dt).
double lyapunov_estimate(const SchemePath& path);

// Time average of the state with left endpoints, (1/N) sum_{k<N} X_k.
double time_average(const SchemePath& path);

// Gamma law with density proportional to x^(shape-1) exp(-rate x).
struct GammaDistribution {
  double shape = 0.0;
  double rate = 0.0;

  double mean() const { return shape / rate; }
};

// Stationary law of the single-regime model, shape 2b/sigma^2 - 1 and rate
// 2a/sigma^2. Requires a > 0 and 2b > sigma^2 (otherwise NotPermanent) and
// sigma > 0 (otherwise DegenerateInput).
GammaDistribution gamma_stationary(double b, double a, double sigma);

double gamma_pdf(const GammaDistribution& g, double x);
// Regularized lower incomplete gamma at rate * x; absolute error <= 1e-12.
double gamma_cdf(const GammaDistribution& g, double x);

// Sorted sample set.
struct EmpiricalDistribution {
  std::vector<double> samples;

  static EmpiricalDistribution from_samples(std::vector<double> samples);
};

struct KsResult {
  double statistic = 0.0;
  double critical_value = 0.0;  // asymptotic 5% level, 1.36 / sqrt(n)
  bool reject = false;
};

KsResult ks_statistic(const EmpiricalDistribution& samples,
                      const std::function<double(double)>& cdf);

struct Histogram {
  std::vector<double> edges;    // bin_count + 1 ascending edges
  std::vector<std::size_t> counts;
  std::vector<double> density;  // counts / (n * width); integrates to 1
};

// ceil(sqrt(n)) clamped to [10, 200].
std::size_t default_bin_count(std::size_t n);

Histogram empirical_density(const EmpiricalDistribution& samples,
                            std::size_t bin_count);

struct CdfDistance {
  double sup = 0.0;
  double l1 = 0.0;
};

// Exact sup and L1 distances between two empirical CDFs.
CdfDistance cdf_distance(const EmpiricalDistribution& lhs,
                         const EmpiricalDistribution& rhs);

struct TrajectoryStudyOptions {
  SchemeConfig scheme;
  SchemeKind kind = SchemeKind::Truncated;
  std::size_t trajectories = 0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

// Terminal states X(T) over independent trajectories, in trajectory order.
// Blown-up classical paths record their last finite state.
std::vector<double> terminal_samples(const SwitchingLogisticModel& model,
                                     const TrajectoryStudyOptions& options);

// Per-trajectory Lyapunov estimates log(X_N) / T, in trajectory order.
std::vector<double> lyapunov_samples(const SwitchingLogisticModel& model,
                                     const TrajectoryStudyOptions& options);

// Per-trajectory time averages, in trajectory order.
std::vector<double> time_average_samples(const SwitchingLogisticModel& model,
                                         const TrajectoryStudyOptions& options);

struct MomentCurves {
  std::vector<double> times;
  std::vector<double> mean_pow;      // E[X_k^p]
  std::vector<double> mean_inv_pow;  // E[X_k^-p]
  double p = 1.0;
};

// Sample moments on the full grid; the reduction runs in trajectory order,
// so results do not depend on the worker count.
MomentCurves moment_estimate(const SwitchingLogisticModel& model,
                             const TrajectoryStudyOptions& options, double p);

struct BlowupReport {
  std::size_t trajectories = 0;
  std::size_t blowups = 0;
  double fraction = 0.0;
  std::vector<std::size_t> first_steps;  // one entry per blown-up path
};

// Fraction of paths whose |X| exceeds the blow-up threshold before T.
BlowupReport blowup_frequency(const SwitchingLogisticModel& model,
                              const TrajectoryStudyOptions& options);

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

SummaryStats summarize(const std::vector<double>& values);

}  // namespace swlog
