#include "swlog/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "swlog/errors.hpp"

namespace swlog {

namespace {

std::size_t checked_steps(double horizon, double dt) {
  if (!(horizon > 0.0) || !(dt > 0.0))
    throw DegenerateInputError("horizon and dt must be positive");
  double ratio = horizon / dt;
  auto n = static_cast<std::size_t>(std::llround(ratio));
  if (n == 0 || std::abs(static_cast<double>(n) * dt - horizon) > 1e-9 * horizon)
    throw GridMismatchError("horizon must be an integer number of steps");
  return n;
}

std::size_t checked_factor(double dt, double dt_fine) {
  double ratio = dt / dt_fine;
  auto factor = static_cast<std::size_t>(std::llround(ratio));
  if (factor == 0 || std::abs(static_cast<double>(factor) * dt_fine - dt) > 1e-9 * dt)
    throw GridMismatchError("dt must be an integer multiple of the fine step");
  return factor;
}

SchemePath run_kind(const SwitchingLogisticModel& model, const SchemeConfig& cfg,
                    SchemeKind kind, const BrownianLattice& lattice,
                    const ChainPath& chain) {
  switch (kind) {
    case SchemeKind::Truncated:
      return truncated_log_em(model, cfg, lattice.increments, chain.states);
    case SchemeKind::Plain:
      return plain_log_em(model, cfg, lattice.increments, chain.states);
    case SchemeKind::Classical:
      return classical_em(model, cfg, lattice.increments, chain.states);
    case SchemeKind::Reference:
      return exact_reference(model, lattice, chain);
  }
  throw DegenerateInputError("unknown scheme kind");
}

// One trajectory of a single-level study: lattice and chain on the scheme's
// own grid, streams addressed by the trajectory index.
SchemePath single_level_path(const SwitchingLogisticModel& model,
                             const TrajectoryStudyOptions& options,
                             const TransitionMatrix& p, std::size_t n,
                             std::size_t trajectory) {
  BrownianLattice lattice = brownian_lattice(
      options.scheme.dt, n,
      {options.seed, trajectory, kBrownianPurpose});
  ChainPath chain = sample_chain(p, options.scheme.dt, model.r0, n,
                                 {options.seed, trajectory, kChainPurpose});
  return run_kind(model, options.scheme, options.kind, lattice, chain);
}

void check_study(const TrajectoryStudyOptions& options) {
  if (options.trajectories == 0)
    throw DegenerateInputError("study needs at least one trajectory");
}

}  // namespace

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Truncated: return "truncated";
    case SchemeKind::Plain: return "plain";
    case SchemeKind::Classical: return "classical";
    case SchemeKind::Reference: return "reference";
  }
  return "truncated";
}

ErrorCurve strong_error(const SwitchingLogisticModel& model,
                        const StrongErrorOptions& options) {
  model.validate();
  if (options.dts.empty()) throw DegenerateInputError("no step sizes given");
  if (options.trajectories == 0)
    throw DegenerateInputError("study needs at least one trajectory");
  if (!(options.p > 0.0)) throw DegenerateInputError("error exponent must be > 0");
  if (!(options.dt_reference > 0.0))
    throw DegenerateInputError("reference step must be positive");

  const std::size_t n_fine = checked_steps(options.horizon, options.dt_reference);
  std::vector<double> dts = options.dts;
  std::sort(dts.begin(), dts.end());
  const std::size_t levels = dts.size();
  std::vector<std::size_t> factors(levels);
  std::vector<std::size_t> level_steps(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    factors[l] = checked_factor(dts[l], options.dt_reference);
    if (n_fine % factors[l] != 0)
      throw NonDivisorError("level step does not divide the fine lattice");
    level_steps[l] = n_fine / factors[l];
  }

  const TransitionMatrix p_fine = transition_matrix(model.gen, options.dt_reference);
  const SchemeConfig ref_cfg{options.dt_reference, options.cap_constant,
                             options.theta};

  struct TrajectoryResult {
    std::vector<double> err_pow;      // one per level
    std::vector<std::uint32_t> caps;  // capped steps per level
  };

  auto compute = [&](std::size_t j) {
    BrownianLattice lattice = brownian_lattice(
        options.dt_reference, n_fine, {options.seed, j, kBrownianPurpose});
    ChainPath chain = sample_chain(p_fine, options.dt_reference, model.r0, n_fine,
                                   {options.seed, j, kChainPurpose});
    double reference;
    if (options.reference == ReferenceKind::ClosedForm)
      reference = exact_reference(model, lattice, chain).state.back();
    else
      reference =
          truncated_log_em(model, ref_cfg, lattice.increments, chain.states)
              .state.back();

    TrajectoryResult result;
    result.err_pow.resize(levels);
    result.caps.resize(levels);
    for (std::size_t l = 0; l < levels; ++l) {
      std::vector<double> inc = coarsen(lattice, factors[l]);
      std::vector<int> reg = stride_states(chain, factors[l]);
      SchemeConfig cfg{dts[l], options.cap_constant, options.theta};
      SchemePath path = truncated_log_em(model, cfg, inc, reg);
      result.err_pow[l] =
          std::pow(std::abs(reference - path.state.back()), options.p);
      result.caps[l] = static_cast<std::uint32_t>(path.cap_hits);
    }
    return result;
  };

  const std::size_t m = options.trajectories;
  std::vector<double> sum(levels, 0.0), sum_sq(levels, 0.0);
  std::vector<std::uint64_t> caps(levels, 0);
  detail::for_each_trajectory_ordered<TrajectoryResult>(
      m, options.workers, compute, [&](std::size_t, TrajectoryResult&& r) {
        for (std::size_t l = 0; l < levels; ++l) {
          sum[l] += r.err_pow[l];
          sum_sq[l] += r.err_pow[l] * r.err_pow[l];
          caps[l] += r.caps[l];
        }
      });

  ErrorCurve curve;
  curve.horizon = options.horizon;
  curve.p = options.p;
  curve.root_mean = options.root_mean;
  curve.master_seed = options.seed;
  curve.entries.resize(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    double mean = sum[l] / static_cast<double>(m);
    double se = 0.0;
    if (m > 1) {
      double var = (sum_sq[l] - static_cast<double>(m) * mean * mean) /
                   static_cast<double>(m - 1);
      se = std::sqrt(std::max(var, 0.0) / static_cast<double>(m));
    }
    ErrorCurveEntry& e = curve.entries[l];
    e.dt = dts[l];
    e.n = m;
    e.cap_fraction = static_cast<double>(caps[l]) /
                     (static_cast<double>(m) * static_cast<double>(level_steps[l]));
    if (options.root_mean && options.p != 1.0) {
      e.error = std::pow(mean, 1.0 / options.p);
      e.std_error =
          mean > 0.0 ? se * e.error / (options.p * mean) : 0.0;
    } else {
      e.error = mean;
      e.std_error = se;
    }
  }
  return curve;
}

SlopeFit fit_slope(const ErrorCurve& curve, std::size_t drop_levels,
                   double cap_saturation_limit) {
  std::vector<ErrorCurveEntry> kept = curve.entries;
  std::sort(kept.begin(), kept.end(),
            [](const auto& a, const auto& b) { return a.dt < b.dt; });
  if (drop_levels >= kept.size())
    throw DegenerateInputError("drop_levels removes every level");
  kept.resize(kept.size() - drop_levels);
  while (!kept.empty() && kept.back().cap_fraction > cap_saturation_limit)
    kept.pop_back();
  if (kept.size() < 3)
    throw DegenerateInputError("slope fit needs at least three usable levels");
  for (const auto& e : kept)
    if (!(e.error > 0.0))
      throw DegenerateInputError("slope fit needs strictly positive errors");

  double sx = 0.0, sy = 0.0;
  for (const auto& e : kept) {
    sx += std::log(e.dt);
    sy += std::log(e.error);
  }
  double nx = static_cast<double>(kept.size());
  double mx = sx / nx, my = sy / nx;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& e : kept) {
    double dx = std::log(e.dt) - mx;
    double dy = std::log(e.error) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0))
    throw DegenerateInputError("slope fit needs at least two distinct steps");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.levels_used = kept.size();
  return fit;
}

double lyapunov_estimate(const SchemePath& path) {
  if (path.times.size() < 2)
    throw DegenerateInputError("Lyapunov estimate needs at least one step");
  return path.log_state.back() / path.times.back();
}

double time_average(const SchemePath& path) {
  if (path.times.size() < 2)
    throw DegenerateInputError("time average needs at least one step");
  double acc = 0.0;
  std::size_t n = path.state.size() - 1;
  for (std::size_t k = 0; k < n; ++k) acc += path.state[k];
  return acc / static_cast<double>(n);
}

GammaDistribution gamma_stationary(double b, double a, double sigma) {
  if (sigma == 0.0)
    throw DegenerateInputError("stationary law requires sigma > 0");
  if (!(a > 0.0) || !(2.0 * b > sigma * sigma))
    throw NotPermanentError("stationary law requires a > 0 and 2b > sigma^2");
  double s2 = sigma * sigma;
  return GammaDistribution{2.0 * b / s2 - 1.0, 2.0 * a / s2};
}

double gamma_pdf(const GammaDistribution& g, double x) {
  if (!(g.shape > 0.0) || !(g.rate > 0.0))
    throw DegenerateInputError("gamma parameters must be positive");
  if (x < 0.0) return 0.0;
  if (x == 0.0) {
    if (g.shape > 1.0) return 0.0;
    if (g.shape == 1.0) return g.rate;
    return std::numeric_limits<double>::infinity();
  }
  return std::exp(g.shape * std::log(g.rate) + (g.shape - 1.0) * std::log(x) -
                  g.rate * x - std::lgamma(g.shape));
}

namespace {

// Regularized lower incomplete gamma P(a, y): series for y < a + 1, Lentz
// continued fraction for the upper tail otherwise.
double reg_lower_gamma(double a, double y) {
  if (y <= 0.0) return 0.0;
  double log_prefix = -y + a * std::log(y) - std::lgamma(a);
  if (y < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
      term *= y / (a + n);
      sum += term;
      if (term < sum * 1e-16) break;
    }
    return sum * std::exp(log_prefix);
  }
  const double tiny = 1e-300;
  double b = y + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(log_prefix) * h;
}

}  // namespace

double gamma_cdf(const GammaDistribution& g, double x) {
  if (!(g.shape > 0.0) || !(g.rate > 0.0))
    throw DegenerateInputError("gamma parameters must be positive");
  if (x <= 0.0) return 0.0;
  double v = reg_lower_gamma(g.shape, g.rate * x);
  return std::clamp(v, 0.0, 1.0);
}

EmpiricalDistribution EmpiricalDistribution::from_samples(
    std::vector<double> samples) {
  if (samples.empty()) throw EmptySampleError("empty sample set");
  for (double v : samples)
    if (!std::isfinite(v))
      throw NonFiniteStateError("samples must be finite");
  std::sort(samples.begin(), samples.end());
  return EmpiricalDistribution{std::move(samples)};
}

KsResult ks_statistic(const EmpiricalDistribution& samples,
                      const std::function<double(double)>& cdf) {
  const auto& xs = samples.samples;
  if (xs.empty()) throw EmptySampleError("empty sample set");
  double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = cdf(xs[i]);
    double upper = (static_cast<double>(i) + 1.0) / n - f;
    double lower = f - static_cast<double>(i) / n;
    d = std::max({d, std::abs(upper), std::abs(lower)});
  }
  KsResult result;
  result.statistic = d;
  result.critical_value = 1.36 / std::sqrt(n);
  result.reject = d > result.critical_value;
  return result;
}

std::size_t default_bin_count(std::size_t n) {
  auto bins = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(n))));
  return std::clamp<std::size_t>(bins, 10, 200);
}

Histogram empirical_density(const EmpiricalDistribution& samples,
                            std::size_t bin_count) {
  const auto& xs = samples.samples;
  if (xs.empty()) throw EmptySampleError("empty sample set");
  if (bin_count == 0) throw DegenerateInputError("bin count must be >= 1");
  double lo = xs.front();
  double hi = xs.back();
  if (lo == hi) {
    // Degenerate support: one unit-width bin holding all the mass.
    lo -= 0.5;
    hi += 0.5;
    bin_count = 1;
  }
  double width = (hi - lo) / static_cast<double>(bin_count);
  Histogram hist;
  hist.edges.resize(bin_count + 1);
  for (std::size_t i = 0; i <= bin_count; ++i)
    hist.edges[i] = lo + width * static_cast<double>(i);
  hist.edges.back() = hi;
  hist.counts.assign(bin_count, 0);
  for (double v : xs) {
    auto idx = static_cast<std::size_t>((v - lo) / width);
    if (idx >= bin_count) idx = bin_count - 1;
    ++hist.counts[idx];
  }
  hist.density.resize(bin_count);
  double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < bin_count; ++i)
    hist.density[i] = static_cast<double>(hist.counts[i]) / (n * width);
  return hist;
}

CdfDistance cdf_distance(const EmpiricalDistribution& lhs,
                         const EmpiricalDistribution& rhs) {
  const auto& a = lhs.samples;
  const auto& b = rhs.samples;
  if (a.empty() || b.empty()) throw EmptySampleError("empty sample set");
  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  CdfDistance dist;
  std::size_t i = 0, j = 0;
  double prev = 0.0;
  bool have_prev = false;
  double prev_gap = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j]))
      x = a[i];
    else
      x = b[j];
    if (have_prev) dist.l1 += prev_gap * (x - prev);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    double fa = static_cast<double>(i) / na;
    double fb = static_cast<double>(j) / nb;
    prev_gap = std::abs(fa - fb);
    dist.sup = std::max(dist.sup, prev_gap);
    prev = x;
    have_prev = true;
  }
  return dist;
}

std::vector<double> terminal_samples(const SwitchingLogisticModel& model,
                                     const TrajectoryStudyOptions& options) {
  model.validate();
  check_study(options);
  std::size_t n = checked_steps(options.horizon, options.scheme.dt);
  TransitionMatrix p = transition_matrix(model.gen, options.scheme.dt);
  std::vector<double> out(options.trajectories);
  detail::for_each_trajectory_ordered<double>(
      options.trajectories, options.workers,
      [&](std::size_t j) {
        return single_level_path(model, options, p, n, j).state.back();
      },
      [&](std::size_t j, double&& v) { out[j] = v; });
  return out;
}

std::vector<double> lyapunov_samples(const SwitchingLogisticModel& model,
                                     const TrajectoryStudyOptions& options) {
  model.validate();
  check_study(options);
  std::size_t n = checked_steps(options.horizon, options.scheme.dt);
  TransitionMatrix p = transition_matrix(model.gen, options.scheme.dt);
  std::vector<double> out(options.trajectories);
  detail::for_each_trajectory_ordered<double>(
      options.trajectories, options.workers,
      [&](std::size_t j) {
        return lyapunov_estimate(single_level_path(model, options, p, n, j));
      },
      [&](std::size_t j, double&& v) { out[j] = v; });
  return out;
}

std::vector<double> time_average_samples(const SwitchingLogisticModel& model,
                                         const TrajectoryStudyOptions& options) {
  model.validate();
  check_study(options);
  std::size_t n = checked_steps(options.horizon, options.scheme.dt);
  TransitionMatrix p = transition_matrix(model.gen, options.scheme.dt);
  std::vector<double> out(options.trajectories);
  detail::for_each_trajectory_ordered<double>(
      options.trajectories, options.workers,
      [&](std::size_t j) {
        return time_average(single_level_path(model, options, p, n, j));
      },
      [&](std::size_t j, double&& v) { out[j] = v; });
  return out;
}

MomentCurves moment_estimate(const SwitchingLogisticModel& model,
                             const TrajectoryStudyOptions& options, double p) {
  model.validate();
  check_study(options);
  if (!(p > 0.0)) throw DegenerateInputError("moment exponent must be > 0");
  std::size_t n = checked_steps(options.horizon, options.scheme.dt);
  TransitionMatrix tp = transition_matrix(model.gen, options.scheme.dt);

  MomentCurves curves;
  curves.p = p;
  curves.times.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    curves.times[k] = static_cast<double>(k) * options.scheme.dt;
  curves.mean_pow.assign(n + 1, 0.0);
  curves.mean_inv_pow.assign(n + 1, 0.0);

  struct Curves {
    std::vector<double> pow, inv;
  };
  detail::for_each_trajectory_ordered<Curves>(
      options.trajectories, options.workers,
      [&](std::size_t j) {
        SchemePath path = single_level_path(model, options, tp, n, j);
        Curves c;
        c.pow.resize(n + 1);
        c.inv.resize(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
          c.pow[k] = std::pow(path.state[k], p);
          c.inv[k] = std::pow(path.state[k], -p);
        }
        return c;
      },
      [&](std::size_t, Curves&& c) {
        for (std::size_t k = 0; k <= n; ++k) {
          curves.mean_pow[k] += c.pow[k];
          curves.mean_inv_pow[k] += c.inv[k];
        }
      });
  double inv_m = 1.0 / static_cast<double>(options.trajectories);
  for (std::size_t k = 0; k <= n; ++k) {
    curves.mean_pow[k] *= inv_m;
    curves.mean_inv_pow[k] *= inv_m;
  }
  return curves;
}

BlowupReport blowup_frequency(const SwitchingLogisticModel& model,
                              const TrajectoryStudyOptions& options) {
  model.validate();
  check_study(options);
  std::size_t n = checked_steps(options.horizon, options.scheme.dt);
  TransitionMatrix p = transition_matrix(model.gen, options.scheme.dt);

  struct Outcome {
    bool blown = false;
    std::size_t step = 0;
  };
  BlowupReport report;
  report.trajectories = options.trajectories;
  detail::for_each_trajectory_ordered<Outcome>(
      options.trajectories, options.workers,
      [&](std::size_t j) {
        SchemePath path = single_level_path(model, options, p, n, j);
        return Outcome{path.blown_up, path.blowup_index};
      },
      [&](std::size_t, Outcome&& o) {
        if (o.blown) {
          ++report.blowups;
          report.first_steps.push_back(o.step);
        }
      });
  report.fraction = static_cast<double>(report.blowups) /
                    static_cast<double>(report.trajectories);
  return report;
}

SummaryStats summarize(const std::vector<double>& values) {
  if (values.empty()) throw EmptySampleError("empty sample set");
  SummaryStats stats;
  stats.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / static_cast<double>(stats.n);
  if (stats.n > 1) {
    double ss = 0.0;
    for (double v : values) {
      double d = v - stats.mean;
      ss += d * d;
    }
    stats.std_error = std::sqrt(ss / static_cast<double>(stats.n - 1) /
                                static_cast<double>(stats.n));
  }
  return stats;
}

}  // namespace swlog
