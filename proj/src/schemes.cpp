#include "swlog/schemes.hpp"

#include <cmath>
#include <limits>

#include "swlog/errors.hpp"

namespace swlog {

namespace {

void check_arrays(const SwitchingLogisticModel& model,
                  std::span<const double> increments,
                  std::span<const int> regimes) {
  model.validate();
  if (regimes.size() != increments.size() + 1)
    throw LengthMismatchError("regime path must be one longer than the increments");
  std::size_t m = model.num_regimes();
  for (int r : regimes)
    if (r < 0 || static_cast<std::size_t>(r) >= m)
      throw DimensionMismatchError("regime path contains an out-of-range state");
}

void reserve_path(SchemePath& path, std::size_t n) {
  path.times.reserve(n + 1);
  path.log_state.reserve(n + 1);
  path.state.reserve(n + 1);
  path.regimes.reserve(n + 1);
  path.cap_hit.reserve(n + 1);
}

// Shared body of the log-scale schemes; capped = false removes the ceiling.
SchemePath log_em(const SwitchingLogisticModel& model, const SchemeConfig& config,
                  std::span<const double> increments, std::span<const int> regimes,
                  bool capped) {
  check_arrays(model, increments, regimes);
  config.validate(model.x0, model.params.max_a());
  const std::vector<double> betas = beta(model.params);
  const double cap = truncation_cap(config);
  const double dt = config.dt;

  SchemePath path;
  path.dt = dt;
  std::size_t n = increments.size();
  reserve_path(path, n);
  double z = std::log(model.x0);  // the initial state is never clamped
  path.times.push_back(0.0);
  path.log_state.push_back(z);
  path.state.push_back(std::exp(z));
  path.regimes.push_back(regimes[0]);
  path.cap_hit.push_back(0);

  for (std::size_t k = 0; k < n; ++k) {
    int i = regimes[k];
    double drifted = z +
                     (betas[i] - model.params.a[i] * std::exp(z)) * dt +
                     model.params.sigma[i] * increments[k];
    bool hit = capped && drifted > cap;
    z = hit ? cap : drifted;
    double x = std::exp(z);
    if (!std::isfinite(z) || !std::isfinite(x))
      throw NonFiniteStateError("log-scale state left the finite range");
    path.times.push_back(static_cast<double>(k + 1) * dt);
    path.log_state.push_back(z);
    path.state.push_back(x);
    path.regimes.push_back(regimes[k + 1]);
    path.cap_hit.push_back(hit ? 1 : 0);
    if (hit) ++path.cap_hits;
  }
  return path;
}

}  // namespace

void SchemeConfig::validate(double x0, double max_a) const {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ConfigError("scheme.dt", "must be positive and finite");
  double floor = x0 > 1.0 ? x0 : 1.0;
  if (!(cap_constant >= floor) || !std::isfinite(cap_constant))
    throw ConfigError("scheme.cap_constant", "must be >= max(x0, 1)");
  if (theta == kUnboundedTheta) {
    if (max_a > 0.0)
      throw ConfigError("scheme.theta",
                        "unbounded theta requires every a(i) to be 0");
    return;
  }
  if (!(theta > 0.0) || !(theta <= 0.5))
    throw ConfigError("scheme.theta", "must lie in (0, 1/2] or be unbounded");
}

double truncation_cap(const SchemeConfig& config) {
  if (config.theta == kUnboundedTheta)
    return std::numeric_limits<double>::infinity();
  return std::log(config.cap_constant) - config.theta * std::log(config.dt);
}

SchemePath truncated_log_em(const SwitchingLogisticModel& model,
                            const SchemeConfig& config,
                            std::span<const double> increments,
                            std::span<const int> regimes) {
  return log_em(model, config, increments, regimes, true);
}

SchemePath plain_log_em(const SwitchingLogisticModel& model,
                        const SchemeConfig& config,
                        std::span<const double> increments,
                        std::span<const int> regimes) {
  return log_em(model, config, increments, regimes, false);
}

SchemePath classical_em(const SwitchingLogisticModel& model,
                        const SchemeConfig& config,
                        std::span<const double> increments,
                        std::span<const int> regimes) {
  check_arrays(model, increments, regimes);
  if (!(config.dt > 0.0) || !std::isfinite(config.dt))
    throw ConfigError("scheme.dt", "must be positive and finite");
  const double dt = config.dt;

  SchemePath path;
  path.dt = dt;
  std::size_t n = increments.size();
  reserve_path(path, n);
  double x = model.x0;
  path.times.push_back(0.0);
  path.log_state.push_back(std::log(std::abs(x)));
  path.state.push_back(x);
  path.regimes.push_back(regimes[0]);
  path.cap_hit.push_back(0);

  for (std::size_t k = 0; k < n; ++k) {
    int i = regimes[k];
    x = x + x * ((model.params.b[i] - model.params.a[i] * x) * dt +
                 model.params.sigma[i] * increments[k]);
    if (std::isnan(x))
      throw NonFiniteStateError("classical Euler state became NaN");
    path.times.push_back(static_cast<double>(k + 1) * dt);
    path.log_state.push_back(x == 0.0
                                 ? -std::numeric_limits<double>::infinity()
                                 : std::log(std::abs(x)));
    path.state.push_back(x);
    path.regimes.push_back(regimes[k + 1]);
    path.cap_hit.push_back(0);
    if (std::abs(x) > kBlowupThreshold) {
      path.blown_up = true;
      path.blowup_index = k + 1;
      break;
    }
  }
  return path;
}

SchemePath exact_reference(const SwitchingLogisticModel& model,
                           const BrownianLattice& lattice,
                           const ChainPath& chain) {
  model.validate();
  if (chain.states.size() != lattice.increments.size() + 1)
    throw LengthMismatchError("chain must be one longer than the increments");
  if (chain.dt != lattice.dt_fine)
    throw GridMismatchError("chain and lattice live on different grids");
  const std::vector<double> betas = beta(model.params);
  const double dt = lattice.dt_fine;

  SchemePath path;
  path.dt = dt;
  std::size_t n = lattice.increments.size();
  reserve_path(path, n);

  // Running log of the undamped factor x0 exp(A + S) and left-point sum of
  // the damping integral x0 D. Written so that with a == 0 the recursion
  // reproduces the plain log-scale scheme bit for bit.
  double growth_log = std::log(model.x0);
  double damping = 0.0;
  path.times.push_back(0.0);
  path.log_state.push_back(growth_log);
  path.state.push_back(std::exp(growth_log));
  path.regimes.push_back(chain.states[0]);
  path.cap_hit.push_back(0);

  for (std::size_t k = 0; k < n; ++k) {
    int i = chain.states[k];
    damping += model.params.a[i] * std::exp(growth_log) * dt;
    growth_log = growth_log + betas[i] * dt +
                 model.params.sigma[i] * lattice.increments[k];
    double z = growth_log - std::log1p(damping);
    double x = std::exp(z);
    if (!std::isfinite(z) || !std::isfinite(x))
      throw NonFiniteStateError("reference state left the finite range");
    path.times.push_back(static_cast<double>(k + 1) * dt);
    path.log_state.push_back(z);
    path.state.push_back(x);
    path.regimes.push_back(chain.states[k + 1]);
    path.cap_hit.push_back(0);
  }
  return path;
}

}  // namespace swlog
