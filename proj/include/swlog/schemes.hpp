#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "swlog/model.hpp"
#include "swlog/stochastic.hpp"

namespace swlog {

// theta == kUnboundedTheta disables the cap; legal only when every a(i) = 0.
inline constexpr double kUnboundedTheta = std::numeric_limits<double>::infinity();

// Classical Euler paths halt once |X| exceeds this threshold.
inline constexpr double kBlowupThreshold = 1e150;

// Step size and cap parameters shared by the log-scale schemes.
// Invariants: dt > 0; cap_constant >= max(x0, 1); theta in (0, 1/2] or
// kUnboundedTheta when max a(i) = 0.
struct SchemeConfig {
  double dt = 0.0;
  double cap_constant = 10.0;
  double theta = 0.4;

  void validate(double x0, double max_a) const;
};

// Discrete path on the grid t_k = k * dt. For the log-scale schemes
// state = exp(log_state) and the cap flag marks steps where the truncation
// was active. Classical Euler paths store the signed state, log_state holds
// log|state|, and blow-up halts the path at blowup_index.
struct SchemePath {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> log_state;
  std::vector<double> state;
  std::vector<int> regimes;
  std::vector<std::uint8_t> cap_hit;
  std::size_t cap_hits = 0;
  bool blown_up = false;
  std::size_t blowup_index = 0;
};

// Log-state ceiling log(K * dt^-theta); +infinity when theta is unbounded.
double truncation_cap(const SchemeConfig& config);

// Truncated log-scale Euler step: the drifted log state is clamped at the
// cap, so every state lies in (0, K * dt^-theta].
SchemePath truncated_log_em(const SwitchingLogisticModel& model,
                            const SchemeConfig& config,
                            std::span<const double> increments,
                            std::span<const int> regimes);

// Same recursion without the cap.
SchemePath plain_log_em(const SwitchingLogisticModel& model,
                        const SchemeConfig& config,
                        std::span<const double> increments,
                        std::span<const int> regimes);

// Euler step on the state itself; kept as the blow-up witness.
SchemePath classical_em(const SwitchingLogisticModel& model,
                        const SchemeConfig& config,
                        std::span<const double> increments,
                        std::span<const int> regimes);

// Closed-form solution evaluated with left-point sums on the lattice grid:
//   x(t) = x0 exp(A + S) / (1 + x0 D),
// with A, S, D the running drift, noise and damping integrals; the regime is
// held constant within each grid cell. Serves as the strong-error reference.
SchemePath exact_reference(const SwitchingLogisticModel& model,
                           const BrownianLattice& lattice,
                           const ChainPath& chain);

}  // namespace swlog
