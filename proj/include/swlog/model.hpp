#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace swlog {

// Per-regime coefficients of the logistic diffusion
//   dx(t) = x(t) [ (b(r) - a(r) x(t)) dt + sigma(r) dB(t) ].
// Invariants: equal lengths m >= 1, b(i) > 0, a(i) >= 0, sigma(i) >= 0.
struct RegimeParams {
  std::vector<double> b;
  std::vector<double> a;
  std::vector<double> sigma;

  std::size_t num_regimes() const { return b.size(); }
  double max_a() const;
  void validate() const;
};

// Generator of the driving continuous-time Markov chain, row-major m x m.
// Invariants: off-diagonal entries >= 0, each row sums to 0 within 1e-12
// (relative to the matrix scale).
struct Generator {
  std::size_t m = 0;
  std::vector<double> q;  // row-major, q[i*m + j]

  double at(std::size_t i, std::size_t j) const { return q[i * m + j]; }
  double& at(std::size_t i, std::size_t j) { return q[i * m + j]; }

  static Generator from_rows(const std::vector<std::vector<double>>& rows);
  void validate() const;
  // True when every state reaches every other through positive rates.
  bool irreducible() const;
};

// Full model: coefficients, switching generator, initial data.
// Invariants: x0 > 0, 0 <= r0 < m.
struct SwitchingLogisticModel {
  RegimeParams params;
  Generator gen;
  double x0 = 1.0;
  int r0 = 0;

  std::size_t num_regimes() const { return gen.m; }
  void validate() const;
};

enum class DynamicsKind { Permanent, Extinct, ExponentialGrowth, Indeterminate };

std::string to_string(DynamicsKind kind);

// Long-run classification with the stationary averages that decide it.
struct DynamicsClass {
  DynamicsKind kind = DynamicsKind::Indeterminate;
  std::vector<double> pi;
  double pi_a = 0.0;
  double pi_beta = 0.0;
};

// Effective log-scale drift beta(i) = b(i) - sigma(i)^2 / 2 per regime.
std::vector<double> beta(const RegimeParams& params);

// Stationary distribution pi of an irreducible generator: the unique
// probability vector with pi * Gamma = 0. Postconditions: entries strictly
// positive, sum 1 within 1e-12, residual |pi * Gamma|_inf <= 1e-10.
std::vector<double> stationary_distribution(const Generator& gen);

// Stationary average sum_i pi(i) c(i).
double pi_weighted(std::span<const double> pi, std::span<const double> c);

// Classification by the signs of pi*a and pi*beta:
//   Permanent          pi*a > tol and pi*beta > tol
//   Extinct            pi*beta < -tol
//   ExponentialGrowth  pi*a <= tol and pi*beta > tol
//   Indeterminate      |pi*beta| <= tol
double constexpr kDefaultClassifyTol = 1e-12;
DynamicsClass classify(const SwitchingLogisticModel& model,
                       double tol = kDefaultClassifyTol);

}  // namespace swlog
