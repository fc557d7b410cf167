#include "swlog/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "swlog/errors.hpp"

namespace swlog {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

struct PhiloxBlock {
  std::uint32_t c0, c1, c2, c3;
};

inline PhiloxBlock philox_round(PhiloxBlock c, std::uint32_t k0, std::uint32_t k1) {
  std::uint64_t p0 = std::uint64_t(kPhiloxM0) * c.c0;
  std::uint64_t p1 = std::uint64_t(kPhiloxM1) * c.c2;
  PhiloxBlock out;
  out.c0 = static_cast<std::uint32_t>(p1 >> 32) ^ c.c1 ^ k0;
  out.c1 = static_cast<std::uint32_t>(p1);
  out.c2 = static_cast<std::uint32_t>(p0 >> 32) ^ c.c3 ^ k1;
  out.c3 = static_cast<std::uint32_t>(p0);
  return out;
}

PhiloxBlock philox10(PhiloxBlock c, std::uint32_t k0, std::uint32_t k1) {
  for (int round = 0; round < 10; ++round) {
    c = philox_round(c, k0, k1);
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return c;
}

inline double u64_to_open_unit(std::uint64_t x) {
  // 53 significand bits plus a half-ulp offset keeps the value in (0, 1).
  return (static_cast<double>(x >> 11) + 0.5) * 0x1p-53;
}

}  // namespace

CounterRng::CounterRng(const StreamSpec& spec)
    : key_{static_cast<std::uint32_t>(spec.master_seed),
           static_cast<std::uint32_t>(spec.master_seed >> 32)},
      stream_(spec.trajectory_index),
      purpose_(spec.purpose_tag) {}

std::uint64_t CounterRng::next_u64() {
  if (has_pending_) {
    has_pending_ = false;
    return pending_;
  }
  if (block_ > std::numeric_limits<std::uint32_t>::max())
    throw NumericalOverflowError("random stream exhausted its counter range");
  PhiloxBlock ctr{static_cast<std::uint32_t>(block_), purpose_,
                  static_cast<std::uint32_t>(stream_),
                  static_cast<std::uint32_t>(stream_ >> 32)};
  PhiloxBlock out = philox10(ctr, key_[0], key_[1]);
  ++block_;
  pending_ = (std::uint64_t(out.c2) << 32) | out.c3;
  has_pending_ = true;
  return (std::uint64_t(out.c0) << 32) | out.c1;
}

double CounterRng::next_uniform() { return u64_to_open_unit(next_u64()); }

double CounterRng::next_normal() { return normal_quantile(next_uniform()); }

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw DegenerateInputError("normal quantile requires u in (0, 1)");
  double q = u - 0.5;
  if (std::abs(q) <= 0.425) {
    double r = 0.180625 - q * q;
    double num = (((((((2.5090809287301226727e3 * r +
                        3.3430575583588128105e4) * r +
                       6.7265770927008700853e4) * r +
                      4.5921953931549871457e4) * r +
                     1.3731693765509461125e4) * r +
                    1.9715909503065514427e3) * r +
                   1.3314166789178437745e2) * r +
                  3.3871328727963666080e0);
    double den = (((((((5.2264952788528545610e3 * r +
                        2.8729085735721942674e4) * r +
                       3.9307895800092710610e4) * r +
                      2.1213794301586595867e4) * r +
                     5.3941960214247511077e3) * r +
                    6.8718700749205790830e2) * r +
                   4.2313330701600911252e1) * r +
                  1.0);
    return q * num / den;
  }
  double r = q < 0.0 ? u : 1.0 - u;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    double num = (((((((7.74545014278341407640e-4 * r +
                        2.27238449892691845833e-2) * r +
                       2.41780725177450611770e-1) * r +
                      1.27045825245236838258e0) * r +
                     3.64784832476320460504e0) * r +
                    5.76949722146069140550e0) * r +
                   4.63033784615654529590e0) * r +
                  1.42343711074968357734e0);
    double den = (((((((1.05075007164441684324e-9 * r +
                        5.47593808499534494600e-4) * r +
                       1.51986665636164571966e-2) * r +
                      1.48103976427480074590e-1) * r +
                     6.89767334985100004550e-1) * r +
                    1.67638483018380384940e0) * r +
                   2.05319162663775882187e0) * r +
                  1.0);
    value = num / den;
  } else {
    r -= 5.0;
    double num = (((((((2.01033439929228813265e-7 * r +
                        2.71155556874348757815e-5) * r +
                       1.24266094738807843860e-3) * r +
                      2.65321895265761230930e-2) * r +
                     2.96560571828504891230e-1) * r +
                    1.78482653991729133580e0) * r +
                   5.46378491116411436990e0) * r +
                  6.65790464350110377720e0);
    double den = (((((((2.04426310338993978564e-15 * r +
                        1.42151175831644588870e-7) * r +
                       1.84631831751005468180e-5) * r +
                      7.86869131145613259100e-4) * r +
                     1.48753612908506148525e-2) * r +
                    1.36929880922735805310e-1) * r +
                   5.99832206555887937690e-1) * r +
                  1.0);
    value = num / den;
  }
  return q < 0.0 ? -value : value;
}

BrownianLattice brownian_lattice(double dt_fine, std::size_t n_fine,
                                 const StreamSpec& spec) {
  if (!(dt_fine > 0.0) || !std::isfinite(dt_fine))
    throw DegenerateInputError("lattice step must be positive and finite");
  BrownianLattice lattice;
  lattice.dt_fine = dt_fine;
  lattice.increments.resize(n_fine);
  CounterRng rng(spec);
  double scale = std::sqrt(dt_fine);
  for (std::size_t k = 0; k < n_fine; ++k)
    lattice.increments[k] = scale * rng.next_normal();
  return lattice;
}

namespace {

// Balanced halving sum. The grouping is fixed, so coarsening by 4 adds the
// same numbers in the same order as coarsening by 2 twice; two-level
// coarsening therefore reproduces one-shot coarsening bit for bit on the
// dyadic ladders used by the convergence studies.
double group_sum(const double* values, std::size_t n) {
  if (n == 1) return values[0];
  std::size_t half = n / 2;
  return group_sum(values, half) + group_sum(values + half, n - half);
}

}  // namespace

std::vector<double> coarsen(const BrownianLattice& lattice, std::size_t factor) {
  if (factor == 0 || lattice.increments.size() % factor != 0)
    throw NonDivisorError("coarsening factor must divide the lattice size");
  std::size_t n_coarse = lattice.increments.size() / factor;
  std::vector<double> out(n_coarse);
  for (std::size_t k = 0; k < n_coarse; ++k)
    out[k] = group_sum(lattice.increments.data() + k * factor, factor);
  return out;
}

void TransitionMatrix::validate() const {
  if (m == 0 || p.size() != m * m)
    throw DimensionMismatchError("transition matrix must be square and nonempty");
  for (std::size_t i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (at(i, j) < 0.0)
        throw DegenerateInputError("transition probabilities must be >= 0");
      row_sum += at(i, j);
    }
    if (std::abs(row_sum - 1.0) > 1e-12)
      throw DegenerateInputError("transition rows must sum to 1");
  }
}

namespace {

// out = lhs * rhs for row-major m x m matrices.
void mat_mul(std::size_t m, const std::vector<double>& lhs,
             const std::vector<double>& rhs, std::vector<double>& out) {
  out.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      double v = lhs[i * m + k];
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i * m + j] += v * rhs[k * m + j];
    }
}

}  // namespace

TransitionMatrix transition_matrix(const Generator& gen, double dt) {
  gen.validate();
  if (!(dt >= 0.0) || !std::isfinite(dt))
    throw DegenerateInputError("transition step must be >= 0 and finite");
  std::size_t m = gen.m;

  std::vector<double> A(m * m);
  double norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      A[i * m + j] = dt * gen.at(i, j);
      row += std::abs(A[i * m + j]);
    }
    norm = std::max(norm, row);
  }

  int squarings = 0;
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
    if (squarings > 63)
      throw NumericalOverflowError("transition step too large for the scaling budget");
  }
  double scale = std::ldexp(1.0, -squarings);
  for (double& v : A) v *= scale;

  // Degree-17 Taylor sum; remainder < 1e-16 for scaled norm <= 1/2.
  std::vector<double> sum(m * m, 0.0), term(m * m, 0.0), next;
  for (std::size_t i = 0; i < m; ++i) sum[i * m + i] = term[i * m + i] = 1.0;
  for (int n = 1; n <= 17; ++n) {
    mat_mul(m, term, A, next);
    double inv = 1.0 / n;
    for (double& v : next) v *= inv;
    term = next;
    for (std::size_t i = 0; i < m * m; ++i) sum[i] += term[i];
  }
  for (int s = 0; s < squarings; ++s) {
    mat_mul(m, sum, sum, next);
    sum.swap(next);
  }

  TransitionMatrix p;
  p.m = m;
  p.p = std::move(sum);
  // Entries of exp(dt * Gamma) are nonnegative; squash rounding dust.
  for (double& v : p.p)
    if (v < 0.0 && v > -1e-12) v = 0.0;
  p.validate();
  return p;
}

int invert_cumulative(const TransitionMatrix& p, int row, double u) {
  double cum = 0.0;
  for (std::size_t j = 0; j < p.m; ++j) {
    cum += p.at(static_cast<std::size_t>(row), j);
    if (u <= cum) return static_cast<int>(j);
  }
  // Row sums can round to slightly below 1; the last state absorbs the gap.
  return static_cast<int>(p.m) - 1;
}

ChainPath sample_chain(const TransitionMatrix& p, double dt, int r0,
                       std::size_t n, const StreamSpec& spec) {
  p.validate();
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw DegenerateInputError("chain step must be positive and finite");
  if (r0 < 0 || static_cast<std::size_t>(r0) >= p.m)
    throw DimensionMismatchError("initial regime must index a chain state");
  ChainPath path;
  path.dt = dt;
  path.states.resize(n + 1);
  path.states[0] = r0;
  CounterRng rng(spec);
  for (std::size_t k = 0; k < n; ++k)
    path.states[k + 1] = invert_cumulative(p, path.states[k], rng.next_uniform());
  return path;
}

std::vector<int> stride_states(const ChainPath& chain, std::size_t factor) {
  std::size_t n = chain.states.size() - 1;
  if (factor == 0 || n % factor != 0)
    throw NonDivisorError("stride factor must divide the chain length");
  std::vector<int> out(n / factor + 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = chain.states[k * factor];
  return out;
}

}  // namespace swlog
