#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "swlog/model.hpp"

namespace swlog {

// Purpose tags keep the random streams of one trajectory disjoint.
inline constexpr std::uint32_t kBrownianPurpose = 0;
inline constexpr std::uint32_t kChainPurpose = 1;

// Addresses one random stream. Streams with distinct (trajectory_index,
// purpose_tag) pairs are independent; the same spec always replays the
// same draws regardless of what other streams were consumed.
struct StreamSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trajectory_index = 0;
  std::uint32_t purpose_tag = 0;
};

// Counter-based generator (Philox 4x32-10). The master seed is the cipher
// key; trajectory index, purpose tag and block index partition the counter,
// so draws are a pure function of (spec, draw index).
class CounterRng {
 public:
  explicit CounterRng(const StreamSpec& spec);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double next_uniform();
  // Standard normal via the inverse CDF.
  double next_normal();

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint32_t purpose_;
  std::uint64_t block_ = 0;
  std::uint64_t pending_ = 0;
  bool has_pending_ = false;
};

// Inverse of the standard normal CDF, u in (0, 1). Accurate to about 1e-15
// relative over the full range (Wichura's rational approximations).
double normal_quantile(double u);

// Brownian increments on a uniform grid: increments[k] ~ Normal(0, dt_fine),
// independent across k and across streams.
struct BrownianLattice {
  double dt_fine = 0.0;
  std::vector<double> increments;
};

BrownianLattice brownian_lattice(double dt_fine, std::size_t n_fine,
                                 const StreamSpec& spec);

// Sums consecutive groups of `factor` increments, so a coarse path is driven
// by exactly the same noise as the fine path. Groups are added by balanced
// halving, which makes two-stage coarsening (by 2, then by 2) bitwise equal
// to one-stage coarsening by 4. Requires factor >= 1 dividing
// increments.size().
std::vector<double> coarsen(const BrownianLattice& lattice, std::size_t factor);

// One-step transition matrix, row-major. Rows are nonnegative and sum to 1
// within 1e-12.
struct TransitionMatrix {
  std::size_t m = 0;
  std::vector<double> p;

  double at(std::size_t i, std::size_t j) const { return p[i * m + j]; }
  double& at(std::size_t i, std::size_t j) { return p[i * m + j]; }
  void validate() const;
};

// exp(dt * Gamma) by scaling and squaring with a degree-17 Taylor kernel;
// the truncation error is below 1e-16 once the scaled norm is <= 1/2.
TransitionMatrix transition_matrix(const Generator& gen, double dt);

// Markov chain path on a uniform grid; states.size() == n + 1.
struct ChainPath {
  double dt = 0.0;
  std::vector<int> states;
};

// Smallest state j with u <= sum of the first j + 1 probabilities in `row`;
// a tie at a partial sum therefore falls to the lower state index.
int invert_cumulative(const TransitionMatrix& p, int row, double u);

// Samples r(0), r(dt), ..., r(n*dt) by inverting the cumulative row sums of
// P with one uniform per step. P must be the one-step matrix for the grid
// step dt.
ChainPath sample_chain(const TransitionMatrix& p, double dt, int r0,
                       std::size_t n, const StreamSpec& spec);

// Chain states at every `factor`-th grid point (shares the fine chain's law
// because P(dt)^factor = P(factor * dt)).
std::vector<int> stride_states(const ChainPath& chain, std::size_t factor);

}  // namespace swlog
