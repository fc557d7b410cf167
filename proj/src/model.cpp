#include "swlog/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "swlog/errors.hpp"

namespace swlog {

namespace {

std::string describe_index(const char* name, std::size_t i, double value) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s[%zu] = %.17g", name, i, value);
  return buf;
}

// Breadth-first reachability over positive off-diagonal rates.
// transpose = true walks the reversed graph.
std::vector<char> reachable_from(const Generator& gen, std::size_t start,
                                 bool transpose) {
  std::vector<char> seen(gen.m, 0);
  std::vector<std::size_t> queue{start};
  seen[start] = 1;
  while (!queue.empty()) {
    std::size_t i = queue.back();
    queue.pop_back();
    for (std::size_t j = 0; j < gen.m; ++j) {
      double rate = transpose ? gen.at(j, i) : gen.at(i, j);
      if (i != j && rate > 0.0 && !seen[j]) {
        seen[j] = 1;
        queue.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace

double RegimeParams::max_a() const {
  return a.empty() ? 0.0 : *std::max_element(a.begin(), a.end());
}

void RegimeParams::validate() const {
  std::size_t m = b.size();
  if (m == 0) throw DimensionMismatchError("regime coefficient vectors are empty");
  if (a.size() != m || sigma.size() != m)
    throw DimensionMismatchError("b, a, sigma must have equal lengths");
  for (std::size_t i = 0; i < m; ++i) {
    if (!(b[i] > 0.0) || !std::isfinite(b[i]))
      throw DimensionMismatchError(describe_index("b", i, b[i]) + " must be > 0");
    if (!(a[i] >= 0.0) || !std::isfinite(a[i]))
      throw DimensionMismatchError(describe_index("a", i, a[i]) + " must be >= 0");
    if (!(sigma[i] >= 0.0) || !std::isfinite(sigma[i]))
      throw DimensionMismatchError(describe_index("sigma", i, sigma[i]) +
                                   " must be >= 0");
  }
}

Generator Generator::from_rows(const std::vector<std::vector<double>>& rows) {
  Generator gen;
  gen.m = rows.size();
  gen.q.resize(gen.m * gen.m);
  for (std::size_t i = 0; i < gen.m; ++i) {
    if (rows[i].size() != gen.m)
      throw DimensionMismatchError("generator rows must form a square matrix");
    for (std::size_t j = 0; j < gen.m; ++j) gen.at(i, j) = rows[i][j];
  }
  gen.validate();
  return gen;
}

void Generator::validate() const {
  if (m == 0 || q.size() != m * m)
    throw DimensionMismatchError("generator must be a nonempty square matrix");
  double scale = 1.0;
  for (double v : q) {
    if (!std::isfinite(v))
      throw DimensionMismatchError("generator entries must be finite");
    scale = std::max(scale, std::abs(v));
  }
  for (std::size_t i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && at(i, j) < 0.0)
        throw DimensionMismatchError(
            describe_index("generator off-diagonal", i * m + j, at(i, j)) +
            " must be >= 0");
      row_sum += at(i, j);
    }
    if (std::abs(row_sum) > 1e-12 * scale)
      throw DimensionMismatchError(describe_index("generator row sum", i, row_sum) +
                                   " must be 0");
  }
}

bool Generator::irreducible() const {
  // Strong connectivity: every state reachable from state 0 in both the
  // forward and the reversed rate graph.
  if (m == 1) return true;
  auto fwd = reachable_from(*this, 0, false);
  auto bwd = reachable_from(*this, 0, true);
  for (std::size_t i = 0; i < m; ++i)
    if (!fwd[i] || !bwd[i]) return false;
  return true;
}

void SwitchingLogisticModel::validate() const {
  params.validate();
  gen.validate();
  if (params.num_regimes() != gen.m)
    throw DimensionMismatchError(
        "coefficient vectors and generator dimension disagree");
  if (!(x0 > 0.0) || !std::isfinite(x0))
    throw DimensionMismatchError("x0 must be a positive finite number");
  if (r0 < 0 || static_cast<std::size_t>(r0) >= gen.m)
    throw DimensionMismatchError("r0 must index a regime in [0, m)");
}

std::string to_string(DynamicsKind kind) {
  switch (kind) {
    case DynamicsKind::Permanent: return "Permanent";
    case DynamicsKind::Extinct: return "Extinct";
    case DynamicsKind::ExponentialGrowth: return "ExponentialGrowth";
    case DynamicsKind::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

std::vector<double> beta(const RegimeParams& params) {
  params.validate();
  std::vector<double> out(params.num_regimes());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = params.b[i] - 0.5 * params.sigma[i] * params.sigma[i];
  return out;
}

std::vector<double> stationary_distribution(const Generator& gen) {
  gen.validate();
  if (!gen.irreducible())
    throw NonIrreducibleError("generator is not irreducible");
  std::size_t m = gen.m;
  if (m == 1) return {1.0};

  // Solve pi * Gamma = 0 with the normalization sum(pi) = 1: transpose the
  // generator, replace the last equation by the all-ones row.
  std::vector<double> A(m * m);
  std::vector<double> rhs(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) A[i * m + j] = gen.at(j, i);
  for (std::size_t j = 0; j < m; ++j) A[(m - 1) * m + j] = 1.0;
  rhs[m - 1] = 1.0;

  double scale = 1.0;
  for (double v : gen.q) scale = std::max(scale, std::abs(v));

  // Gaussian elimination with partial pivoting; m <= 16 in practice.
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < m; ++row)
      if (std::abs(A[row * m + col]) > std::abs(A[pivot * m + col])) pivot = row;
    if (std::abs(A[pivot * m + col]) < 1e-13 * scale)
      throw SingularSystemError("stationary system has no usable pivot");
    if (pivot != col) {
      for (std::size_t j = 0; j < m; ++j)
        std::swap(A[pivot * m + j], A[col * m + j]);
      std::swap(rhs[pivot], rhs[col]);
    }
    for (std::size_t row = col + 1; row < m; ++row) {
      double f = A[row * m + col] / A[col * m + col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j < m; ++j) A[row * m + j] -= f * A[col * m + j];
      rhs[row] -= f * rhs[col];
    }
  }
  std::vector<double> pi(m);
  for (std::size_t row = m; row-- > 0;) {
    double acc = rhs[row];
    for (std::size_t j = row + 1; j < m; ++j) acc -= A[row * m + j] * pi[j];
    pi[row] = acc / A[row * m + row];
  }

  double sum = 0.0;
  for (double v : pi) sum += v;
  for (double& v : pi) v /= sum;
  for (double v : pi)
    if (!(v > 0.0))
      throw SingularSystemError("stationary distribution is not strictly positive");
  for (std::size_t j = 0; j < m; ++j) {
    double resid = 0.0;
    for (std::size_t i = 0; i < m; ++i) resid += pi[i] * gen.at(i, j);
    if (std::abs(resid) > 1e-10 * scale)
      throw SingularSystemError("stationary residual exceeds tolerance");
  }
  return pi;
}

double pi_weighted(std::span<const double> pi, std::span<const double> c) {
  if (pi.size() != c.size() || pi.empty())
    throw DimensionMismatchError("pi and the averaged vector must match in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) acc += pi[i] * c[i];
  return acc;
}

DynamicsClass classify(const SwitchingLogisticModel& model, double tol) {
  model.validate();
  if (!(tol >= 0.0))
    throw DegenerateInputError("classification tolerance must be >= 0");
  DynamicsClass result;
  result.pi = stationary_distribution(model.gen);
  auto betas = beta(model.params);
  result.pi_a = pi_weighted(result.pi, model.params.a);
  result.pi_beta = pi_weighted(result.pi, betas);
  if (std::abs(result.pi_beta) <= tol)
    result.kind = DynamicsKind::Indeterminate;
  else if (result.pi_beta < 0.0)
    result.kind = DynamicsKind::Extinct;
  else if (result.pi_a > tol)
    result.kind = DynamicsKind::Permanent;
  else
    result.kind = DynamicsKind::ExponentialGrowth;
  return result;
}

}  // namespace swlog
