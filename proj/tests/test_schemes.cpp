#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <doctest.h>

#include "support.hpp"
#include "swlog/errors.hpp"
#include "swlog/schemes.hpp"
#include "swlog/stochastic.hpp"

using swlog::BrownianLattice;
using swlog::ChainPath;
using swlog::SchemeConfig;
using swlog::SchemePath;
using swlog::SwitchingLogisticModel;

namespace {

ChainPath flat_chain(double dt, std::size_t n, int state = 0) {
  ChainPath chain;
  chain.dt = dt;
  chain.states.assign(n + 1, state);
  return chain;
}

}  // namespace

TEST_SUITE("schemes") {

TEST_CASE("truncation cap matches log(K dt^-theta)") {
  CHECK(swlog::truncation_cap({0.02, 10.0, 0.4}) ==
        doctest::Approx(3.8673942951653044).epsilon(1e-12));
  CHECK(swlog::truncation_cap({0.02, 25.0, 0.4}) ==
        doctest::Approx(4.7836850270394589).epsilon(1e-12));
  CHECK(swlog::truncation_cap({0.5, 1.0, 0.5}) ==
        doctest::Approx(0.34657359027997264).epsilon(1e-12));
  // dt = 1 makes the theta term vanish exactly.
  CHECK(swlog::truncation_cap({1.0, 7.0, 0.3}) == std::log(7.0));
  CHECK(swlog::truncation_cap({0.02, 10.0, swlog::kUnboundedTheta}) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("scheme config validation pins the offending key") {
  SchemeConfig good{0.1, 10.0, 0.4};
  CHECK_NOTHROW(good.validate(2.0, 0.5));

  auto key_of = [](const SchemeConfig& config, double x0, double max_a) {
    try {
      config.validate(x0, max_a);
    } catch (const swlog::ConfigError& e) {
      return e.key();
    }
    return std::string("none");
  };
  CHECK(key_of({0.0, 10.0, 0.4}, 1.0, 0.0) == "scheme.dt");
  CHECK(key_of({-0.1, 10.0, 0.4}, 1.0, 0.0) == "scheme.dt");
  CHECK(key_of({0.1, 0.5, 0.4}, 0.2, 0.0) == "scheme.cap_constant");
  CHECK(key_of({0.1, 10.0, 0.4}, 25.0, 0.0) == "scheme.cap_constant");
  CHECK(key_of({0.1, 10.0, 0.0}, 1.0, 0.0) == "scheme.theta");
  CHECK(key_of({0.1, 10.0, 0.7}, 1.0, 0.0) == "scheme.theta");
  CHECK(key_of({0.1, 10.0, swlog::kUnboundedTheta}, 1.0, 0.5) == "scheme.theta");
  CHECK_NOTHROW(
      SchemeConfig{0.1, 10.0, swlog::kUnboundedTheta}.validate(1.0, 0.0));
  CHECK_NOTHROW(SchemeConfig{0.1, 10.0, 0.5}.validate(1.0, 0.5));
}

TEST_CASE("one truncated step reproduces the hand computation") {
  SwitchingLogisticModel model = testsupport::scalar_model(2.0, 1.8, 0.8, 1.0);
  SchemeConfig config{0.5, 1.0, 0.5};
  std::vector<int> regimes{0, 0};

  SUBCASE("below the cap") {
    std::vector<double> increments{0.1};
    SchemePath path = swlog::truncated_log_em(model, config, increments, regimes);
    REQUIRE(path.log_state.size() == 2);
    CHECK(path.log_state[0] == 0.0);
    // z1 = (beta - a) dt + sigma dB = (1.68 - 1.8) 0.5 + 0.08
    CHECK(path.log_state[1] == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(path.state[1] == doctest::Approx(std::exp(0.02)).epsilon(1e-12));
    CHECK(path.cap_hits == 0);
    CHECK(path.cap_hit[1] == 0);
    CHECK(path.times == std::vector<double>{0.0, 0.5});
    CHECK_FALSE(path.blown_up);
  }

  SUBCASE("forced onto the cap") {
    std::vector<double> increments{1.0};
    SchemePath path = swlog::truncated_log_em(model, config, increments, regimes);
    // Drifted value 0.74 exceeds the cap log(1) + 0.5 log 2.
    CHECK(path.log_state[1] == swlog::truncation_cap(config));
    CHECK(path.log_state[1] ==
          doctest::Approx(0.34657359027997264).epsilon(1e-12));
    CHECK(path.cap_hits == 1);
    CHECK(path.cap_hit[1] == 1);

    SchemePath plain = swlog::plain_log_em(model, config, increments, regimes);
    CHECK(plain.log_state[1] == doctest::Approx(0.74).epsilon(1e-12));
    CHECK(plain.cap_hits == 0);
  }
}

TEST_CASE("one plain step reproduces the hand computation") {
  SwitchingLogisticModel model = testsupport::single_regime_model();
  SchemeConfig config{0.1, 50.0, 0.5};
  std::vector<double> increments{0.0};
  std::vector<int> regimes{0, 0};
  SchemePath path = swlog::plain_log_em(model, config, increments, regimes);
  // z1 = log 50 + (0.455 - 0.8 * 50) * 0.1
  CHECK(path.log_state[1] ==
        doctest::Approx(std::log(50.0) - 3.9545).epsilon(1e-12));
}

TEST_CASE("truncated and plain recursions coincide while the cap is idle") {
  SUBCASE("unbounded theta with a == 0") {
    SwitchingLogisticModel model = testsupport::scalar_model(0.5, 0.0, 0.3, 2.0);
    SchemeConfig config{0.125, 10.0, swlog::kUnboundedTheta};
    BrownianLattice lattice = swlog::brownian_lattice(0.125, 64, {17, 0, 0});
    std::vector<int> regimes(65, 0);
    SchemePath capped =
        swlog::truncated_log_em(model, config, lattice.increments, regimes);
    SchemePath plain =
        swlog::plain_log_em(model, config, lattice.increments, regimes);
    CHECK(capped.cap_hits == 0);
    CHECK(capped.log_state == plain.log_state);
    CHECK(capped.state == plain.state);
  }

  SUBCASE("finite cap far above the path") {
    SwitchingLogisticModel model = testsupport::extinct_switching_model();
    SchemeConfig config{0.02, 1e6, 0.5};
    BrownianLattice lattice = swlog::brownian_lattice(0.02, 100, {23, 1, 0});
    auto p = swlog::transition_matrix(model.gen, 0.02);
    ChainPath chain = swlog::sample_chain(p, 0.02, model.r0, 100, {23, 1, 1});
    SchemePath capped =
        swlog::truncated_log_em(model, config, lattice.increments, chain.states);
    SchemePath plain =
        swlog::plain_log_em(model, config, lattice.increments, chain.states);
    CHECK(capped.cap_hits == 0);
    CHECK(capped.log_state == plain.log_state);
  }
}

TEST_CASE("noise-free recursions track the deterministic flow") {
  SUBCASE("pure exponential growth") {
    SwitchingLogisticModel model = testsupport::scalar_model(0.3, 0.0, 0.0, 2.0);
    SchemeConfig config{0.05, 10.0, 0.5};
    std::vector<double> increments(200, 0.0);
    std::vector<int> regimes(201, 0);
    SchemePath path = swlog::truncated_log_em(model, config, increments, regimes);
    for (std::size_t k = 0; k <= 200; ++k)
      CHECK(path.state[k] ==
            doctest::Approx(2.0 * std::exp(0.3 * path.times[k])).epsilon(1e-12));
  }

  SUBCASE("logistic saturation at b / a") {
    SwitchingLogisticModel model = testsupport::scalar_model(1.0, 2.0, 0.0, 0.1);
    SchemeConfig config{0.01, 10.0, 0.5};
    std::vector<double> increments(3000, 0.0);
    std::vector<int> regimes(3001, 0);
    SchemePath path = swlog::truncated_log_em(model, config, increments, regimes);
    for (std::size_t k = 1; k <= 3000; ++k)
      CHECK(path.state[k] >= path.state[k - 1]);  // monotone approach from below
    CHECK(path.state.back() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(path.cap_hits == 0);
  }
}

TEST_CASE("classical euler compounds multiplicatively and can cross zero") {
  SUBCASE("noise-free compounding") {
    SwitchingLogisticModel model = testsupport::scalar_model(0.5, 0.0, 0.0, 3.0);
    SchemeConfig config{0.1, 10.0, 0.5};
    std::vector<double> increments(50, 0.0);
    std::vector<int> regimes(51, 0);
    SchemePath path = swlog::classical_em(model, config, increments, regimes);
    double expected = 3.0;
    for (std::size_t k = 1; k <= 50; ++k) {
      expected *= 1.05;
      CHECK(path.state[k] == doctest::Approx(expected).epsilon(1e-12));
      CHECK(path.log_state[k] ==
            doctest::Approx(std::log(expected)).epsilon(1e-10));
    }
    CHECK_FALSE(path.blown_up);
  }

  SUBCASE("a large negative shock flips the sign") {
    SwitchingLogisticModel model = testsupport::scalar_model(0.5, 0.8, 1.0, 1.0);
    SchemeConfig config{0.25, 10.0, 0.5};
    std::vector<double> increments{-6.0};
    std::vector<int> regimes{0, 0};
    SchemePath path = swlog::classical_em(model, config, increments, regimes);
    // x1 = 1 + ((0.5 - 0.8) 0.25 - 6) = -5.075
    CHECK(path.state[1] == doctest::Approx(-5.075).epsilon(1e-12));
    CHECK(path.log_state[1] == doctest::Approx(std::log(5.075)).epsilon(1e-12));
    CHECK_FALSE(path.blown_up);
  }

  SUBCASE("a sign flip feeds quadratic blow-up") {
    SwitchingLogisticModel model = testsupport::scalar_model(0.5, 0.8, 1.0, 1.0);
    SchemeConfig config{0.25, 10.0, 0.5};
    std::vector<double> increments(20, 0.0);
    increments[0] = -6.0;
    std::vector<int> regimes(21, 0);
    SchemePath path = swlog::classical_em(model, config, increments, regimes);
    REQUIRE(path.blown_up);
    CHECK(path.blowup_index <= 20);
    CHECK(path.state.size() == path.blowup_index + 1);
    CHECK(path.times.size() == path.blowup_index + 1);
    CHECK(std::abs(path.state.back()) > swlog::kBlowupThreshold);
    // Once negative, the quadratic term keeps the state negative.
    for (std::size_t k = 1; k < path.state.size(); ++k)
      CHECK(path.state[k] < 0.0);
  }
}

TEST_CASE("non-finite updates are reported, not propagated") {
  SwitchingLogisticModel model = testsupport::scalar_model(0.5, 0.8, 1.0, 1.0);
  SchemeConfig config{0.25, 10.0, 0.5};
  std::vector<int> regimes{0, 0};
  std::vector<double> nan_inc{std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(swlog::truncated_log_em(model, config, nan_inc, regimes),
                  swlog::NonFiniteStateError);
  CHECK_THROWS_AS(swlog::classical_em(model, config, nan_inc, regimes),
                  swlog::NonFiniteStateError);

  // A huge shock overflows exp for the uncapped recursion.
  SwitchingLogisticModel free_model =
      testsupport::scalar_model(0.5, 0.0, 1.0, 1.0);
  std::vector<double> huge{1e300};
  CHECK_THROWS_AS(swlog::plain_log_em(free_model, config, huge, regimes),
                  swlog::NonFiniteStateError);
}

TEST_CASE("array shape errors name the mismatch") {
  SwitchingLogisticModel model = testsupport::scalar_model(0.5, 0.8, 1.0, 1.0);
  SchemeConfig config{0.25, 10.0, 0.5};
  std::vector<double> increments{0.0, 0.0};
  std::vector<int> too_short{0, 0};
  CHECK_THROWS_AS(swlog::truncated_log_em(model, config, increments, too_short),
                  swlog::LengthMismatchError);
  std::vector<int> bad_state{0, 1, 0};
  CHECK_THROWS_AS(swlog::truncated_log_em(model, config, increments, bad_state),
                  swlog::DimensionMismatchError);
}

TEST_CASE("truncated states stay inside (0, K dt^-theta]") {
  SwitchingLogisticModel model = testsupport::extinct_switching_model();
  SchemeConfig config{0.02, 25.0, 0.4};
  double bound = std::exp(swlog::truncation_cap(config));
  auto p = swlog::transition_matrix(model.gen, 0.02);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    BrownianLattice lattice =
        swlog::brownian_lattice(0.02, 500, {seed, 0, swlog::kBrownianPurpose});
    ChainPath chain =
        swlog::sample_chain(p, 0.02, model.r0, 500, {seed, 0, swlog::kChainPurpose});
    SchemePath path =
        swlog::truncated_log_em(model, config, lattice.increments, chain.states);
    std::size_t flagged = 0;
    for (std::size_t k = 0; k < path.state.size(); ++k) {
      CHECK(path.state[k] > 0.0);
      if (k >= 1) CHECK(path.state[k] <= bound * (1.0 + 1e-15));
      flagged += path.cap_hit[k];
    }
    CHECK(flagged == path.cap_hits);
  }
}

TEST_CASE("reference solution matches deterministic logistic flow") {
  SwitchingLogisticModel model = testsupport::scalar_model(0.5, 0.8, 0.0, 50.0);
  const double dt = 1e-4;
  const std::size_t n = 20000;  // T = 2
  BrownianLattice lattice{dt, std::vector<double>(n, 0.0)};
  ChainPath chain = flat_chain(dt, n);
  SchemePath path = swlog::exact_reference(model, lattice, chain);
  // x(t) = x0 e^{bt} / (1 + x0 (a/b)(e^{bt} - 1)); the left-point quadrature
  // costs O(dt).
  for (std::size_t k : {std::size_t(1), n / 2, n}) {
    double t = path.times[k];
    double growth = std::exp(0.5 * t);
    double exact = 50.0 * growth / (1.0 + 50.0 * 1.6 * (growth - 1.0));
    CHECK(path.state[k] == doctest::Approx(exact).epsilon(1e-3));
  }
}

TEST_CASE("reference solution is the plain recursion when a == 0") {
  SwitchingLogisticModel model = testsupport::scalar_model(0.7, 0.0, 0.4, 1.5);
  const double dt = 0.01;
  const std::size_t n = 300;
  BrownianLattice lattice = swlog::brownian_lattice(dt, n, {77, 0, 0});
  ChainPath chain = flat_chain(dt, n);
  SchemePath reference = swlog::exact_reference(model, lattice, chain);
  SchemeConfig config{dt, 10.0, swlog::kUnboundedTheta};
  SchemePath plain =
      swlog::plain_log_em(model, config, lattice.increments, chain.states);
  CHECK(reference.log_state == plain.log_state);
  CHECK(reference.state == plain.state);
}

TEST_CASE("reference solution is stable under grid refinement") {
  SwitchingLogisticModel model = testsupport::scalar_model(0.5, 0.8, 0.3, 0.5);
  const double dt_fine = std::ldexp(1.0, -15);
  const std::size_t n_fine = std::size_t(1) << 16;  // T = 2
  BrownianLattice fine = swlog::brownian_lattice(dt_fine, n_fine, {101, 0, 0});
  BrownianLattice half{2.0 * dt_fine, swlog::coarsen(fine, 2)};

  SchemePath on_fine =
      swlog::exact_reference(model, fine, flat_chain(dt_fine, n_fine));
  SchemePath on_half =
      swlog::exact_reference(model, half, flat_chain(2.0 * dt_fine, n_fine / 2));
  // Same Brownian path, so the terminal states differ only by the quadrature
  // cell size.
  CHECK(on_fine.state.back() ==
        doctest::Approx(on_half.state.back()).epsilon(1e-3));
}

TEST_CASE("reference solution rejects mismatched grids") {
  SwitchingLogisticModel model = testsupport::scalar_model(0.5, 0.8, 0.3, 0.5);
  BrownianLattice lattice{0.1, std::vector<double>(10, 0.0)};
  ChainPath chain = flat_chain(0.2, 10);
  CHECK_THROWS_AS(swlog::exact_reference(model, lattice, chain),
                  swlog::GridMismatchError);
  ChainPath short_chain = flat_chain(0.1, 5);
  CHECK_THROWS_AS(swlog::exact_reference(model, lattice, short_chain),
                  swlog::LengthMismatchError);
}

}  // TEST_SUITE
