#pragma once

#include <vector>

#include "swlog/model.hpp"

namespace testsupport {

// Two-regime model with switching-averaged extinction: pi = (0.2, 0.8),
// beta = (1.68, -1), pi*beta = -0.464.
inline swlog::SwitchingLogisticModel extinct_switching_model() {
  swlog::SwitchingLogisticModel model;
  model.params.b = {2.0, 1.0};
  model.params.a = {1.8, 2.5};
  model.params.sigma = {0.8, 2.0};
  model.gen = swlog::Generator::from_rows({{-8.0, 8.0}, {2.0, -2.0}});
  model.x0 = 25.0;
  model.r0 = 0;
  return model;
}

// Three-regime permanent model: pi = (1/16, 5/16, 10/16), pi*a = 0.58125,
// pi*beta = 0.6989375.
inline swlog::SwitchingLogisticModel permanent_switching_model() {
  swlog::SwitchingLogisticModel model;
  model.params.b = {0.7, 0.4, 1.0};
  model.params.a = {0.3, 0.8, 0.5};
  model.params.sigma = {1.7320508075688772, 0.06, 0.04};
  model.gen = swlog::Generator::from_rows(
      {{-10.0, 0.0, 10.0}, {2.0, -2.0, 0.0}, {0.0, 1.0, -1.0}});
  model.x0 = 0.5;
  model.r0 = 2;
  return model;
}

// One-regime permanent model with the Gamma stationary law
// Gamma(91/9, 160/9).
inline swlog::SwitchingLogisticModel single_regime_model() {
  swlog::SwitchingLogisticModel model;
  model.params.b = {0.5};
  model.params.a = {0.8};
  model.params.sigma = {0.3};
  model.gen = swlog::Generator::from_rows({{0.0}});
  model.x0 = 50.0;
  model.r0 = 0;
  return model;
}

// One-regime model with arbitrary coefficients, for hand-checkable paths.
inline swlog::SwitchingLogisticModel scalar_model(double b, double a,
                                                  double sigma, double x0) {
  swlog::SwitchingLogisticModel model;
  model.params.b = {b};
  model.params.a = {a};
  model.params.sigma = {sigma};
  model.gen = swlog::Generator::from_rows({{0.0}});
  model.x0 = x0;
  model.r0 = 0;
  return model;
}

}  // namespace testsupport
