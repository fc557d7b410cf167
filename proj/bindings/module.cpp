#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "swlog/analysis.hpp"
#include "swlog/errors.hpp"
#include "swlog/model.hpp"
#include "swlog/schemes.hpp"
#include "swlog/stochastic.hpp"

namespace py = pybind11;

namespace {

swlog::SwitchingLogisticModel make_model(
    std::vector<double> b, std::vector<double> a, std::vector<double> sigma,
    const std::vector<std::vector<double>>& generator, double x0, int r0) {
  swlog::SwitchingLogisticModel model;
  model.params.b = std::move(b);
  model.params.a = std::move(a);
  model.params.sigma = std::move(sigma);
  model.gen = swlog::Generator::from_rows(generator);
  model.x0 = x0;
  model.r0 = r0;
  model.validate();
  return model;
}

std::vector<std::vector<double>> generator_rows(const swlog::Generator& gen) {
  std::vector<std::vector<double>> rows(gen.m, std::vector<double>(gen.m));
  for (std::size_t i = 0; i < gen.m; ++i)
    for (std::size_t j = 0; j < gen.m; ++j) rows[i][j] = gen.at(i, j);
  return rows;
}

std::size_t step_count(double horizon, double dt) {
  auto n = static_cast<std::size_t>(std::llround(horizon / dt));
  if (n == 0 ||
      std::abs(static_cast<double>(n) * dt - horizon) > 1e-9 * horizon)
    throw swlog::GridMismatchError("horizon must be an integer number of steps");
  return n;
}

swlog::SchemePath run_path(const swlog::SwitchingLogisticModel& model,
                           const swlog::SchemeConfig& config, double horizon,
                           swlog::SchemeKind kind, std::uint64_t seed,
                           std::uint64_t trajectory) {
  std::size_t n = step_count(horizon, config.dt);
  swlog::BrownianLattice lattice = swlog::brownian_lattice(
      config.dt, n, {seed, trajectory, swlog::kBrownianPurpose});
  swlog::TransitionMatrix p = swlog::transition_matrix(model.gen, config.dt);
  swlog::ChainPath chain = swlog::sample_chain(
      p, config.dt, model.r0, n, {seed, trajectory, swlog::kChainPurpose});
  switch (kind) {
    case swlog::SchemeKind::Plain:
      return swlog::plain_log_em(model, config, lattice.increments,
                                 chain.states);
    case swlog::SchemeKind::Classical:
      return swlog::classical_em(model, config, lattice.increments,
                                 chain.states);
    case swlog::SchemeKind::Reference:
      return swlog::exact_reference(model, lattice, chain);
    case swlog::SchemeKind::Truncated:
      break;
  }
  return swlog::truncated_log_em(model, config, lattice.increments,
                                 chain.states);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regime-switching stochastic logistic simulation toolkit";

  py::register_exception<swlog::Error>(m, "Error", PyExc_ValueError);

  py::enum_<swlog::DynamicsKind>(m, "DynamicsKind")
      .value("Permanent", swlog::DynamicsKind::Permanent)
      .value("Extinct", swlog::DynamicsKind::Extinct)
      .value("ExponentialGrowth", swlog::DynamicsKind::ExponentialGrowth)
      .value("Indeterminate", swlog::DynamicsKind::Indeterminate);

  py::enum_<swlog::SchemeKind>(m, "SchemeKind")
      .value("Truncated", swlog::SchemeKind::Truncated)
      .value("Plain", swlog::SchemeKind::Plain)
      .value("Classical", swlog::SchemeKind::Classical)
      .value("Reference", swlog::SchemeKind::Reference);

  py::enum_<swlog::ReferenceKind>(m, "ReferenceKind")
      .value("ClosedForm", swlog::ReferenceKind::ClosedForm)
      .value("TruncatedFinest", swlog::ReferenceKind::TruncatedFinest);

  py::class_<swlog::SwitchingLogisticModel>(m, "Model")
      .def(py::init(&make_model), py::arg("b"), py::arg("a"), py::arg("sigma"),
           py::arg("generator"), py::arg("x0"), py::arg("r0") = 0)
      .def_property_readonly(
          "b", [](const swlog::SwitchingLogisticModel& s) { return s.params.b; })
      .def_property_readonly(
          "a", [](const swlog::SwitchingLogisticModel& s) { return s.params.a; })
      .def_property_readonly(
          "sigma",
          [](const swlog::SwitchingLogisticModel& s) { return s.params.sigma; })
      .def_property_readonly(
          "generator",
          [](const swlog::SwitchingLogisticModel& s) {
            return generator_rows(s.gen);
          })
      .def_readonly("x0", &swlog::SwitchingLogisticModel::x0)
      .def_readonly("r0", &swlog::SwitchingLogisticModel::r0)
      .def_property_readonly("num_regimes",
                             &swlog::SwitchingLogisticModel::num_regimes);

  py::class_<swlog::DynamicsClass>(m, "DynamicsClass")
      .def_readonly("kind", &swlog::DynamicsClass::kind)
      .def_readonly("pi", &swlog::DynamicsClass::pi)
      .def_readonly("pi_a", &swlog::DynamicsClass::pi_a)
      .def_readonly("pi_beta", &swlog::DynamicsClass::pi_beta)
      .def("__repr__", [](const swlog::DynamicsClass& c) {
        return "<DynamicsClass " + swlog::to_string(c.kind) + ">";
      });

  py::class_<swlog::SchemeConfig>(m, "SchemeConfig")
      .def(py::init([](double dt, double cap_constant, double theta) {
             return swlog::SchemeConfig{dt, cap_constant, theta};
           }),
           py::arg("dt"), py::arg("cap_constant") = 10.0,
           py::arg("theta") = 0.4)
      .def_readwrite("dt", &swlog::SchemeConfig::dt)
      .def_readwrite("cap_constant", &swlog::SchemeConfig::cap_constant)
      .def_readwrite("theta", &swlog::SchemeConfig::theta);

  py::class_<swlog::SchemePath>(m, "Path")
      .def_readonly("dt", &swlog::SchemePath::dt)
      .def_readonly("times", &swlog::SchemePath::times)
      .def_readonly("log_state", &swlog::SchemePath::log_state)
      .def_readonly("state", &swlog::SchemePath::state)
      .def_readonly("regimes", &swlog::SchemePath::regimes)
      .def_readonly("cap_hit", &swlog::SchemePath::cap_hit)
      .def_readonly("cap_hits", &swlog::SchemePath::cap_hits)
      .def_readonly("blown_up", &swlog::SchemePath::blown_up)
      .def_readonly("blowup_index", &swlog::SchemePath::blowup_index);

  py::class_<swlog::GammaDistribution>(m, "GammaDistribution")
      .def(py::init([](double shape, double rate) {
             return swlog::GammaDistribution{shape, rate};
           }),
           py::arg("shape"), py::arg("rate"))
      .def_readonly("shape", &swlog::GammaDistribution::shape)
      .def_readonly("rate", &swlog::GammaDistribution::rate)
      .def_property_readonly("mean", &swlog::GammaDistribution::mean);

  py::class_<swlog::KsResult>(m, "KsResult")
      .def_readonly("statistic", &swlog::KsResult::statistic)
      .def_readonly("critical_value", &swlog::KsResult::critical_value)
      .def_readonly("reject", &swlog::KsResult::reject);

  py::class_<swlog::Histogram>(m, "Histogram")
      .def_readonly("edges", &swlog::Histogram::edges)
      .def_readonly("counts", &swlog::Histogram::counts)
      .def_readonly("density", &swlog::Histogram::density);

  py::class_<swlog::ErrorCurveEntry>(m, "ErrorCurveEntry")
      .def_readonly("dt", &swlog::ErrorCurveEntry::dt)
      .def_readonly("error", &swlog::ErrorCurveEntry::error)
      .def_readonly("std_error", &swlog::ErrorCurveEntry::std_error)
      .def_readonly("n", &swlog::ErrorCurveEntry::n)
      .def_readonly("cap_fraction", &swlog::ErrorCurveEntry::cap_fraction);

  py::class_<swlog::ErrorCurve>(m, "ErrorCurve")
      .def_readonly("entries", &swlog::ErrorCurve::entries)
      .def_readonly("horizon", &swlog::ErrorCurve::horizon)
      .def_readonly("p", &swlog::ErrorCurve::p)
      .def_readonly("root_mean", &swlog::ErrorCurve::root_mean)
      .def_readonly("master_seed", &swlog::ErrorCurve::master_seed);

  py::class_<swlog::SlopeFit>(m, "SlopeFit")
      .def_readonly("slope", &swlog::SlopeFit::slope)
      .def_readonly("intercept", &swlog::SlopeFit::intercept)
      .def_readonly("r_squared", &swlog::SlopeFit::r_squared)
      .def_readonly("levels_used", &swlog::SlopeFit::levels_used);

  py::class_<swlog::SummaryStats>(m, "SummaryStats")
      .def_readonly("n", &swlog::SummaryStats::n)
      .def_readonly("mean", &swlog::SummaryStats::mean)
      .def_readonly("std_error", &swlog::SummaryStats::std_error);

  py::class_<swlog::BlowupReport>(m, "BlowupReport")
      .def_readonly("trajectories", &swlog::BlowupReport::trajectories)
      .def_readonly("blowups", &swlog::BlowupReport::blowups)
      .def_readonly("fraction", &swlog::BlowupReport::fraction)
      .def_readonly("first_steps", &swlog::BlowupReport::first_steps);

  py::class_<swlog::MomentCurves>(m, "MomentCurves")
      .def_readonly("times", &swlog::MomentCurves::times)
      .def_readonly("mean_pow", &swlog::MomentCurves::mean_pow)
      .def_readonly("mean_inv_pow", &swlog::MomentCurves::mean_inv_pow)
      .def_readonly("p", &swlog::MomentCurves::p);

  py::class_<swlog::StrongErrorOptions>(m, "StrongErrorOptions")
      .def(py::init<>())
      .def_readwrite("dts", &swlog::StrongErrorOptions::dts)
      .def_readwrite("trajectories", &swlog::StrongErrorOptions::trajectories)
      .def_readwrite("horizon", &swlog::StrongErrorOptions::horizon)
      .def_readwrite("p", &swlog::StrongErrorOptions::p)
      .def_readwrite("root_mean", &swlog::StrongErrorOptions::root_mean)
      .def_readwrite("cap_constant", &swlog::StrongErrorOptions::cap_constant)
      .def_readwrite("theta", &swlog::StrongErrorOptions::theta)
      .def_readwrite("dt_reference", &swlog::StrongErrorOptions::dt_reference)
      .def_readwrite("reference", &swlog::StrongErrorOptions::reference)
      .def_readwrite("seed", &swlog::StrongErrorOptions::seed)
      .def_readwrite("workers", &swlog::StrongErrorOptions::workers);

  py::class_<swlog::TrajectoryStudyOptions>(m, "TrajectoryStudyOptions")
      .def(py::init<>())
      .def_readwrite("scheme", &swlog::TrajectoryStudyOptions::scheme)
      .def_readwrite("kind", &swlog::TrajectoryStudyOptions::kind)
      .def_readwrite("trajectories",
                     &swlog::TrajectoryStudyOptions::trajectories)
      .def_readwrite("horizon", &swlog::TrajectoryStudyOptions::horizon)
      .def_readwrite("seed", &swlog::TrajectoryStudyOptions::seed)
      .def_readwrite("workers", &swlog::TrajectoryStudyOptions::workers);

  m.def("beta",
        [](const swlog::SwitchingLogisticModel& model) {
          return swlog::beta(model.params);
        },
        py::arg("model"), "Per-regime log-scale drift b - sigma^2 / 2.");
  m.def("stationary_distribution",
        [](const std::vector<std::vector<double>>& generator) {
          return swlog::stationary_distribution(
              swlog::Generator::from_rows(generator));
        },
        py::arg("generator"));
  m.def("classify", &swlog::classify, py::arg("model"),
        py::arg("tol") = swlog::kDefaultClassifyTol);
  m.def("transition_matrix",
        [](const std::vector<std::vector<double>>& generator, double dt) {
          swlog::TransitionMatrix p = swlog::transition_matrix(
              swlog::Generator::from_rows(generator), dt);
          std::vector<std::vector<double>> rows(p.m, std::vector<double>(p.m));
          for (std::size_t i = 0; i < p.m; ++i)
            for (std::size_t j = 0; j < p.m; ++j) rows[i][j] = p.at(i, j);
          return rows;
        },
        py::arg("generator"), py::arg("dt"));
  m.def("sample_chain",
        [](const std::vector<std::vector<double>>& generator, double dt,
           int r0, std::size_t n, std::uint64_t seed, std::uint64_t trajectory) {
          swlog::TransitionMatrix p = swlog::transition_matrix(
              swlog::Generator::from_rows(generator), dt);
          return swlog::sample_chain(p, dt, r0, n,
                                     {seed, trajectory, swlog::kChainPurpose})
              .states;
        },
        py::arg("generator"), py::arg("dt"), py::arg("r0"), py::arg("n"),
        py::arg("seed") = 0, py::arg("trajectory") = 0);
  m.def("brownian_increments",
        [](double dt, std::size_t n, std::uint64_t seed,
           std::uint64_t trajectory) {
          return swlog::brownian_lattice(
                     dt, n, {seed, trajectory, swlog::kBrownianPurpose})
              .increments;
        },
        py::arg("dt"), py::arg("n"), py::arg("seed") = 0,
        py::arg("trajectory") = 0);
  m.def("normal_quantile", &swlog::normal_quantile, py::arg("u"));
  m.def("truncation_cap", &swlog::truncation_cap, py::arg("scheme"));
  m.def("simulate", &run_path, py::arg("model"), py::arg("scheme"),
        py::arg("horizon"), py::arg("kind") = swlog::SchemeKind::Truncated,
        py::arg("seed") = 0, py::arg("trajectory") = 0,
        py::call_guard<py::gil_scoped_release>(),
        "One trajectory on the grid t_k = k dt, driven by the counter RNG "
        "streams of (seed, trajectory).");
  m.def("lyapunov_estimate", &swlog::lyapunov_estimate, py::arg("path"));
  m.def("time_average", &swlog::time_average, py::arg("path"));
  m.def("strong_error", &swlog::strong_error, py::arg("model"),
        py::arg("options"), py::call_guard<py::gil_scoped_release>());
  m.def("fit_slope", &swlog::fit_slope, py::arg("curve"),
        py::arg("drop_levels") = 0, py::arg("cap_saturation_limit") = 0.01);
  m.def("terminal_samples", &swlog::terminal_samples, py::arg("model"),
        py::arg("options"), py::call_guard<py::gil_scoped_release>());
  m.def("lyapunov_samples", &swlog::lyapunov_samples, py::arg("model"),
        py::arg("options"), py::call_guard<py::gil_scoped_release>());
  m.def("time_average_samples", &swlog::time_average_samples, py::arg("model"),
        py::arg("options"), py::call_guard<py::gil_scoped_release>());
  m.def("moment_estimate", &swlog::moment_estimate, py::arg("model"),
        py::arg("options"), py::arg("p"),
        py::call_guard<py::gil_scoped_release>());
  m.def("blowup_frequency", &swlog::blowup_frequency, py::arg("model"),
        py::arg("options"), py::call_guard<py::gil_scoped_release>());
  m.def("summarize", &swlog::summarize, py::arg("values"));
  m.def("gamma_stationary", &swlog::gamma_stationary, py::arg("b"),
        py::arg("a"), py::arg("sigma"));
  m.def("gamma_pdf", &swlog::gamma_pdf, py::arg("gamma"), py::arg("x"));
  m.def("gamma_cdf", &swlog::gamma_cdf, py::arg("gamma"), py::arg("x"));
  m.def("ks_statistic",
        [](const std::vector<double>& samples,
           const std::function<double(double)>& cdf) {
          return swlog::ks_statistic(
              swlog::EmpiricalDistribution::from_samples(samples), cdf);
        },
        py::arg("samples"), py::arg("cdf"));
  m.def("empirical_density",
        [](const std::vector<double>& samples, std::size_t bins) {
          auto dist = swlog::EmpiricalDistribution::from_samples(samples);
          if (bins == 0) bins = swlog::default_bin_count(dist.samples.size());
          return swlog::empirical_density(dist, bins);
        },
        py::arg("samples"), py::arg("bins") = 0);
  m.def("cdf_distance",
        [](const std::vector<double>& lhs, const std::vector<double>& rhs) {
          auto result = swlog::cdf_distance(
              swlog::EmpiricalDistribution::from_samples(lhs),
              swlog::EmpiricalDistribution::from_samples(rhs));
          return py::make_tuple(result.sup, result.l1);
        },
        py::arg("lhs"), py::arg("rhs"));
}
