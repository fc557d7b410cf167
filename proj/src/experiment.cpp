#include "swlog/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "swlog/csv.hpp"
#include "swlog/errors.hpp"

namespace swlog {

namespace {

using nlohmann::json;

std::string join_key(const std::string& scope, const std::string& key) {
  return scope.empty() ? key : scope + "." + key;
}

const json* find(const json& obj, const std::string& scope,
                 const std::string& key, bool required) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) throw ConfigError(join_key(scope, key), "missing required key");
    return nullptr;
  }
  return &*it;
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number())
    throw ConfigError(key, "expected a number, got " + std::string(v.type_name()));
  return v.get<double>();
}

double get_number(const json& obj, const std::string& scope,
                  const std::string& key, double fallback) {
  const json* v = find(obj, scope, key, false);
  return v ? as_number(*v, join_key(scope, key)) : fallback;
}

std::uint64_t get_index(const json& obj, const std::string& scope,
                        const std::string& key, std::uint64_t fallback) {
  const json* v = find(obj, scope, key, false);
  if (!v) return fallback;
  if (!v->is_number_unsigned())
    throw ConfigError(join_key(scope, key), "expected a nonnegative integer");
  return v->get<std::uint64_t>();
}

std::vector<double> as_number_vector(const json& v, const std::string& key) {
  if (!v.is_array() || v.empty())
    throw ConfigError(key, "expected a nonempty array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_number(v[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

SchemeKind parse_kind(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  std::string s = v.get<std::string>();
  if (s == "truncated") return SchemeKind::Truncated;
  if (s == "plain") return SchemeKind::Plain;
  if (s == "classical") return SchemeKind::Classical;
  if (s == "reference") return SchemeKind::Reference;
  throw ConfigError(key, "unknown scheme kind \"" + s + "\"");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!root.is_object()) throw ConfigError("<document>", "expected a JSON object");

  ExperimentConfig config;
  {
    const json* v = find(root, "", "spec_version", true);
    if (!v->is_string()) throw ConfigError("spec_version", "expected a string");
    config.spec_version = v->get<std::string>();
  }

  const json* model = find(root, "", "model", true);
  if (!model->is_object()) throw ConfigError("model", "expected an object");
  config.model.params.b = as_number_vector(*find(*model, "model", "b", true), "model.b");
  config.model.params.a = as_number_vector(*find(*model, "model", "a", true), "model.a");
  config.model.params.sigma =
      as_number_vector(*find(*model, "model", "sigma", true), "model.sigma");
  {
    const json* gen = find(*model, "model", "generator", true);
    if (!gen->is_array() || gen->empty())
      throw ConfigError("model.generator", "expected a nonempty array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < gen->size(); ++i)
      rows.push_back(as_number_vector(
          (*gen)[i], "model.generator[" + std::to_string(i) + "]"));
    try {
      config.model.gen = Generator::from_rows(rows);
    } catch (const Error& e) {
      throw ConfigError("model.generator", e.what());
    }
  }
  config.model.x0 = as_number(*find(*model, "model", "x0", true), "model.x0");
  {
    const json* v = find(*model, "model", "r0", true);
    if (!v->is_number_integer())
      throw ConfigError("model.r0", "expected an integer regime index");
    config.model.r0 = v->get<int>();
  }
  try {
    config.model.validate();
  } catch (const Error& e) {
    throw ConfigError("model", e.what());
  }

  config.scheme.dt = 0.02;
  config.scheme.cap_constant = std::max(10.0, config.model.x0);
  if (const json* scheme = find(root, "", "scheme", false)) {
    if (!scheme->is_object()) throw ConfigError("scheme", "expected an object");
    config.scheme.dt = get_number(*scheme, "scheme", "dt", config.scheme.dt);
    config.scheme.cap_constant =
        get_number(*scheme, "scheme", "cap_constant", config.scheme.cap_constant);
    if (const json* theta = find(*scheme, "scheme", "theta", false)) {
      if (theta->is_string()) {
        if (theta->get<std::string>() != "unbounded")
          throw ConfigError("scheme.theta", "expected a number or \"unbounded\"");
        config.scheme.theta = kUnboundedTheta;
      } else {
        config.scheme.theta = as_number(*theta, "scheme.theta");
      }
    }
    if (const json* kind = find(*scheme, "scheme", "kind", false))
      config.scheme_kind = parse_kind(*kind, "scheme.kind");
  }
  try {
    config.scheme.validate(config.model.x0, config.model.params.max_a());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("scheme", e.what());
  }

  if (const json* run = find(root, "", "run", false)) {
    if (!run->is_object()) throw ConfigError("run", "expected an object");
    config.run.horizon = get_number(*run, "run", "horizon", config.run.horizon);
    config.run.trajectories = static_cast<std::size_t>(
        get_index(*run, "run", "trajectories", config.run.trajectories));
    config.run.seed = get_index(*run, "run", "seed", config.run.seed);
    config.run.workers = static_cast<unsigned>(
        get_index(*run, "run", "workers", config.run.workers));
    config.run.error_exponent =
        get_number(*run, "run", "error_exponent", config.run.error_exponent);
    if (const json* v = find(*run, "run", "root_mean", false)) {
      if (!v->is_boolean()) throw ConfigError("run.root_mean", "expected a boolean");
      config.run.root_mean = v->get<bool>();
    }
    if (const json* v = find(*run, "run", "dts", false))
      config.run.dts = as_number_vector(*v, "run.dts");
    config.run.reference_dt =
        get_number(*run, "run", "reference_dt", config.run.reference_dt);
    if (const json* v = find(*run, "run", "reference", false)) {
      if (!v->is_string()) throw ConfigError("run.reference", "expected a string");
      std::string s = v->get<std::string>();
      if (s == "closed_form")
        config.run.reference = ReferenceKind::ClosedForm;
      else if (s == "truncated_finest")
        config.run.reference = ReferenceKind::TruncatedFinest;
      else
        throw ConfigError("run.reference", "unknown reference kind \"" + s + "\"");
    }
    config.run.drop_levels = static_cast<std::size_t>(
        get_index(*run, "run", "drop_levels", config.run.drop_levels));
    config.run.classify_tol =
        get_number(*run, "run", "classify_tol", config.run.classify_tol);
    config.run.moment_exponent =
        get_number(*run, "run", "moment_exponent", config.run.moment_exponent);
    if (!(config.run.horizon > 0.0))
      throw ConfigError("run.horizon", "must be > 0");
    if (config.run.trajectories == 0)
      throw ConfigError("run.trajectories", "must be >= 1");
    if (!(config.run.error_exponent > 0.0))
      throw ConfigError("run.error_exponent", "must be > 0");
    if (!(config.run.classify_tol >= 0.0))
      throw ConfigError("run.classify_tol", "must be >= 0");
    if (!(config.run.moment_exponent > 0.0))
      throw ConfigError("run.moment_exponent", "must be > 0");
  }

  if (const json* output = find(root, "", "output", false)) {
    if (!output->is_object()) throw ConfigError("output", "expected an object");
    if (const json* v = find(*output, "output", "dir", false)) {
      if (!v->is_string()) throw ConfigError("output.dir", "expected a string");
      config.out_dir = v->get<std::string>();
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<config>", "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void apply_seed_override(ExperimentConfig& config,
                         const std::optional<std::uint64_t>& cli_seed,
                         const char* env_text, const char* env_name) {
  if (env_text && !cli_seed) {
    try {
      std::size_t used = 0;
      std::string text(env_text);
      unsigned long long value = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      config.run.seed = value;
    } catch (const std::exception&) {
      throw ConfigError(env_name, "expected a nonnegative integer");
    }
  }
  if (cli_seed) config.run.seed = *cli_seed;
}

namespace {

std::filesystem::path ensure_out_dir(const ExperimentConfig& config) {
  std::filesystem::path dir = config.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

TrajectoryStudyOptions study_options(const ExperimentConfig& config) {
  TrajectoryStudyOptions options;
  options.scheme = config.scheme;
  options.kind = config.scheme_kind;
  options.trajectories = config.run.trajectories;
  options.horizon = config.run.horizon;
  options.seed = config.run.seed;
  options.workers = resolve_workers(config.run.workers);
  return options;
}

std::string format_vector(const std::vector<double>& values) {
  std::string out = "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_short(values[i]);
  }
  return out + ")";
}

}  // namespace

int cmd_classify(const ExperimentConfig& config, std::ostream& out) {
  DynamicsClass result = classify(config.model, config.run.classify_tol);
  out << "pi = " << format_vector(result.pi) << '\n';
  out << "pi_a = " << format_short(result.pi_a) << '\n';
  out << "pi_beta = " << format_short(result.pi_beta) << '\n';
  out << "class = " << to_string(result.kind) << '\n';
  return 0;
}

int cmd_simulate(const ExperimentConfig& config, std::ostream& out,
                 bool dump_lattice, bool dump_chain) {
  auto dir = ensure_out_dir(config);
  std::size_t n = static_cast<std::size_t>(
      std::llround(config.run.horizon / config.scheme.dt));
  if (n == 0 || std::abs(static_cast<double>(n) * config.scheme.dt -
                         config.run.horizon) > 1e-9 * config.run.horizon)
    throw ConfigError("run.horizon", "must be an integer number of steps");

  BrownianLattice lattice = brownian_lattice(
      config.scheme.dt, n, {config.run.seed, 0, kBrownianPurpose});
  TransitionMatrix p = transition_matrix(config.model.gen, config.scheme.dt);
  ChainPath chain = sample_chain(p, config.scheme.dt, config.model.r0, n,
                                 {config.run.seed, 0, kChainPurpose});

  SchemePath path;
  switch (config.scheme_kind) {
    case SchemeKind::Truncated:
      path = truncated_log_em(config.model, config.scheme, lattice.increments,
                              chain.states);
      break;
    case SchemeKind::Plain:
      path = plain_log_em(config.model, config.scheme, lattice.increments,
                          chain.states);
      break;
    case SchemeKind::Classical:
      path = classical_em(config.model, config.scheme, lattice.increments,
                          chain.states);
      break;
    case SchemeKind::Reference:
      path = exact_reference(config.model, lattice, chain);
      break;
  }

  write_path_csv((dir / "path.csv").string(), path);
  if (dump_lattice) write_lattice_csv((dir / "lattice.csv").string(), lattice);
  if (dump_chain) write_chain_csv((dir / "chain.csv").string(), chain);

  out << "scheme = " << to_string(config.scheme_kind) << '\n';
  out << "steps = " << (path.times.size() - 1) << '\n';
  out << "final_t = " << format_short(path.times.back()) << '\n';
  out << "final_x = " << format_short(path.state.back()) << '\n';
  out << "cap_hits = " << path.cap_hits << '\n';
  if (path.blown_up)
    out << "blowup_step = " << path.blowup_index << '\n';
  else
    out << "lyapunov_estimate = " << format_short(lyapunov_estimate(path))
        << '\n';
  out << "path_csv = " << (dir / "path.csv").string() << '\n';
  return 0;
}

int cmd_converge(const ExperimentConfig& config, std::ostream& out) {
  auto dir = ensure_out_dir(config);
  if (config.run.dts.empty())
    throw ConfigError("run.dts", "converge needs a list of step sizes");
  StrongErrorOptions options;
  options.dts = config.run.dts;
  options.trajectories = config.run.trajectories;
  options.horizon = config.run.horizon;
  options.p = config.run.error_exponent;
  options.root_mean = config.run.root_mean;
  options.cap_constant = config.scheme.cap_constant;
  options.theta = config.scheme.theta;
  options.reference = config.run.reference;
  options.dt_reference =
      config.run.reference_dt > 0.0
          ? config.run.reference_dt
          : *std::min_element(options.dts.begin(), options.dts.end()) / 16.0;
  options.seed = config.run.seed;
  options.workers = resolve_workers(config.run.workers);

  ErrorCurve curve = strong_error(config.model, options);
  write_curve_csv((dir / "curve.csv").string(), curve);
  {
    std::vector<double> xs, ys;
    for (const auto& e : curve.entries) {
      xs.push_back(e.dt);
      ys.push_back(e.error);
    }
    write_xy((dir / "curve.xy").string(), xs, ys);
  }

  out << "reference_dt = " << format_short(options.dt_reference) << '\n';
  out << "dt,error,stderr,cap_fraction\n";
  for (const auto& e : curve.entries)
    out << format_short(e.dt) << ',' << format_short(e.error) << ','
        << format_short(e.std_error) << ',' << format_short(e.cap_fraction)
        << '\n';
  SlopeFit fit = fit_slope(curve, config.run.drop_levels);
  out << "slope = " << format_short(fit.slope) << '\n';
  out << "r2 = " << format_short(fit.r_squared) << '\n';
  out << "levels_used = " << fit.levels_used << '\n';
  out << "curve_csv = " << (dir / "curve.csv").string() << '\n';
  return 0;
}

int cmd_longrun(const ExperimentConfig& config, std::ostream& out) {
  auto dir = ensure_out_dir(config);
  TrajectoryStudyOptions options = study_options(config);

  std::vector<double> lyap = lyapunov_samples(config.model, options);
  SummaryStats lyap_stats = summarize(lyap);
  std::vector<double> averages = time_average_samples(config.model, options);
  SummaryStats avg_stats = summarize(averages);
  MomentCurves moments =
      moment_estimate(config.model, options, config.run.moment_exponent);
  write_moments_csv((dir / "moments.csv").string(), moments);

  // Plateau diagnostic: the running maximum of E[X^p] over the second half
  // of the horizon should not exceed the first-half maximum by much.
  std::size_t half = moments.times.size() / 2;
  double first_half = 0.0, second_half = 0.0;
  for (std::size_t k = 0; k < moments.times.size(); ++k) {
    double v = moments.mean_pow[k];
    if (k < half)
      first_half = std::max(first_half, v);
    else
      second_half = std::max(second_half, v);
  }

  DynamicsClass dynamics = classify(config.model, config.run.classify_tol);
  out << "class = " << to_string(dynamics.kind) << '\n';
  out << "pi_beta = " << format_short(dynamics.pi_beta) << '\n';
  out << "lyapunov_mean = " << format_short(lyap_stats.mean) << '\n';
  out << "lyapunov_stderr = " << format_short(lyap_stats.std_error) << '\n';
  out << "time_average_mean = " << format_short(avg_stats.mean) << '\n';
  out << "time_average_stderr = " << format_short(avg_stats.std_error) << '\n';
  out << "moment_exponent = " << format_short(moments.p) << '\n';
  out << "moment_sup_first_half = " << format_short(first_half) << '\n';
  out << "moment_sup_second_half = " << format_short(second_half) << '\n';
  out << "moments_csv = " << (dir / "moments.csv").string() << '\n';
  return 0;
}

int cmd_stationary(const ExperimentConfig& config, std::ostream& out) {
  auto dir = ensure_out_dir(config);
  TrajectoryStudyOptions options = study_options(config);
  std::vector<double> samples = terminal_samples(config.model, options);
  write_samples_csv((dir / "samples.csv").string(), samples);

  EmpiricalDistribution dist = EmpiricalDistribution::from_samples(samples);
  Histogram hist = empirical_density(dist, default_bin_count(dist.samples.size()));
  write_histogram_csv((dir / "histogram.csv").string(), hist);
  {
    std::vector<double> centers, density;
    for (std::size_t i = 0; i < hist.density.size(); ++i) {
      centers.push_back(0.5 * (hist.edges[i] + hist.edges[i + 1]));
      density.push_back(hist.density[i]);
    }
    write_xy((dir / "density.xy").string(), centers, density);
  }

  SummaryStats stats = summarize(samples);
  out << "samples = " << stats.n << '\n';
  out << "sample_mean = " << format_short(stats.mean) << '\n';
  out << "sample_mean_stderr = " << format_short(stats.std_error) << '\n';

  if (config.model.num_regimes() == 1) {
    GammaDistribution gamma = gamma_stationary(config.model.params.b[0],
                                               config.model.params.a[0],
                                               config.model.params.sigma[0]);
    KsResult ks = ks_statistic(
        dist, [&](double x) { return gamma_cdf(gamma, x); });
    out << "gamma_shape = " << format_short(gamma.shape) << '\n';
    out << "gamma_rate = " << format_short(gamma.rate) << '\n';
    out << "gamma_mean = " << format_short(gamma.mean()) << '\n';
    out << "ks_statistic = " << format_short(ks.statistic) << '\n';
    out << "ks_critical_5pct = " << format_short(ks.critical_value) << '\n';
    out << "ks_reject_5pct = " << (ks.reject ? "yes" : "no") << '\n';
  } else {
    out << "gamma_reference = none (closed form only for one regime)\n";
  }
  out << "samples_csv = " << (dir / "samples.csv").string() << '\n';
  out << "histogram_csv = " << (dir / "histogram.csv").string() << '\n';
  return 0;
}

int cmd_blowup(const ExperimentConfig& config, std::ostream& out) {
  auto dir = ensure_out_dir(config);
  TrajectoryStudyOptions classical = study_options(config);
  classical.kind = SchemeKind::Classical;
  BlowupReport report = blowup_frequency(config.model, classical);
  write_blowup_csv((dir / "blowup.csv").string(), report);

  TrajectoryStudyOptions truncated = classical;
  truncated.kind = SchemeKind::Truncated;
  BlowupReport safe = blowup_frequency(config.model, truncated);

  out << "classical_blowup_fraction = " << format_short(report.fraction) << '\n';
  out << "classical_blowups = " << report.blowups << " of "
      << report.trajectories << '\n';
  if (!report.first_steps.empty()) {
    auto steps = report.first_steps;
    std::sort(steps.begin(), steps.end());
    out << "first_blowup_step_min = " << steps.front() << '\n';
    out << "first_blowup_step_median = " << steps[steps.size() / 2] << '\n';
  }
  out << "truncated_blowup_fraction = " << format_short(safe.fraction) << '\n';
  out << "blowup_csv = " << (dir / "blowup.csv").string() << '\n';
  return 0;
}

}  // namespace swlog
