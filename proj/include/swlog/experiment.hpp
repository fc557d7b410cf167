#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swlog/analysis.hpp"
#include "swlog/model.hpp"
#include "swlog/schemes.hpp"

namespace swlog {

// Monte Carlo controls shared by the subcommands.
struct RunOptions {
  double horizon = 100.0;
  std::size_t trajectories = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 0;  // 0 resolves to the hardware thread count
  double error_exponent = 1.0;
  bool root_mean = false;
  std::vector<double> dts;
  double reference_dt = 0.0;  // 0 defaults to min(dts) / 16
  ReferenceKind reference = ReferenceKind::ClosedForm;
  std::size_t drop_levels = 0;
  double classify_tol = kDefaultClassifyTol;
  double moment_exponent = 1.0;
};

// Parsed configuration document.
struct ExperimentConfig {
  std::string spec_version;
  SwitchingLogisticModel model;
  SchemeConfig scheme;
  SchemeKind scheme_kind = SchemeKind::Truncated;
  RunOptions run;
  std::string out_dir = "out";
};

// Parses and validates a JSON config file. Invalid or missing values raise
// ConfigError naming the offending key.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

unsigned resolve_workers(unsigned requested);

// Seed precedence: a command-line seed wins, then the environment text, then
// whatever the config already holds. Malformed environment text raises
// ConfigError naming `env_name`.
void apply_seed_override(ExperimentConfig& config,
                         const std::optional<std::uint64_t>& cli_seed,
                         const char* env_text, const char* env_name);

// Subcommand bodies. Reports go to `out` with 6 significant digits; CSV
// artifacts land in config.out_dir with full precision. All return 0 and
// signal failures with exceptions.
int cmd_classify(const ExperimentConfig& config, std::ostream& out);
int cmd_simulate(const ExperimentConfig& config, std::ostream& out,
                 bool dump_lattice = false, bool dump_chain = false);
int cmd_converge(const ExperimentConfig& config, std::ostream& out);
int cmd_longrun(const ExperimentConfig& config, std::ostream& out);
int cmd_stationary(const ExperimentConfig& config, std::ostream& out);
int cmd_blowup(const ExperimentConfig& config, std::ostream& out);

}  // namespace swlog
