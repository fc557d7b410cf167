#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "swlog/errors.hpp"
#include "swlog/experiment.hpp"

namespace {

constexpr const char* kSeedEnvVar = "SWLOGISTIC_SEED";

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<unsigned> workers;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON configuration file")
      ->required();
  cmd->add_option("--seed", args.seed,
                  "master seed (overrides " + std::string(kSeedEnvVar) +
                      " and the config)");
  cmd->add_option("--out", args.out_dir, "output directory for CSV artifacts");
  cmd->add_option("--workers", args.workers,
                  "worker threads (0 = hardware concurrency)");
}

swlog::ExperimentConfig resolve(const CommonArgs& args) {
  swlog::ExperimentConfig config = swlog::load_config(args.config_path);
  swlog::apply_seed_override(config, args.seed, std::getenv(kSeedEnvVar),
                             kSeedEnvVar);
  if (args.out_dir) config.out_dir = *args.out_dir;
  if (args.workers) config.run.workers = *args.workers;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regime-switching stochastic logistic simulation toolkit"};
  app.require_subcommand(1);

  CommonArgs classify_args, simulate_args, converge_args, longrun_args,
      stationary_args, blowup_args;
  bool dump_lattice = false, dump_chain = false;

  CLI::App* classify =
      app.add_subcommand("classify", "long-run dynamics from the generator");
  add_common(classify, classify_args);
  CLI::App* simulate =
      app.add_subcommand("simulate", "one trajectory, written as CSV");
  add_common(simulate, simulate_args);
  simulate->add_flag("--dump-lattice", dump_lattice,
                     "also write the Brownian increments");
  simulate->add_flag("--dump-chain", dump_chain,
                     "also write the sampled regime path");
  CLI::App* converge =
      app.add_subcommand("converge", "strong-error curve and slope fit");
  add_common(converge, converge_args);
  CLI::App* longrun = app.add_subcommand(
      "longrun", "Lyapunov, moment and time-average estimates");
  add_common(longrun, longrun_args);
  CLI::App* stationary = app.add_subcommand(
      "stationary", "terminal-state harvest and stationary-law tests");
  add_common(stationary, stationary_args);
  CLI::App* blowup = app.add_subcommand(
      "blowup", "classical Euler blow-up frequency versus the capped scheme");
  add_common(blowup, blowup_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed())
      return swlog::cmd_classify(resolve(classify_args), std::cout);
    if (simulate->parsed())
      return swlog::cmd_simulate(resolve(simulate_args), std::cout, dump_lattice,
                                 dump_chain);
    if (converge->parsed())
      return swlog::cmd_converge(resolve(converge_args), std::cout);
    if (longrun->parsed())
      return swlog::cmd_longrun(resolve(longrun_args), std::cout);
    if (stationary->parsed())
      return swlog::cmd_stationary(resolve(stationary_args), std::cout);
    if (blowup->parsed())
      return swlog::cmd_blowup(resolve(blowup_args), std::cout);
  } catch (const swlog::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const swlog::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 4;
  } catch (const swlog::Error& e) {
    // Model and data errors: non-irreducible chains, non-permanent models,
    // degenerate statistics.
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
