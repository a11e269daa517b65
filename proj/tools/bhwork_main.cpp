#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bhwork/errors.hpp"
#include "../src/cli/commands.hpp"
#include "../src/cli/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Work statistics of driven Bose-Hubbard chains"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = -1;
  bool seed_given = false, out_given = false;

  const char* commands[] = {"spectrum", "transition", "converge", "workdist", "dos"};
  const char* descriptions[] = {
      "Eigenvalues over a grid of the work parameter J",
      "Quantum and classical transition probabilities for one initial state",
      "RMSE between quantum and classical cumulative probabilities over an N sweep",
      "Two-point work distribution",
      "Monte-Carlo estimate of the smooth density of states",
  };
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
    sub->add_option("--config", config_path, "experiment config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides config)")
        ->each([&](const std::string&) { out_given = true; });
    sub->add_option("--seed", seed, "master seed (overrides config)")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--threads", threads, "worker threads, 0 = hardware");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    bhwork::cli::ExperimentConfig cfg = bhwork::cli::load_config_file(config_path);
    if (out_given) cfg.output_dir = out_dir;
    if (seed_given) cfg.seed = seed;
    if (threads >= 0) cfg.threads = threads;

    const std::string command = app.get_subcommands().front()->get_name();
    const auto written = bhwork::cli::run_command(command, cfg);
    for (const auto& path : written) std::cout << path << "\n";
    return 0;
  } catch (const bhwork::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const bhwork::ConvergenceError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const bhwork::CapExceededError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
