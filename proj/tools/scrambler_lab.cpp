#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "scrambler/rg.hpp"
#include "scrambler/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Monitored nonlocal circuit laboratory"};
  app.require_subcommand(1);

  std::string run_config_path;
  uint32_t run_threads = 0;
  auto* run = app.add_subcommand("run", "run an experiment sweep from a config file");
  run->add_option("config", run_config_path, "TOML or JSON run configuration")
      ->required();
  run->add_option("--threads", run_threads, "worker threads (0 = auto)");

  std::string analyze_config_path;
  auto* analyze =
      app.add_subcommand("analyze", "fit critical points from experiment CSVs");
  analyze->add_option("config", analyze_config_path, "TOML or JSON analysis config")
      ->required();

  auto* rg = app.add_subcommand("rg", "print the block-decimation fixed point");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      scrambler::RunConfig config = scrambler::load_run_config(run_config_path);
      if (run_threads > 0) config.threads = run_threads;
      return scrambler::run_experiment(config);
    }
    if (analyze->parsed()) {
      return scrambler::run_analyze(scrambler::load_analyze_config(analyze_config_path));
    }
    if (rg->parsed()) {
      std::cout << scrambler::rg_fixed_point().to_json() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
