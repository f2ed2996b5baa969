#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scrambler/analysis.hpp"

namespace scrambler {

struct RunConfig {
  std::string experiment;  // percolation | entanglement | purification | qecc | rg
  std::string model = "PWR2";
  std::vector<uint32_t> sizes;  // N
  std::vector<uint32_t> ks;     // k (PWR2; NN/AA carry k = 1)
  std::vector<double> p_grid;
  uint64_t trajectories = 200;  // realizations for percolation
  uint64_t seed = 1;
  std::string output_dir = ".";
  uint32_t threads = 0;  // 0: SCRAMBLER_THREADS or hardware concurrency

  // Depth conventions, in units of N.
  double depth_factor = 8.0;    // Clifford evolution time
  double thermal_factor = 4.0;  // purification pre-scrambling
  double censor_factor = 64.0;  // purification time cap
  uint32_t t_layers = 0;        // percolation layers; 0 means T = N

  void validate() const;
};

// Accepts a .json file or a flat key = value .toml file with the same keys.
RunConfig load_run_config(const std::string& path);

int run_experiment(const RunConfig& config);

struct AnalyzeConfig {
  std::vector<std::string> inputs;  // CSV files from run_experiment
  std::string observable;           // binder | tmi | tau | ...
  std::string ansatz = "standard";  // standard | dynamic | log_normalized
  std::optional<double> fixed_z;
  uint64_t n_boot = 5000;
  uint64_t collapse_boot = 500;
  bool strict_size_filter = false;
  double max_censored = 0.1;  // drop tau points above this censored fraction
  std::string output;         // JSON path; empty prints to stdout
};

AnalyzeConfig load_analyze_config(const std::string& path);

int run_analyze(const AnalyzeConfig& config);

// Curve extraction shared by `analyze` and the acceptance suite: aggregates
// per-trajectory rows (mean and standard error per grid point) or passes
// percolation curve rows through.
std::vector<ObservableCurve> curves_from_csv(const std::vector<std::string>& paths,
                                             const std::string& observable,
                                             double max_censored = 1.0);

uint64_t trajectory_seed(uint64_t master, const std::string& model, uint32_t n,
                         uint32_t k, uint32_t p_index, uint64_t traj_index);

}  // namespace scrambler
