#include "scrambler/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "scrambler/circuit.hpp"
#include "scrambler/parallel.hpp"
#include "scrambler/percolation.hpp"
#include "scrambler/qecc.hpp"
#include "scrambler/rg.hpp"
#include "scrambler/trajectory.hpp"

namespace scrambler {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Flat `key = value` subset of TOML: scalars, strings, arrays, comments.
nlohmann::json parse_flat_toml(const std::string& text) {
  nlohmann::json out = nlohmann::json::object();
  std::istringstream in(text);
  std::string line;
  auto parse_scalar = [](std::string tok) -> nlohmann::json {
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    tok = trim(tok);
    if (tok.size() >= 2 && (tok.front() == '"' || tok.front() == '\'')) {
      return tok.substr(1, tok.size() - 2);
    }
    if (tok == "true") return true;
    if (tok == "false") return false;
    try {
      if (tok.find_first_of(".eE") != std::string::npos) return std::stod(tok);
      return static_cast<int64_t>(std::stoll(tok));
    } catch (...) {
      throw std::invalid_argument("cannot parse TOML value: " + tok);
    }
  };
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t\r") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t\r") + 1);
    if (key.empty() || value.empty()) continue;
    if (value.front() == '[') {
      if (value.back() != ']') throw std::invalid_argument("unterminated array: " + key);
      nlohmann::json arr = nlohmann::json::array();
      std::string body = value.substr(1, value.size() - 2);
      std::string tok;
      std::istringstream items(body);
      while (std::getline(items, tok, ',')) {
        if (tok.find_first_not_of(" \t") != std::string::npos) {
          arr.push_back(parse_scalar(tok));
        }
      }
      out[key] = std::move(arr);
    } else {
      out[key] = parse_scalar(value);
    }
  }
  return out;
}

nlohmann::json load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return nlohmann::json::parse(text);
  }
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml") {
    return parse_flat_toml(text);
  }
  // Sniff: JSON starts with '{'.
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    return nlohmann::json::parse(text);
  }
  return parse_flat_toml(text);
}

template <typename T>
std::vector<T> as_list(const nlohmann::json& j) {
  std::vector<T> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<T>());
  } else {
    out.push_back(j.get<T>());
  }
  return out;
}

uint64_t config_hash(const nlohmann::json& j) {
  const std::string s = j.dump();
  uint64_t h = 0x9ae16a3b2f90404fULL;
  for (char c : s) h = mix64(h ^ static_cast<uint8_t>(c));
  return h;
}

constexpr const char* kVersion = "0.1.0";

class Manifest {
 public:
  Manifest(const RunConfig& config, nlohmann::json raw)
      : path_(std::filesystem::path(config.output_dir) /
              ("manifest_" + config.experiment + ".json")),
        raw_(std::move(raw)),
        start_(std::chrono::steady_clock::now()) {
    write(false);
  }

  void finish() { write(true); }

 private:
  void write(bool complete) const {
    nlohmann::json j;
    j["config"] = raw_;
    j["config_hash"] = config_hash(raw_);
    j["version"] = kVersion;
    j["complete"] = complete;
    j["wall_seconds"] = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start_)
                            .count();
    std::ofstream out(path_);
    out << j.dump(2) << "\n";
  }

  std::filesystem::path path_;
  nlohmann::json raw_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

void RunConfig::validate() const {
  static const std::vector<std::string> kExperiments = {
      "percolation", "entanglement", "purification", "qecc", "rg"};
  if (std::find(kExperiments.begin(), kExperiments.end(), experiment) ==
      kExperiments.end()) {
    throw std::invalid_argument("unknown experiment: " + experiment);
  }
  if (experiment == "rg") return;
  if (sizes.empty() || ks.empty() || p_grid.empty()) {
    throw std::invalid_argument("N, k and p grids must be nonempty");
  }
  const Model m = model_from_name(model);
  for (uint32_t n : sizes) {
    for (uint32_t k : ks) {
      CircuitParams cp;
      cp.n_qubits = n;
      cp.k = m == Model::PWR2 ? k : 1;
      cp.model = m;
      cp.n_layers = 1;
      cp.validate();
    }
  }
  for (double p : p_grid) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("p outside [0, 1]");
  }
  if (trajectories == 0) throw std::invalid_argument("need at least one trajectory");
}

RunConfig load_run_config(const std::string& path) {
  const nlohmann::json j = load_config_json(path);
  RunConfig c;
  c.experiment = j.at("experiment").get<std::string>();
  if (j.contains("model")) c.model = j["model"].get<std::string>();
  if (j.contains("N")) c.sizes = as_list<uint32_t>(j["N"]);
  if (j.contains("k")) c.ks = as_list<uint32_t>(j["k"]);
  if (j.contains("p")) {
    c.p_grid = as_list<double>(j["p"]);
  } else if (j.contains("p_min")) {
    const double lo = j.at("p_min").get<double>();
    const double hi = j.at("p_max").get<double>();
    const int count = j.at("p_count").get<int>();
    for (int i = 0; i < count; ++i) {
      c.p_grid.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    }
  }
  if (j.contains("trajectories")) c.trajectories = j["trajectories"].get<uint64_t>();
  if (j.contains("realizations")) c.trajectories = j["realizations"].get<uint64_t>();
  if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("threads")) c.threads = j["threads"].get<uint32_t>();
  if (j.contains("depth_factor")) c.depth_factor = j["depth_factor"].get<double>();
  if (j.contains("thermal_factor")) c.thermal_factor = j["thermal_factor"].get<double>();
  if (j.contains("censor_factor")) c.censor_factor = j["censor_factor"].get<double>();
  if (j.contains("t_layers")) c.t_layers = j["t_layers"].get<uint32_t>();
  if (c.ks.empty()) c.ks = {1};
  return c;
}

uint64_t trajectory_seed(uint64_t master, const std::string& model, uint32_t n,
                         uint32_t k, uint32_t p_index, uint64_t traj_index) {
  uint64_t model_tag = 0;
  for (char c : model) model_tag = model_tag * 131 + static_cast<uint8_t>(c);
  return derive_seed({master, model_tag, n, k, p_index, traj_index});
}

namespace {

struct CsvWriter {
  std::ofstream out;

  CsvWriter(const std::string& dir, const std::string& name, const std::string& header) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    out.open(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << header << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ",";
      out << cells[i];
    }
    out << "\n";
  }
};

void run_percolation(const RunConfig& config) {
  const Model model = model_from_name(config.model);
  const uint32_t threads = resolve_threads(config.threads);
  CsvWriter csv(config.output_dir, "percolation.csv",
                "model,N,k,observable,p,value,stderr,n_real");
  const std::vector<uint32_t> ks = model == Model::PWR2 ? config.ks
                                                        : std::vector<uint32_t>{1};
  for (uint32_t k : ks) {
    for (uint32_t n : config.sizes) {
      if (model == Model::PWR2 && (uint64_t{1} << k) > n) continue;
      CircuitParams cp;
      cp.n_qubits = n;
      cp.k = k;
      cp.model = model;
      cp.n_layers = config.t_layers ? config.t_layers : n;
      cp.meas_rate = 0.0;
      cp.seed = derive_seed({config.seed, 0x6e6574ULL, n, k});

      SweepResult sweep;
      if (model == Model::AA) {
        // The AA topology is itself random: resample the network every
        // realization and merge single-realization sweeps.
        bool first = true;
        parallel_ordered<SweepResult>(
            config.trajectories, threads,
            [&](uint64_t r) {
              CircuitParams inst = cp;
              inst.seed = derive_seed({cp.seed, r});
              const PercolationNetwork net = build_network(build_schedule(inst));
              return newman_ziff_sweep(net, 1, derive_seed({config.seed, n, k, r}),
                                       config.p_grid, 1);
            },
            [&](uint64_t, SweepResult&& part) {
              if (first) {
                sweep = std::move(part);
                first = false;
              } else {
                merge_sweeps(sweep, part);
              }
            });
      } else {
        const PercolationNetwork net = build_network(build_schedule(cp));
        sweep = newman_ziff_sweep(net, config.trajectories,
                                  derive_seed({config.seed, n, k}), config.p_grid,
                                  threads);
      }

      auto emit = [&](const std::string& name, const CanonicalCurve& curve) {
        for (size_t i = 0; i < curve.p.size(); ++i) {
          csv.row({config.model, std::to_string(n), std::to_string(k), name,
                   fmt_double(curve.p[i]), fmt_double(curve.value[i]),
                   fmt_double(curve.stderr_[i]), std::to_string(sweep.n_realizations)});
        }
      };
      emit("binder", binder_curve(sweep));
      emit("chi", susceptibility_curve(sweep));
      emit("span", spanning_curve(sweep));
      emit("cmax", canonical_curve(sweep, SweepObservable::CmaxMean));
      emit("cmax2", canonical_curve(sweep, SweepObservable::CmaxSecond));
      emit("cmax4", canonical_curve(sweep, SweepObservable::CmaxFourth));
      csv.out.flush();
    }
  }
}

void run_entanglement(const RunConfig& config) {
  const Model model = model_from_name(config.model);
  const uint32_t threads = resolve_threads(config.threads);
  CsvWriter csv(config.output_dir, "entanglement.csv",
                "model,N,k,p,seed,t,observable,value");
  const std::vector<uint32_t> ks = model == Model::PWR2 ? config.ks
                                                        : std::vector<uint32_t>{1};
  for (uint32_t k : ks) {
    for (uint32_t n : config.sizes) {
      if (model == Model::PWR2 && (uint64_t{1} << k) > n) continue;
      const uint32_t depth = static_cast<uint32_t>(std::lround(config.depth_factor * n));
      for (uint32_t ip = 0; ip < config.p_grid.size(); ++ip) {
        const double p = config.p_grid[ip];
        parallel_ordered<double>(
            config.trajectories, threads,
            [&](uint64_t traj) {
              const uint64_t seed =
                  trajectory_seed(config.seed, config.model, n, k, ip, traj);
              CircuitParams cp;
              cp.n_qubits = n;
              cp.k = k;
              cp.model = model;
              cp.n_layers = depth;
              cp.meas_rate = p;
              cp.seed = seed;
              Tableau state = init_z_polarized(n);
              ObservablePlan plan;
              plan.tmi_quarters = true;
              const auto result = run_trajectory(cp, n, state, plan, seed);
              return result.samples.back().value;
            },
            [&](uint64_t traj, double&& tmi) {
              const uint64_t seed =
                  trajectory_seed(config.seed, config.model, n, k, ip, traj);
              csv.row({config.model, std::to_string(n), std::to_string(k),
                       fmt_double(p), std::to_string(seed), std::to_string(depth),
                       "tmi", fmt_double(tmi)});
            });
        csv.out.flush();
      }
    }
  }
}

void run_purification(const RunConfig& config) {
  const Model model = model_from_name(config.model);
  const uint32_t threads = resolve_threads(config.threads);
  CsvWriter csv(config.output_dir, "purification.csv",
                "model,N,k,p,seed,t,observable,value");
  const std::vector<uint32_t> ks = model == Model::PWR2 ? config.ks
                                                        : std::vector<uint32_t>{1};
  for (uint32_t k : ks) {
    for (uint32_t n : config.sizes) {
      if (model == Model::PWR2 && (uint64_t{1} << k) > n) continue;
      const uint32_t thermal = static_cast<uint32_t>(std::lround(config.thermal_factor * n));
      const uint32_t cap = static_cast<uint32_t>(std::lround(config.censor_factor * n));
      for (uint32_t ip = 0; ip < config.p_grid.size(); ++ip) {
        const double p = config.p_grid[ip];
        struct TauResult {
          uint32_t tau;
          bool censored;
        };
        parallel_ordered<TauResult>(
            config.trajectories, threads,
            [&](uint64_t traj) -> TauResult {
              const uint64_t seed =
                  trajectory_seed(config.seed, config.model, n, k, ip, traj);
              CircuitParams cp;
              cp.n_qubits = n;
              cp.k = k;
              cp.model = model;
              cp.n_layers = cap;
              cp.meas_rate = p;
              cp.seed = seed;
              Tableau state = prepare_purification_state(n, thermal, seed);
              const auto result = purification_time(cp, n, state, cap, seed);
              return {result.tau, result.censored};
            },
            [&](uint64_t traj, TauResult&& r) {
              const uint64_t seed =
                  trajectory_seed(config.seed, config.model, n, k, ip, traj);
              csv.row({config.model, std::to_string(n), std::to_string(k),
                       fmt_double(p), std::to_string(seed), std::to_string(r.tau),
                       "tau", fmt_double(static_cast<double>(r.tau))});
              csv.row({config.model, std::to_string(n), std::to_string(k),
                       fmt_double(p), std::to_string(seed), std::to_string(r.tau),
                       "censored", r.censored ? "1" : "0"});
            });
        csv.out.flush();
      }
    }
  }
}

void run_qecc(const RunConfig& config) {
  const Model model = model_from_name(config.model);
  const uint32_t threads = resolve_threads(config.threads);
  CsvWriter csv(config.output_dir, "qecc.csv",
                "model,N,k,p,r_code,r_code_err,d_code,d_code_err,n_traj,n_no_code");
  const std::vector<uint32_t> ks = model == Model::PWR2 ? config.ks
                                                        : std::vector<uint32_t>{1};
  for (uint32_t k : ks) {
    for (uint32_t n : config.sizes) {
      if (model == Model::PWR2 && (uint64_t{1} << k) > n) continue;
      const uint32_t depth = static_cast<uint32_t>(std::lround(config.depth_factor * n));
      for (uint32_t ip = 0; ip < config.p_grid.size(); ++ip) {
        const double p = config.p_grid[ip];
        struct CodeSample {
          double rate;
          bool has_code;
          uint32_t a_star;
        };
        double rate_sum = 0, rate_sq = 0;
        double dist_sum = 0, dist_sq = 0;
        uint64_t n_dist = 0, n_no_code = 0;
        parallel_ordered<CodeSample>(
            config.trajectories, threads,
            [&](uint64_t traj) -> CodeSample {
              const uint64_t seed =
                  trajectory_seed(config.seed, config.model, n, k, ip, traj);
              CircuitParams cp;
              cp.n_qubits = n;
              cp.k = k;
              cp.model = model;
              cp.n_layers = depth;
              cp.meas_rate = p;
              cp.seed = seed;
              Tableau state = init_bell_reference(n, n);
              ObservablePlan plan;  // final state only
              run_trajectory(cp, n, state, plan, seed);
              const auto dist = contiguous_code_distance(state, n);
              return {code_rate(state, n), dist.has_code, dist.a_star};
            },
            [&](uint64_t, CodeSample&& s) {
              rate_sum += s.rate;
              rate_sq += s.rate * s.rate;
              if (s.has_code) {
                dist_sum += s.a_star;
                dist_sq += static_cast<double>(s.a_star) * s.a_star;
                ++n_dist;
              } else {
                ++n_no_code;
              }
            });
        const double traj_count = static_cast<double>(config.trajectories);
        const double rate_mean = rate_sum / traj_count;
        const double rate_var =
            std::max(0.0, rate_sq / traj_count - rate_mean * rate_mean);
        const double rate_err =
            config.trajectories > 1 ? std::sqrt(rate_var / (traj_count - 1)) : 0.0;
        double dist_mean = 0, dist_err = 0;
        if (n_dist > 0) {
          dist_mean = dist_sum / static_cast<double>(n_dist);
          const double var = std::max(
              0.0, dist_sq / static_cast<double>(n_dist) - dist_mean * dist_mean);
          dist_err = n_dist > 1 ? std::sqrt(var / static_cast<double>(n_dist - 1)) : 0.0;
        }
        csv.row({config.model, std::to_string(n), std::to_string(k), fmt_double(p),
                 fmt_double(rate_mean), fmt_double(rate_err), fmt_double(dist_mean),
                 fmt_double(dist_err), std::to_string(config.trajectories),
                 std::to_string(n_no_code)});
        csv.out.flush();
      }
    }
  }
}

void run_rg(const RunConfig& config) {
  const RgFixedPoint fp = rg_fixed_point();
  std::filesystem::create_directories(config.output_dir);
  const auto path = std::filesystem::path(config.output_dir) / "rg.json";
  std::ofstream out(path);
  out << fp.to_json() << "\n";
  std::cout << fp.to_json() << "\n";
}

}  // namespace

int run_experiment(const RunConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);
  nlohmann::json raw;
  raw["experiment"] = config.experiment;
  raw["model"] = config.model;
  raw["N"] = config.sizes;
  raw["k"] = config.ks;
  raw["p"] = config.p_grid;
  raw["trajectories"] = config.trajectories;
  raw["seed"] = config.seed;
  raw["depth_factor"] = config.depth_factor;
  raw["thermal_factor"] = config.thermal_factor;
  raw["censor_factor"] = config.censor_factor;
  raw["t_layers"] = config.t_layers;
  Manifest manifest(config, raw);

  if (config.experiment == "percolation") {
    run_percolation(config);
  } else if (config.experiment == "entanglement") {
    run_entanglement(config);
  } else if (config.experiment == "purification") {
    run_purification(config);
  } else if (config.experiment == "qecc") {
    run_qecc(config);
  } else if (config.experiment == "rg") {
    run_rg(config);
  }
  manifest.finish();
  return 0;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

std::vector<ObservableCurve> curves_from_csv(const std::vector<std::string>& paths,
                                             const std::string& observable,
                                             double max_censored) {
  struct Key {
    std::string model;
    uint32_t n;
    uint32_t k;
    bool operator<(const Key& o) const {
      return std::tie(model, k, n) < std::tie(o.model, o.k, o.n);
    }
  };
  struct PointAgg {
    std::vector<double> values;
    uint64_t censored = 0;
    uint64_t censor_rows = 0;
    double direct_value = 0, direct_err = 0;
    bool direct = false;
  };
  std::map<Key, std::map<double, PointAgg>> table;

  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV " + path);
    const auto header = split_csv_line(line);
    auto col = [&](const std::string& name) -> int {
      for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
      }
      return -1;
    };
    const int c_model = col("model"), c_n = col("N"), c_k = col("k"), c_p = col("p");
    if (c_model < 0 || c_n < 0 || c_k < 0 || c_p < 0) {
      throw std::runtime_error(path + ": missing model/N/k/p columns");
    }
    const int c_obs = col("observable");
    const int c_value = col("value");
    const int c_stderr = col("stderr");
    const bool curve_schema = c_stderr >= 0;
    if (c_obs < 0 || c_value < 0) {
      throw std::runtime_error(path + ": missing observable/value columns");
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split_csv_line(line);
      const Key key{cells[c_model], static_cast<uint32_t>(std::stoul(cells[c_n])),
                    static_cast<uint32_t>(std::stoul(cells[c_k]))};
      const double p = std::stod(cells[c_p]);
      const std::string obs = cells[c_obs];
      auto& agg = table[key][p];
      if (curve_schema) {
        if (obs != observable) continue;
        agg.direct = true;
        agg.direct_value = std::stod(cells[c_value]);
        agg.direct_err = std::stod(cells[c_stderr]);
      } else if (obs == observable) {
        agg.values.push_back(std::stod(cells[c_value]));
      } else if (obs == "censored") {
        agg.censor_rows += 1;
        agg.censored += std::stod(cells[c_value]) > 0.5 ? 1 : 0;
      }
    }
  }

  std::vector<ObservableCurve> curves;
  for (auto& [key, points] : table) {
    ObservableCurve curve;
    curve.model = key.model;
    curve.observable = observable;
    curve.n_qubits = key.n;
    curve.k = key.k;
    for (auto& [p, agg] : points) {
      if (agg.direct) {
        curve.points.push_back({p, agg.direct_value, agg.direct_err});
        continue;
      }
      if (agg.values.empty()) continue;
      if (agg.censor_rows > 0) {
        const double frac = static_cast<double>(agg.censored) /
                            static_cast<double>(agg.censor_rows);
        if (frac > max_censored) continue;
      }
      double sum = 0;
      for (double v : agg.values) sum += v;
      const double mean = sum / static_cast<double>(agg.values.size());
      double var = 0;
      for (double v : agg.values) var += (v - mean) * (v - mean);
      const size_t m = agg.values.size();
      const double sem = m > 1 ? std::sqrt(var / (static_cast<double>(m - 1) *
                                                  static_cast<double>(m)))
                               : 0.0;
      curve.points.push_back({p, mean, std::max(sem, 1e-12)});
    }
    if (!curve.points.empty()) curves.push_back(std::move(curve));
  }
  return curves;
}

AnalyzeConfig load_analyze_config(const std::string& path) {
  const nlohmann::json j = load_config_json(path);
  AnalyzeConfig c;
  for (const auto& f : j.at("inputs")) c.inputs.push_back(f.get<std::string>());
  c.observable = j.at("observable").get<std::string>();
  if (j.contains("ansatz")) c.ansatz = j["ansatz"].get<std::string>();
  if (j.contains("fixed_z")) c.fixed_z = j["fixed_z"].get<double>();
  if (j.contains("n_boot")) c.n_boot = j["n_boot"].get<uint64_t>();
  if (j.contains("collapse_boot")) c.collapse_boot = j["collapse_boot"].get<uint64_t>();
  if (j.contains("strict_size_filter")) {
    c.strict_size_filter = j["strict_size_filter"].get<bool>();
  }
  if (j.contains("max_censored")) c.max_censored = j["max_censored"].get<double>();
  if (j.contains("output")) c.output = j["output"].get<std::string>();
  return c;
}

int run_analyze(const AnalyzeConfig& config) {
  const auto all_curves =
      curves_from_csv(config.inputs, config.observable, config.max_censored);
  if (all_curves.empty()) {
    throw std::runtime_error("no curves found for observable " + config.observable);
  }
  Ansatz ansatz = Ansatz::Standard;
  if (config.ansatz == "dynamic") ansatz = Ansatz::Dynamic;
  else if (config.ansatz == "log_normalized") ansatz = Ansatz::LogNormalized;
  else if (config.ansatz != "standard") {
    throw std::invalid_argument("unknown ansatz: " + config.ansatz);
  }

  std::map<std::pair<std::string, uint32_t>, std::vector<ObservableCurve>> groups;
  for (const auto& c : all_curves) groups[{c.model, c.k}].push_back(c);

  nlohmann::json out = nlohmann::json::array();
  for (auto& [mk, group] : groups) {
    const auto& [model, k] = mk;
    auto usable = filter_small_sizes(group, k, config.strict_size_filter);
    nlohmann::json entry;
    entry["model"] = model;
    entry["k"] = k;
    entry["observable"] = config.observable;
    if (usable.size() < 2) {
      entry["error"] =
          "underdetermined: need curves from at least two sizes after the size filter";
      out.push_back(entry);
      continue;
    }
    // Crossings are taken on y / N^z (and / log2 N for the log-normalized
    // form), with z pinned; the collapse may still fit z.
    const double z_for_crossing =
        ansatz == Ansatz::Standard ? 0.0
                                   : config.fixed_z.value_or(ansatz == Ansatz::Dynamic ? 1.0 : 0.0);
    std::vector<ObservableCurve> crossing_curves = usable;
    for (auto& c : crossing_curves) {
      double denom = std::pow(static_cast<double>(c.n_qubits), z_for_crossing);
      if (ansatz == Ansatz::LogNormalized) {
        denom *= std::log2(static_cast<double>(c.n_qubits));
      }
      for (auto& pt : c.points) {
        pt.value /= denom;
        pt.stderr_ /= denom;
      }
    }
    try {
      const auto crossing =
          crossing_point(crossing_curves, config.n_boot, derive_seed({1, k}));
      entry["crossing_p_c"] = crossing.p_c;
      entry["crossing_p_c_err"] = crossing.p_c_err;
    } catch (const std::exception& e) {
      entry["crossing_error"] = e.what();
    }
    try {
      CollapseOptions opts;
      opts.fixed_z = ansatz == Ansatz::Standard ? std::nullopt : config.fixed_z;
      opts.n_boot = config.collapse_boot;
      opts.seed = derive_seed({2, k});
      const auto fit = collapse_fit(usable, ansatz, opts);
      entry["fit"] = nlohmann::json::parse(fit.to_json(config.observable, model, k));
    } catch (const std::exception& e) {
      entry["fit_error"] = e.what();
    }
    out.push_back(entry);
  }

  const std::string text = out.dump(2);
  if (config.output.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(config.output);
    if (!f) throw std::runtime_error("cannot write " + config.output);
    f << text << "\n";
  }
  return 0;
}

}  // namespace scrambler
