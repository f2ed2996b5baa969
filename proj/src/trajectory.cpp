#include "scrambler/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace scrambler {

std::string MeasurementRecord::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : events) {
    j.push_back({{"t", e.layer},
                 {"qubit", e.qubit},
                 {"outcome", static_cast<int>(e.outcome)},
                 {"random", e.was_random}});
  }
  return j.dump();
}

namespace {

void apply_layer_gates(const CircuitParams& params, uint32_t layer, Tableau& state,
                       Rng& rng) {
  const GateLayer gates = make_layer(params, layer);
  if (gate_kind_for(params.model) == GateKind::FixedQ) {
    for (const auto& [i, j] : gates.pairs) state.apply_q_gate(i, j);
  } else {
    const auto& group = Clifford2Group::instance();
    for (const auto& [i, j] : gates.pairs) {
      state.apply_clifford2(group.sample(rng), i, j);
    }
  }
}

void apply_layer_measurements(const CircuitParams& params, uint32_t layer,
                              uint32_t n_system, Tableau& state, Rng& rng,
                              MeasurementRecord* record) {
  for (uint32_t q : sample_measurements(params, layer)) {
    if (q >= n_system) continue;
    bool was_random = false;
    const int outcome = state.measure_z(q, rng, &was_random);
    if (record) {
      record->events.push_back({layer, q, static_cast<int8_t>(outcome), was_random});
    }
  }
}

void apply_phase_layer(const CircuitParams& params, uint32_t layer, uint32_t n_system,
                       Tableau& state) {
  if (!phase_after(params, layer)) return;
  for (uint32_t q = 0; q < n_system; ++q) state.apply_p(q);
}

}  // namespace

TrajectoryResult run_trajectory(const CircuitParams& params, uint32_t n_system,
                                Tableau& state, const ObservablePlan& plan,
                                uint64_t traj_seed) {
  params.validate();
  if (state.num_qubits() < n_system || n_system != params.n_qubits) {
    throw std::invalid_argument("schedule and tableau sizes disagree");
  }
  TrajectoryResult result;
  Rng rng(traj_seed);

  std::vector<uint32_t> sample_layers = plan.sample_layers;
  if (sample_layers.empty() &&
      (plan.tmi_quarters || plan.half_system_entropy || plan.reference_entropy)) {
    sample_layers.push_back(params.n_layers);
  }
  std::sort(sample_layers.begin(), sample_layers.end());

  const uint32_t n = n_system;
  const auto quarter_a = index_range(0, n / 4);
  const auto quarter_b = index_range(n / 4, n / 2);
  const auto quarter_c = index_range(n / 2, 3 * n / 4);
  const auto half = index_range(0, n / 2);
  const auto reference = index_range(n, static_cast<uint32_t>(state.num_qubits()));

  size_t next_sample = 0;
  for (uint32_t t = 1; t <= params.n_layers; ++t) {
    apply_layer_gates(params, t, state, rng);
    apply_layer_measurements(params, t, n_system, state, rng,
                             plan.record_measurements ? &result.record : nullptr);
    apply_phase_layer(params, t, n_system, state);
    while (next_sample < sample_layers.size() && sample_layers[next_sample] == t) {
      if (plan.tmi_quarters) {
        result.samples.push_back({t, "tmi", state.tripartite_mi(quarter_a, quarter_b, quarter_c)});
      }
      if (plan.half_system_entropy) {
        result.samples.push_back({t, "s_half", state.entropy(half)});
      }
      if (plan.reference_entropy) {
        result.samples.push_back({t, "s_ref", state.entropy(reference)});
      }
      ++next_sample;
    }
  }
  return result;
}

PurificationResult purification_time(const CircuitParams& params, uint32_t n_system,
                                     Tableau& state, uint32_t max_layers,
                                     uint64_t traj_seed) {
  CircuitParams run = params;
  run.n_layers = max_layers;
  run.validate();
  if (state.num_qubits() != n_system + 1 || n_system != params.n_qubits) {
    throw std::invalid_argument("purification expects one reference qubit");
  }
  Rng rng(traj_seed);
  const std::vector<uint32_t> reference = {n_system};
  for (uint32_t t = 1; t <= max_layers; ++t) {
    apply_layer_gates(run, t, state, rng);
    apply_layer_measurements(run, t, n_system, state, rng, nullptr);
    apply_phase_layer(run, t, n_system, state);
    if (state.entropy_int(reference) == 0) {
      return {t, false};
    }
  }
  return {max_layers, true};
}

Tableau prepare_purification_state(uint32_t n_system, uint32_t thermal_layers,
                                   uint64_t seed) {
  Tableau state = init_bell_reference(n_system, 1);
  if (thermal_layers == 0) return state;
  CircuitParams thermal;
  thermal.n_qubits = n_system;
  thermal.k = 1;
  thermal.model = Model::NN;
  thermal.n_layers = thermal_layers;
  thermal.meas_rate = 0.0;
  thermal.seed = seed;
  Rng rng(derive_seed({seed, 0x746865726d616cULL}));
  for (uint32_t t = 1; t <= thermal_layers; ++t) {
    apply_layer_gates(thermal, t, state, rng);
  }
  return state;
}

}  // namespace scrambler
