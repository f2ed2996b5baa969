#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scrambler/circuit.hpp"
#include "scrambler/tableau.hpp"

namespace scrambler {

struct MeasurementEvent {
  uint32_t layer;
  uint32_t qubit;
  int8_t outcome;  // +1 / -1
  bool was_random;
};

struct MeasurementRecord {
  std::vector<MeasurementEvent> events;
  std::string to_json() const;
};

// What to evaluate while a trajectory runs. Regions refer to the system
// qubits; the reference (if any) occupies indices >= n_system.
struct ObservablePlan {
  bool tmi_quarters = false;       // I(A:B:C) over consecutive quarters
  bool half_system_entropy = false;
  bool reference_entropy = false;
  std::vector<uint32_t> sample_layers;  // empty = final layer only
  bool record_measurements = false;
};

struct ObsSample {
  uint32_t layer;
  std::string observable;
  double value;
};

struct TrajectoryResult {
  std::vector<ObsSample> samples;
  MeasurementRecord record;
};

// Runs layers 1..params.n_layers on `state`: gates, then sampled measurements
// on the first n_system qubits, then the phase layer where scheduled.
// Deterministic given (params, traj_seed).
TrajectoryResult run_trajectory(const CircuitParams& params, uint32_t n_system,
                                Tableau& state, const ObservablePlan& plan,
                                uint64_t traj_seed);

struct PurificationResult {
  uint32_t tau = 0;
  bool censored = false;
};

// First monitored layer after which the reference entropy reaches zero,
// censored at max_layers. params.n_layers is ignored in favour of max_layers.
PurificationResult purification_time(const CircuitParams& params, uint32_t n_system,
                                     Tableau& state, uint32_t max_layers,
                                     uint64_t traj_seed);

// Bell pair into qubit 0, then a random NN Clifford brickwork over the system.
Tableau prepare_purification_state(uint32_t n_system, uint32_t thermal_layers,
                                   uint64_t seed);

}  // namespace scrambler
