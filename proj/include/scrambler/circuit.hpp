#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scrambler/rng.hpp"

namespace scrambler {

enum class Model { PWR2, NN, AA };

std::string model_name(Model m);
Model model_from_name(const std::string& name);

// Content of the two-qubit gates carried by a schedule. PWR2 circuits use the
// fixed entangling gate CZ * (H x H); NN and AA circuits draw uniformly random
// two-qubit Cliffords.
enum class GateKind { FixedQ, RandomClifford };

struct CircuitParams {
  uint32_t n_qubits = 0;   // N, power of two
  uint32_t k = 1;          // nonlocality, 1..log2(N)
  Model model = Model::PWR2;
  uint32_t n_layers = 0;   // T, interaction layers
  double meas_rate = 0.0;  // p
  uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

struct GateLayer {
  std::vector<std::pair<uint32_t, uint32_t>> pairs;  // disjoint, cover all qubits
  uint32_t layer_index = 0;                          // 1-based
};

struct CircuitSchedule {
  CircuitParams params;
  std::vector<GateLayer> layers;
  std::set<uint32_t> phase_layer_after;  // PWR2 only: after each even+odd block
  GateKind gate_kind = GateKind::FixedQ;

  std::string to_json() const;
};

// Single interaction layer, 1 <= layer <= T. Pure function of (params, layer),
// so long schedules can be streamed without materialising them.
GateLayer make_layer(const CircuitParams& params, uint32_t layer);

// Whether a global single-qubit phase layer follows interaction layer `layer`.
bool phase_after(const CircuitParams& params, uint32_t layer);

GateKind gate_kind_for(Model model);

CircuitSchedule build_schedule(const CircuitParams& params);

// Qubits measured after interaction layer `layer` (1-based), ascending.
// Deterministic in (seed, layer, qubit); layers are independent.
std::vector<uint32_t> sample_measurements(const CircuitParams& params, uint32_t layer);

// NN brickwork of uniformly random two-qubit Cliffords, no measurements.
CircuitSchedule build_thermalizer(uint32_t n_qubits, uint32_t n_layers, uint64_t seed);

}  // namespace scrambler
