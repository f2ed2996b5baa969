#include "scrambler/circuit.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace scrambler {

std::string model_name(Model m) {
  switch (m) {
    case Model::PWR2: return "PWR2";
    case Model::NN: return "NN";
    case Model::AA: return "AA";
  }
  return "?";
}

Model model_from_name(const std::string& name) {
  if (name == "PWR2" || name == "pwr2") return Model::PWR2;
  if (name == "NN" || name == "nn") return Model::NN;
  if (name == "AA" || name == "aa") return Model::AA;
  throw std::invalid_argument("unknown model: " + name);
}

void CircuitParams::validate() const {
  if (n_qubits < 2 || !std::has_single_bit(n_qubits)) {
    throw std::invalid_argument("n_qubits must be a power of two >= 2");
  }
  const uint32_t log2n = static_cast<uint32_t>(std::countr_zero(n_qubits));
  if (model == Model::PWR2 && (k < 1 || k > log2n)) {
    throw std::invalid_argument("k must be in [1, log2 N]");
  }
  if (n_layers == 0) {
    throw std::invalid_argument("n_layers must be positive");
  }
  if (meas_rate < 0.0 || meas_rate > 1.0) {
    throw std::invalid_argument("meas_rate must be in [0, 1]");
  }
}

GateKind gate_kind_for(Model model) {
  return model == Model::PWR2 ? GateKind::FixedQ : GateKind::RandomClifford;
}

namespace {

// PWR2 sub-layer: pair (i, i + 2^{m-1} mod N) for every i whose block index
// floor(i / 2^{m-1}) has the requested parity.
GateLayer pwr2_layer(uint32_t n, uint32_t m, uint32_t parity, uint32_t layer) {
  GateLayer out;
  out.layer_index = layer;
  out.pairs.reserve(n / 2);
  const uint32_t d = 1u << (m - 1);
  for (uint32_t i = 0; i < n; ++i) {
    if (((i / d) & 1u) == parity) {
      out.pairs.emplace_back(i, (i + d) % n);
    }
  }
  return out;
}

GateLayer nn_layer(uint32_t n, uint32_t layer) {
  GateLayer out;
  out.layer_index = layer;
  out.pairs.reserve(n / 2);
  if (layer % 2 == 1) {
    for (uint32_t i = 0; i < n; i += 2) out.pairs.emplace_back(i, i + 1);
  } else {
    for (uint32_t i = 1; i < n; i += 2) out.pairs.emplace_back(i, (i + 1) % n);
  }
  return out;
}

GateLayer aa_layer(uint32_t n, uint64_t seed, uint32_t layer) {
  GateLayer out;
  out.layer_index = layer;
  out.pairs.reserve(n / 2);
  std::vector<uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  Rng rng(derive_seed({seed, 0x61615f6c61796572ULL, layer}));
  for (uint32_t i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.below(i + 1)]);
  }
  for (uint32_t i = 0; i < n; i += 2) out.pairs.emplace_back(perm[i], perm[i + 1]);
  return out;
}

}  // namespace

GateLayer make_layer(const CircuitParams& params, uint32_t layer) {
  if (layer < 1 || layer > params.n_layers) {
    throw std::out_of_range("layer index out of range");
  }
  switch (params.model) {
    case Model::PWR2: {
      // Blocks of k layers: even block (m = 1..k), then odd block (m = 1..k).
      const uint32_t pos = (layer - 1) % (2 * params.k);
      const uint32_t m = pos % params.k + 1;
      const uint32_t parity = pos < params.k ? 0u : 1u;
      return pwr2_layer(params.n_qubits, m, parity, layer);
    }
    case Model::NN:
      return nn_layer(params.n_qubits, layer);
    case Model::AA:
      return aa_layer(params.n_qubits, params.seed, layer);
  }
  throw std::logic_error("unreachable");
}

bool phase_after(const CircuitParams& params, uint32_t layer) {
  if (params.model != Model::PWR2) return false;
  return layer % (2 * params.k) == 0;
}

CircuitSchedule build_schedule(const CircuitParams& params) {
  params.validate();
  CircuitSchedule schedule;
  schedule.params = params;
  schedule.gate_kind = gate_kind_for(params.model);
  schedule.layers.reserve(params.n_layers);
  for (uint32_t t = 1; t <= params.n_layers; ++t) {
    schedule.layers.push_back(make_layer(params, t));
    if (phase_after(params, t)) schedule.phase_layer_after.insert(t);
  }
  return schedule;
}

std::vector<uint32_t> sample_measurements(const CircuitParams& params, uint32_t layer) {
  if (layer < 1 || layer > params.n_layers) {
    throw std::out_of_range("layer index out of range");
  }
  std::vector<uint32_t> out;
  for (uint32_t q = 0; q < params.n_qubits; ++q) {
    if (counter_bernoulli(params.seed, layer, q, params.meas_rate)) out.push_back(q);
  }
  return out;
}

CircuitSchedule build_thermalizer(uint32_t n_qubits, uint32_t n_layers, uint64_t seed) {
  CircuitParams params;
  params.n_qubits = n_qubits;
  params.k = 1;
  params.model = Model::NN;
  params.n_layers = n_layers;
  params.meas_rate = 0.0;
  params.seed = seed;
  return build_schedule(params);
}

std::string CircuitSchedule::to_json() const {
  nlohmann::json j;
  j["n_qubits"] = params.n_qubits;
  j["k"] = params.k;
  j["model"] = model_name(params.model);
  j["n_layers"] = params.n_layers;
  j["meas_rate"] = params.meas_rate;
  j["seed"] = params.seed;
  nlohmann::json layer_list = nlohmann::json::array();
  for (const auto& layer : layers) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [i, jj] : layer.pairs) pairs.push_back({i, jj});
    layer_list.push_back(std::move(pairs));
  }
  j["layers"] = std::move(layer_list);
  nlohmann::json meas;
  for (uint32_t t = 1; t <= params.n_layers; ++t) {
    auto qs = sample_measurements(params, t);
    if (!qs.empty()) meas[std::to_string(t)] = qs;
  }
  j["measurements"] = std::move(meas);
  return j.dump();
}

}  // namespace scrambler
