#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scrambler/clifford2.hpp"
#include "scrambler/rng.hpp"

namespace scrambler {

// Brute-force statevector simulator used as an independent cross-check for the
// tableau path. Qubit q maps to bit q of the amplitude index. Capped at 12
// qubits so exhaustive region sweeps stay cheap.
struct DenseState {
  size_t n = 0;
  std::vector<std::complex<double>> amp;
};

inline constexpr size_t kOracleMaxQubits = 12;

DenseState oracle_zero_state(size_t n);

// Applies a 2x2 or 4x4 unitary. For two qubits the matrix acts on the basis
// |q0 q1> with q0 the high bit. Throws if the matrix is not unitary to 1e-10.
void oracle_apply_gate(DenseState& state, std::span<const std::complex<double>> matrix,
                       std::span<const size_t> qubits);

// Z measurement with Born-rule probabilities. `forced` replays a recorded
// outcome and throws if its probability is below 1e-12.
int oracle_measure_z(DenseState& state, size_t qubit, Rng* rng,
                     std::optional<int> forced = std::nullopt);

double oracle_measure_prob_plus(const DenseState& state, size_t qubit);

// Von Neumann entropy (nats) of the reduced state on `region`.
double oracle_entropy(const DenseState& state, std::span<const uint32_t> region);
double oracle_renyi2(const DenseState& state, std::span<const uint32_t> region);

double oracle_mutual_information(const DenseState& state, std::span<const uint32_t> a,
                                 std::span<const uint32_t> b);
double oracle_tripartite_mi(const DenseState& state, std::span<const uint32_t> a,
                            std::span<const uint32_t> b, std::span<const uint32_t> c);

// Fixed gate matrices (row-major).
std::span<const std::complex<double>> oracle_h_matrix();
std::span<const std::complex<double>> oracle_p_matrix();
std::span<const std::complex<double>> oracle_cz_matrix();
std::span<const std::complex<double>> oracle_cnot_matrix();
std::span<const std::complex<double>> oracle_q_gate_matrix();

// 4x4 unitary (up to global phase) of a two-qubit Clifford group element,
// composed from its generator word.
std::vector<std::complex<double>> oracle_clifford2_matrix(uint32_t group_index);

}  // namespace scrambler
