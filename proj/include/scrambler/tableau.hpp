#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scrambler/clifford2.hpp"
#include "scrambler/rng.hpp"

namespace scrambler {

// Stabilizer/destabilizer tableau over n qubits, stored column-major: for each
// qubit the X and Z bits of all 2n generator rows are packed into 64-bit
// words, split into a destabilizer half and a stabilizer half. Gates then cost
// O(n/64) word operations and a projective measurement O(n^2/64).
//
// Row convention: destabilizer i pairs with stabilizer i; row signs are exact.
// Not safe for concurrent mutation; each trajectory owns its tableau.
class Tableau {
 public:
  explicit Tableau(size_t n);

  size_t num_qubits() const { return n_; }

  void apply_h(size_t q);
  void apply_p(size_t q);
  void apply_cnot(size_t control, size_t target);
  void apply_cz(size_t a, size_t b);
  // Q = CZ_ab (H_a H_b): Hadamards act first.
  void apply_q_gate(size_t a, size_t b);
  void apply_clifford2(uint32_t group_index, size_t a, size_t b);

  // Projective Z measurement; returns +1 or -1. `rng` is consumed only when
  // the outcome is random; *was_random reports the branch taken.
  int measure_z(size_t q, Rng& rng, bool* was_random = nullptr);
  bool measurement_is_random(size_t q) const;

  // Entanglement entropy of `region` in units of ln 2 (exact integer).
  int entropy_int(std::span<const uint32_t> region) const;
  double entropy(std::span<const uint32_t> region) const;

  int mutual_information_int(std::span<const uint32_t> a,
                             std::span<const uint32_t> b) const;
  double mutual_information(std::span<const uint32_t> a,
                            std::span<const uint32_t> b) const;

  // I(A:B:C) = I(A,B) + I(A,C) - I(A,BC), in units of ln 2.
  int tripartite_mi_int(std::span<const uint32_t> a, std::span<const uint32_t> b,
                        std::span<const uint32_t> c) const;
  double tripartite_mi(std::span<const uint32_t> a, std::span<const uint32_t> b,
                       std::span<const uint32_t> c) const;

  // Symplectic pairing and row independence; verification use only.
  bool check_invariants() const;

  size_t column_words() const { return words_; }
  std::span<const uint64_t> stab_x_column(size_t q) const { return {xs(q), words_}; }
  std::span<const uint64_t> stab_z_column(size_t q) const { return {zs(q), words_}; }

  // Stabilizer row r as packed (x_0..x_{n-1} | z_0..z_{n-1}) bits.
  void stab_row_xz(size_t r, std::span<uint64_t> xz) const;
  bool stab_sign(size_t r) const;

 private:
  const uint64_t* xd(size_t q) const { return cols_.data() + q * 4 * words_; }
  const uint64_t* zd(size_t q) const { return xd(q) + words_; }
  const uint64_t* xs(size_t q) const { return xd(q) + 2 * words_; }
  const uint64_t* zs(size_t q) const { return xd(q) + 3 * words_; }
  uint64_t* xd(size_t q) { return cols_.data() + q * 4 * words_; }
  uint64_t* zd(size_t q) { return xd(q) + words_; }
  uint64_t* xs(size_t q) { return xd(q) + 2 * words_; }
  uint64_t* zs(size_t q) { return xd(q) + 3 * words_; }

  bool get_bit(const uint64_t* col, size_t r) const {
    return (col[r / 64] >> (r % 64)) & 1u;
  }
  static void assign_bit(uint64_t* col, size_t r, bool v) {
    const uint64_t m = uint64_t{1} << (r % 64);
    col[r / 64] = v ? (col[r / 64] | m) : (col[r / 64] & ~m);
  }

  int measure_random(size_t q, size_t pivot, Rng& rng);
  int measure_deterministic(size_t q) const;

  size_t n_;
  size_t words_;  // words per n-row column half
  std::vector<uint64_t> cols_;
  std::vector<uint64_t> sign_d_, sign_s_;

  // Measurement scratch, reused across calls.
  mutable std::vector<uint64_t> mask_d_, mask_s_, s1_d_, s2_d_, s1_s_, s2_s_;
  mutable std::vector<uint8_t> pivot_x_, pivot_z_;
  mutable std::vector<uint64_t> row_x_, row_z_, acc_x_, acc_z_;
};

// |0...0>: stabilizers Z_i, destabilizers X_i.
Tableau init_z_polarized(size_t n);

// System qubits [0, n_system) followed by reference qubits; reference qubit i
// is Bell-paired with system qubit i, the rest start z-polarized.
Tableau init_bell_reference(size_t n_system, size_t n_reference);

// Convenience index ranges.
std::vector<uint32_t> index_range(uint32_t begin, uint32_t end);

}  // namespace scrambler
