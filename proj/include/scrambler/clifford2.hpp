#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "scrambler/rng.hpp"

namespace scrambler {

// Primitive operations on an (ordered) qubit pair (a, b).
enum class Clifford2Op : uint8_t { HA, HB, PA, PB, CZ };

// The two-qubit Clifford group modulo global phase, enumerated once by closing
// the generator set {H_a, H_b, P_a, P_b, CZ}. Each element is stored as (i) its
// conjugation table on the 15 nontrivial two-qubit Paulis and (ii) a shortest
// generator word that realises it, so applying a sampled element to any
// representation is just a replay of primitive gates.
class Clifford2Group {
 public:
  static constexpr size_t kOrder = 11520;

  static const Clifford2Group& instance();

  size_t size() const { return tables_.size(); }

  // Image of a 4-bit Pauli (bit0=x_a, bit1=z_a, bit2=x_b, bit3=z_b) under
  // conjugation by element `idx`. Returned byte: bits 0-3 image, bit 4 sign.
  uint8_t conjugate(uint32_t idx, uint8_t pauli) const {
    return tables_[idx][pauli];
  }

  std::span<const Clifford2Op> gate_word(uint32_t idx) const {
    return {words_.data() + word_offset_[idx],
            word_offset_[idx + 1] - word_offset_[idx]};
  }

  uint32_t sample(Rng& rng) const {
    return static_cast<uint32_t>(rng.below(tables_.size()));
  }

 private:
  Clifford2Group();

  std::vector<std::array<uint8_t, 16>> tables_;
  std::vector<Clifford2Op> words_;
  std::vector<uint32_t> word_offset_;
};

// Applies one primitive op to a 4-bit Pauli; returns image byte as above.
uint8_t apply_clifford2_op(Clifford2Op op, uint8_t pauli);

}  // namespace scrambler
