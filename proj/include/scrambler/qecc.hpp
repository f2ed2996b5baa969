#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "scrambler/tableau.hpp"

namespace scrambler {

// Diagnostics of the error-correcting code carried by a system maximally
// entangled with a reference (tableau layout: system [0, n_system), reference
// [n_system, n)). Entropies are exact multiples of ln 2, so everything here
// works on integer entropy units.

// S_R / (N ln 2).
double code_rate(const Tableau& t, uint32_t n_system);
int reference_entropy_int(const Tableau& t, uint32_t n_system);

struct CodeDistanceResult {
  bool has_code = false;  // false: even |A| = N never reaches the threshold
  uint32_t a_star = 0;    // smallest window size with max_offset I(A,R) >= threshold
};

// Contiguous code distance: windows are circular over the system qubits; a
// size counts as breaking the code when any offset reaches the threshold
// (worst case over error locations). threshold_int is in units of ln 2.
CodeDistanceResult contiguous_code_distance(const Tableau& t, uint32_t n_system,
                                            int threshold_int = 1);

// I(A,R) in units of ln 2 for the circular window [offset, offset + size).
int window_reference_mi_int(const Tableau& t, uint32_t n_system, uint32_t offset,
                            uint32_t size);

// log2 of the number of undetectable errors localizable on `region`, computed
// by symplectic linear algebra on the system's projected stabilizer group.
// Verification-grade: intended for small n.
int localizable_error_count(const Tableau& t, uint32_t n_system,
                            std::span<const uint32_t> region);

enum class HammingVariant { AllErrors, Contiguous };

// Nondegenerate quantum Hamming bound on the code rate for correctable error
// weight w: all-error variant 1 - (w/N) log2 3 - H2(w/N); contiguous variant
// 1 - (w/N) log2 3 - log2(N - w)/N (requires finite N).
double hamming_bound(double w_over_n, HammingVariant variant,
                     std::optional<uint32_t> n = std::nullopt);

}  // namespace scrambler
