#include "scrambler/clifford2.hpp"

#include <array>
#include <complex>
#include <vector>

#include "doctest.h"
#include "scrambler/oracle.hpp"

using namespace scrambler;

namespace {

using cplx = std::complex<double>;

// sigma on two qubits from 4 bits (x_a, z_a, x_b, z_b), qubit a = high bit.
std::vector<cplx> pauli_matrix(uint8_t bits) {
  auto single = [](bool x, bool z) -> std::vector<cplx> {
    const cplx i{0, 1};
    if (x && z) return {0, -i, i, 0};  // Y
    if (x) return {0, 1, 1, 0};
    if (z) return {1, 0, 0, -1};
    return {1, 0, 0, 1};
  };
  const auto a = single(bits & 1, (bits >> 1) & 1);
  const auto b = single((bits >> 2) & 1, (bits >> 3) & 1);
  std::vector<cplx> out(16);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out[(i * 2 + k) * 4 + (j * 2 + l)] = a[i * 2 + j] * b[k * 2 + l];
  return out;
}

std::vector<cplx> mul(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> out(16, cplx{0, 0});
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) out[i * 4 + j] += a[i * 4 + k] * b[k * 4 + j];
  return out;
}

std::vector<cplx> dagger(const std::vector<cplx>& a) {
  std::vector<cplx> out(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i * 4 + j] = std::conj(a[j * 4 + i]);
  return out;
}

bool matrices_close(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  for (int i = 0; i < 16; ++i) {
    if (std::abs(a[i] - b[i]) > 1e-9) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("group closes at order 11520") {
  CHECK(Clifford2Group::instance().size() == Clifford2Group::kOrder);
}

TEST_CASE("conjugation tables match explicit matrix conjugation") {
  const auto& group = Clifford2Group::instance();
  // Exhaustive over the group and all nontrivial Paulis.
  for (uint32_t idx = 0; idx < group.size(); ++idx) {
    const auto u = oracle_clifford2_matrix(idx);
    const auto udag = dagger(u);
    for (uint8_t v = 1; v < 16; ++v) {
      const uint8_t img = group.conjugate(idx, v);
      auto expected = pauli_matrix(img & 0x0f);
      if (img & 0x10) {
        for (auto& e : expected) e = -e;
      }
      const auto actual = mul(mul(u, pauli_matrix(v)), udag);
      if (!matrices_close(actual, expected)) {
        CAPTURE(idx);
        CAPTURE(static_cast<int>(v));
        REQUIRE(false);
      }
    }
  }
}

TEST_CASE("identity element maps every pauli to itself") {
  const auto& group = Clifford2Group::instance();
  bool found_identity = false;
  for (uint32_t idx = 0; idx < group.size(); ++idx) {
    bool is_id = true;
    for (uint8_t v = 0; v < 16; ++v) {
      if (group.conjugate(idx, v) != v) is_id = false;
    }
    if (is_id) {
      found_identity = true;
      CHECK(group.gate_word(idx).empty());
    }
  }
  CHECK(found_identity);
}

TEST_CASE("sampling is uniform over the enumerated group") {
  const auto& group = Clifford2Group::instance();
  Rng rng(20240);
  const uint64_t draws = 200000;
  std::vector<uint32_t> counts(group.size(), 0);
  for (uint64_t i = 0; i < draws; ++i) counts[group.sample(rng)]++;
  // chi-square against uniform; dof ~ 11519, 5 sigma band
  const double expected = static_cast<double>(draws) / group.size();
  double chi2 = 0;
  for (uint32_t c : counts) {
    chi2 += (c - expected) * (c - expected) / expected;
  }
  const double dof = static_cast<double>(group.size() - 1);
  CHECK(chi2 > dof - 5.0 * std::sqrt(2.0 * dof));
  CHECK(chi2 < dof + 5.0 * std::sqrt(2.0 * dof));
}
