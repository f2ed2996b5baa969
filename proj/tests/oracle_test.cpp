#include "scrambler/oracle.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"

using namespace scrambler;

namespace {
constexpr double kLn2 = std::numbers::ln2;
using cplx = std::complex<double>;
}  // namespace

TEST_CASE("identity and hadamard") {
  DenseState s = oracle_zero_state(1);
  const cplx id2[4] = {1, 0, 0, 1};
  const size_t q0[1] = {0};
  oracle_apply_gate(s, {id2, 4}, q0);
  CHECK(s.amp[0] == cplx{1, 0});
  oracle_apply_gate(s, oracle_h_matrix(), q0);
  CHECK(std::abs(s.amp[0] - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(s.amp[1] - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("cz after hadamards gives the uniform state with one flipped sign") {
  DenseState s = oracle_zero_state(2);
  const size_t both[2] = {0, 1};
  oracle_apply_gate(s, oracle_q_gate_matrix(), both);
  CHECK(std::abs(s.amp[0] - 0.5) < 1e-12);
  CHECK(std::abs(s.amp[1] - 0.5) < 1e-12);
  CHECK(std::abs(s.amp[2] - 0.5) < 1e-12);
  CHECK(std::abs(s.amp[3] + 0.5) < 1e-12);
}

TEST_CASE("non-unitary matrices are rejected") {
  DenseState s = oracle_zero_state(1);
  const cplx bad[4] = {1, 0, 0, 2};
  const size_t q0[1] = {0};
  CHECK_THROWS(oracle_apply_gate(s, {bad, 4}, q0));
}

TEST_CASE("measurements follow the born rule and forced replay") {
  DenseState s = oracle_zero_state(1);
  Rng rng(3);
  CHECK(oracle_measure_z(s, 0, &rng) == +1);  // |0> is deterministic

  const size_t q0[1] = {0};
  oracle_apply_gate(s, oracle_h_matrix(), q0);
  const int forced = oracle_measure_z(s, 0, nullptr, -1);
  CHECK(forced == -1);
  CHECK(std::abs(std::abs(s.amp[1]) - 1.0) < 1e-12);  // post-state |1>

  // forcing a zero-probability outcome is rejected
  CHECK_THROWS(oracle_measure_z(s, 0, nullptr, +1));
}

TEST_CASE("bell pair measurements agree and halves carry ln 2") {
  DenseState s = oracle_zero_state(2);
  const size_t q0[1] = {0};
  const size_t pair[2] = {0, 1};
  oracle_apply_gate(s, oracle_h_matrix(), q0);
  oracle_apply_gate(s, oracle_cnot_matrix(), pair);
  const std::vector<uint32_t> a = {0};
  CHECK(oracle_entropy(s, a) == doctest::Approx(kLn2).epsilon(1e-10));
  CHECK(oracle_renyi2(s, a) == doctest::Approx(kLn2).epsilon(1e-10));
  Rng rng(5);
  const int first = oracle_measure_z(s, 0, &rng);
  const int second = oracle_measure_z(s, 1, &rng);
  CHECK(first == second);
}

TEST_CASE("product states have zero entropy") {
  DenseState s = oracle_zero_state(4);
  const std::vector<uint32_t> r = {1, 2};
  CHECK(oracle_entropy(s, r) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("random clifford state entropies are integer multiples of ln 2") {
  const auto& group = Clifford2Group::instance();
  Rng rng(21);
  DenseState s = oracle_zero_state(6);
  for (int step = 0; step < 30; ++step) {
    const size_t a = rng.below(6);
    size_t b = rng.below(6);
    if (a == b) b = (b + 1) % 6;
    const size_t qubits[2] = {a, b};
    oracle_apply_gate(s, oracle_clifford2_matrix(group.sample(rng)), qubits);
  }
  for (uint32_t mask = 1; mask < 63; ++mask) {
    std::vector<uint32_t> reg;
    for (uint32_t q = 0; q < 6; ++q) {
      if ((mask >> q) & 1u) reg.push_back(q);
    }
    const double s_a = oracle_entropy(s, reg);
    const double in_units = s_a / kLn2;
    CHECK(std::abs(in_units - std::round(in_units)) < 1e-8);
    // Renyi-2 and von Neumann coincide on stabilizer states.
    CHECK(std::abs(oracle_renyi2(s, reg) - s_a) < 1e-8);
  }
}

TEST_CASE("ghz tripartite mutual information") {
  DenseState s = oracle_zero_state(4);
  const size_t q0[1] = {0};
  oracle_apply_gate(s, oracle_h_matrix(), q0);
  for (size_t q = 0; q + 1 < 4; ++q) {
    const size_t pair[2] = {q, q + 1};
    oracle_apply_gate(s, oracle_cnot_matrix(), pair);
  }
  const std::vector<uint32_t> a = {0}, b = {1}, c = {2};
  CHECK(oracle_tripartite_mi(s, a, b, c) == doctest::Approx(kLn2).epsilon(1e-8));
}
