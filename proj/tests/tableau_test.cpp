#include "scrambler/tableau.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "scrambler/bitmat.hpp"
#include "scrambler/oracle.hpp"

using namespace scrambler;

namespace {

constexpr double kLn2 = std::numbers::ln2;

std::string stab_string(const Tableau& t, size_t r) {
  const size_t n = t.num_qubits();
  std::vector<uint64_t> xz(words_for_bits(2 * n));
  t.stab_row_xz(r, xz);
  auto bit = [&](size_t b) { return (xz[b / 64] >> (b % 64)) & 1u; };
  std::string out = t.stab_sign(r) ? "-" : "+";
  for (size_t q = 0; q < n; ++q) {
    const bool x = bit(q), z = bit(n + q);
    out += x && z ? 'Y' : (x ? 'X' : (z ? 'Z' : 'I'));
  }
  return out;
}

bool has_stabilizer(const Tableau& t, const std::string& target) {
  for (size_t r = 0; r < t.num_qubits(); ++r) {
    if (stab_string(t, r) == target) return true;
  }
  return false;
}

std::vector<uint32_t> region(std::initializer_list<uint32_t> qs) { return qs; }

}  // namespace

TEST_CASE("z-polarized initial state") {
  Tableau t(4);
  CHECK(t.check_invariants());
  CHECK(t.entropy(region({0})) == 0.0);
  CHECK(t.entropy(region({0, 2, 3})) == 0.0);
  Rng rng(1);
  for (uint32_t q = 0; q < 4; ++q) {
    bool was_random = true;
    CHECK(t.measure_z(q, rng, &was_random) == +1);
    CHECK_FALSE(was_random);
  }
  CHECK(t.mutual_information(region({0}), region({1})) == 0.0);
}

TEST_CASE("hadamard maps Z to X") {
  Tableau t(1);
  t.apply_h(0);
  CHECK(stab_string(t, 0) == "+X");
  t.apply_h(0);
  CHECK(stab_string(t, 0) == "+Z");
}

TEST_CASE("cnot maps X0 to X0X1 and Z1 to Z0Z1") {
  Tableau t(2);
  t.apply_h(0);
  t.apply_cnot(0, 1);
  CHECK(has_stabilizer(t, "+XX"));
  CHECK(has_stabilizer(t, "+ZZ"));
  CHECK(t.check_invariants());
}

TEST_CASE("cz maps X0 to X0Z1 with plus sign") {
  Tableau t(2);
  t.apply_h(0);  // stabilizers {X_, _Z}
  t.apply_cz(0, 1);
  CHECK(has_stabilizer(t, "+XZ"));
  CHECK(has_stabilizer(t, "+IZ"));
}

TEST_CASE("q gate on |00> gives the two-qubit cluster state") {
  Tableau t(2);
  t.apply_q_gate(0, 1);
  CHECK(has_stabilizer(t, "+XZ"));
  CHECK(has_stabilizer(t, "+ZX"));
  CHECK(t.entropy(region({0})) == doctest::Approx(kLn2));
  CHECK(t.check_invariants());
}

TEST_CASE("a full layer of q gates keeps the state pure") {
  Tableau t(8);
  for (uint32_t i = 0; i < 8; i += 2) t.apply_q_gate(i, i + 1);
  CHECK(t.entropy(region({0, 1, 2, 3, 4, 5, 6, 7})) == 0.0);
}

TEST_CASE("measuring |+> is a fair coin and collapses the state") {
  int plus = 0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Tableau t(1);
    t.apply_h(0);
    Rng rng(seed);
    bool was_random = false;
    const int outcome = t.measure_z(0, rng, &was_random);
    CHECK(was_random);
    if (outcome > 0) ++plus;
    CHECK(stab_string(t, 0) == (outcome > 0 ? "+Z" : "-Z"));
    // repeated measurement is now deterministic
    CHECK(t.measure_z(0, rng, &was_random) == outcome);
    CHECK_FALSE(was_random);
  }
  CHECK(plus > 60);
  CHECK(plus < 140);
}

TEST_CASE("bell pair: perfect outcome correlation and entropies") {
  for (uint64_t seed = 0; seed < 32; ++seed) {
    Tableau t = init_bell_reference(1, 1);
    CHECK(t.entropy(region({0})) == doctest::Approx(kLn2));
    CHECK(t.mutual_information(region({0}), region({1})) == doctest::Approx(2 * kLn2));
    Rng rng(seed);
    const int a = t.measure_z(0, rng);
    bool was_random = true;
    const int b = t.measure_z(1, rng, &was_random);
    CHECK_FALSE(was_random);
    CHECK(a == b);
  }
}

TEST_CASE("bell reference entropies") {
  const auto full = init_bell_reference(4, 4);
  CHECK(full.entropy(index_range(4, 8)) == doctest::Approx(4 * kLn2));
  CHECK(full.entropy(index_range(0, 8)) == 0.0);
  const auto single = init_bell_reference(4, 1);
  CHECK(single.entropy(index_range(4, 5)) == doctest::Approx(kLn2));
  CHECK(single.entropy(index_range(0, 4)) == doctest::Approx(kLn2));
  CHECK_THROWS(init_bell_reference(2, 3));
}

TEST_CASE("ghz mutual information") {
  Tableau t(3);
  t.apply_h(0);
  t.apply_cnot(0, 1);
  t.apply_cnot(1, 2);
  CHECK(t.mutual_information(region({0}), region({1})) == doctest::Approx(kLn2));

  Tableau g4(4);
  g4.apply_h(0);
  g4.apply_cnot(0, 1);
  g4.apply_cnot(1, 2);
  g4.apply_cnot(2, 3);
  CHECK(g4.tripartite_mi(region({0}), region({1}), region({2})) ==
        doctest::Approx(kLn2));
  CHECK(g4.tripartite_mi(region({2}), region({1}), region({0})) ==
        doctest::Approx(kLn2));
}

TEST_CASE("tripartite mi vanishes on product states and rejects overlap") {
  Tableau t(4);
  CHECK(t.tripartite_mi(region({0}), region({1}), region({2})) == 0.0);
  CHECK_THROWS(t.mutual_information(region({0, 1}), region({1})));
  CHECK_THROWS(t.tripartite_mi(region({0}), region({0}), region({2})));
}

TEST_CASE("random two-qubit cliffords preserve purity and bell entropy") {
  Rng rng(5);
  const auto& group = Clifford2Group::instance();
  Tableau t = init_bell_reference(2, 2);  // pairs (0,2) and (1,3)
  for (int step = 0; step < 50; ++step) {
    t.apply_clifford2(group.sample(rng), 0, 1);
    CHECK(t.entropy_int(index_range(0, 4)) == 0);
    CHECK(t.entropy_int(index_range(2, 4)) == 2);  // reference untouched
  }
  CHECK(t.check_invariants());
}

TEST_CASE("uniform clifford average z outcome is exactly one half") {
  const auto& group = Clifford2Group::instance();
  double total_prob_plus = 0;
  for (uint32_t idx = 0; idx < group.size(); ++idx) {
    Tableau t(2);
    t.apply_clifford2(idx, 0, 1);
    if (t.measurement_is_random(0)) {
      total_prob_plus += 0.5;
    } else {
      Rng rng(0);
      total_prob_plus += t.measure_z(0, rng) > 0 ? 1.0 : 0.0;
    }
  }
  CHECK(total_prob_plus / static_cast<double>(group.size()) == doctest::Approx(0.5));

  // Monte Carlo: outcome frequency within 5 sigma of the binomial.
  Rng rng(77);
  const int samples = 10000;
  int plus = 0;
  for (int i = 0; i < samples; ++i) {
    Tableau t(2);
    t.apply_clifford2(group.sample(rng), 0, 1);
    if (t.measure_z(0, rng) > 0) ++plus;
  }
  const double freq = static_cast<double>(plus) / samples;
  CHECK(std::abs(freq - 0.5) < 5.0 * 0.005);
}

TEST_CASE("entropy equals complement entropy for pure states") {
  Rng rng(11);
  const auto& group = Clifford2Group::instance();
  Tableau t(8);
  for (int step = 0; step < 100; ++step) {
    const uint32_t a = static_cast<uint32_t>(rng.below(8));
    uint32_t b = static_cast<uint32_t>(rng.below(8));
    if (a == b) b = (b + 1) % 8;
    t.apply_clifford2(group.sample(rng), a, b);
  }
  for (uint32_t mask = 1; mask < 255; ++mask) {
    std::vector<uint32_t> a, complement;
    for (uint32_t q = 0; q < 8; ++q) {
      ((mask >> q) & 1u ? a : complement).push_back(q);
    }
    CHECK(t.entropy_int(a) == t.entropy_int(complement));
    CHECK(t.entropy_int(a) >= 0);
    CHECK(t.entropy_int(a) <= static_cast<int>(a.size()));
  }
}

TEST_CASE("mutual information is monotone under enlarging one side") {
  Rng rng(13);
  const auto& group = Clifford2Group::instance();
  Tableau t = init_bell_reference(6, 2);
  for (int step = 0; step < 60; ++step) {
    const uint32_t a = static_cast<uint32_t>(rng.below(6));
    uint32_t b = static_cast<uint32_t>(rng.below(6));
    if (a == b) b = (b + 1) % 6;
    t.apply_clifford2(group.sample(rng), a, b);
    if (step % 3 == 0) t.measure_z(rng.below(6), rng);
  }
  const auto ref = index_range(6, 8);
  for (uint32_t size = 1; size < 6; ++size) {
    const int small = t.mutual_information_int(index_range(0, size), ref);
    const int large = t.mutual_information_int(index_range(0, size + 1), ref);
    CHECK(small <= large);
    CHECK(small >= 0);
  }
}

TEST_CASE("invariants hold through random monitored evolution") {
  Rng rng(17);
  const auto& group = Clifford2Group::instance();
  Tableau t(6);
  for (int step = 0; step < 200; ++step) {
    const uint32_t a = static_cast<uint32_t>(rng.below(6));
    uint32_t b = static_cast<uint32_t>(rng.below(6));
    if (a == b) b = (b + 1) % 6;
    t.apply_clifford2(group.sample(rng), a, b);
    if (step % 4 == 0) t.measure_z(rng.below(6), rng);
    if (step % 50 == 0) REQUIRE(t.check_invariants());
  }
  CHECK(t.check_invariants());
}

// Lockstep comparison against the dense statevector: same gates, forced
// measurement outcomes, every subregion entropy exact.
TEST_CASE("tableau agrees with the statevector oracle step by step") {
  const auto& group = Clifford2Group::instance();
  for (uint64_t trial = 0; trial < 30; ++trial) {
    const size_t n = 2 + trial % 4;  // 2..5 qubits
    Rng rng(derive_seed({trial, 999}));
    Tableau t(n);
    DenseState psi = oracle_zero_state(n);
    for (int step = 0; step < 40; ++step) {
      const uint32_t a = static_cast<uint32_t>(rng.below(n));
      uint32_t b = static_cast<uint32_t>(rng.below(n));
      if (a == b) b = static_cast<uint32_t>((b + 1) % n);
      const uint32_t idx = group.sample(rng);
      t.apply_clifford2(idx, a, b);
      const auto u = oracle_clifford2_matrix(idx);
      const size_t qubits[2] = {a, b};
      oracle_apply_gate(psi, u, qubits);

      if (step % 3 == 0) {
        const uint32_t q = static_cast<uint32_t>(rng.below(n));
        bool was_random = false;
        const int outcome = t.measure_z(q, rng, &was_random);
        const double p_plus = oracle_measure_prob_plus(psi, q);
        if (was_random) {
          CHECK(p_plus == doctest::Approx(0.5));
        } else {
          CHECK(p_plus == doctest::Approx(outcome > 0 ? 1.0 : 0.0));
        }
        oracle_measure_z(psi, q, nullptr, outcome);
      }

      for (uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<uint32_t> reg;
        for (uint32_t q = 0; q < n; ++q) {
          if ((mask >> q) & 1u) reg.push_back(q);
        }
        const double dense = oracle_entropy(psi, reg);
        CHECK(std::abs(dense - t.entropy(reg)) < 1e-8);
      }
    }
  }
}
