#include "scrambler/circuit.hpp"

#include <algorithm>
#include <set>

#include "doctest.h"

using namespace scrambler;

namespace {

CircuitParams make_params(uint32_t n, uint32_t k, Model model, uint32_t layers,
                          double p = 0.0, uint64_t seed = 7) {
  CircuitParams params;
  params.n_qubits = n;
  params.k = k;
  params.model = model;
  params.n_layers = layers;
  params.meas_rate = p;
  params.seed = seed;
  return params;
}

std::set<std::pair<uint32_t, uint32_t>> pair_set(const GateLayer& layer) {
  std::set<std::pair<uint32_t, uint32_t>> out;
  for (auto [i, j] : layer.pairs) {
    out.insert({std::min(i, j), std::max(i, j)});
  }
  return out;
}

bool is_perfect_matching(const GateLayer& layer, uint32_t n) {
  std::set<uint32_t> seen;
  for (auto [i, j] : layer.pairs) {
    if (i == j || i >= n || j >= n) return false;
    if (!seen.insert(i).second || !seen.insert(j).second) return false;
  }
  return seen.size() == n;
}

}  // namespace

TEST_CASE("pwr2 layer rules at N=8") {
  auto sched = build_schedule(make_params(8, 1, Model::PWR2, 4));
  CHECK(pair_set(sched.layers[0]) ==
        std::set<std::pair<uint32_t, uint32_t>>{{0, 1}, {2, 3}, {4, 5}, {6, 7}});
  CHECK(pair_set(sched.layers[1]) ==
        std::set<std::pair<uint32_t, uint32_t>>{{1, 2}, {3, 4}, {5, 6}, {0, 7}});

  auto sched2 = build_schedule(make_params(8, 2, Model::PWR2, 4));
  CHECK(pair_set(sched2.layers[1]) ==
        std::set<std::pair<uint32_t, uint32_t>>{{0, 2}, {1, 3}, {4, 6}, {5, 7}});
}

TEST_CASE("phase layers close each even+odd block") {
  auto sched = build_schedule(make_params(16, 2, Model::PWR2, 10));
  CHECK(sched.phase_layer_after == std::set<uint32_t>{4, 8});
  auto nn = build_schedule(make_params(16, 1, Model::NN, 10));
  CHECK(nn.phase_layer_after.empty());
}

TEST_CASE("every pwr2 layer is a perfect matching for all k and sizes") {
  for (uint32_t log2n = 1; log2n <= 11; ++log2n) {
    const uint32_t n = 1u << log2n;
    for (uint32_t k = 1; k <= log2n; ++k) {
      const auto params = make_params(n, k, Model::PWR2, 2 * k + 1);
      for (uint32_t t = 1; t <= params.n_layers; ++t) {
        CAPTURE(n);
        CAPTURE(k);
        CAPTURE(t);
        REQUIRE(is_perfect_matching(make_layer(params, t), n));
      }
    }
  }
}

TEST_CASE("even block union is the power-of-two circulant graph") {
  const uint32_t n = 64, k = 5;
  const auto params = make_params(n, k, Model::PWR2, 2 * k);
  std::set<std::pair<uint32_t, uint32_t>> edges;
  for (uint32_t t = 1; t <= k; ++t) {
    const auto set = pair_set(make_layer(params, t));
    edges.insert(set.begin(), set.end());
  }
  std::set<std::pair<uint32_t, uint32_t>> expected;
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t m = 1; m <= k; ++m) {
      const uint32_t j = (i + (1u << (m - 1))) % n;
      expected.insert({std::min(i, j), std::max(i, j)});
    }
  }
  CHECK(edges == expected);
}

TEST_CASE("pwr2 layers satisfy the circular distance rule") {
  const uint32_t n = 256;
  for (uint32_t k : {1u, 3u, 8u}) {
    const auto params = make_params(n, k, Model::PWR2, 2 * k);
    for (uint32_t t = 1; t <= 2 * k; ++t) {
      const uint32_t m = (t - 1) % k + 1;
      for (auto [i, j] : make_layer(params, t).pairs) {
        const uint32_t d = i < j ? j - i : i - j;
        const uint32_t circ = std::min(d, n - d);
        CHECK(circ == (1u << (m - 1)));
      }
    }
  }
}

TEST_CASE("nn brickwork alternates with periodic wrap") {
  const auto params = make_params(4, 1, Model::NN, 2);
  CHECK(pair_set(make_layer(params, 1)) ==
        std::set<std::pair<uint32_t, uint32_t>>{{0, 1}, {2, 3}});
  CHECK(pair_set(make_layer(params, 2)) ==
        std::set<std::pair<uint32_t, uint32_t>>{{1, 2}, {0, 3}});
}

TEST_CASE("aa layers are random perfect matchings, deterministic per seed") {
  const auto params = make_params(64, 1, Model::AA, 6);
  for (uint32_t t = 1; t <= 6; ++t) {
    CHECK(is_perfect_matching(make_layer(params, t), 64));
    CHECK(pair_set(make_layer(params, t)) == pair_set(make_layer(params, t)));
  }
  auto other = params;
  other.seed = 8;
  bool any_different = false;
  for (uint32_t t = 1; t <= 6; ++t) {
    if (pair_set(make_layer(params, t)) != pair_set(make_layer(other, t))) {
      any_different = true;
    }
  }
  CHECK(any_different);
}

TEST_CASE("schedules are reproducible bit for bit") {
  const auto params = make_params(32, 3, Model::PWR2, 20, 0.37, 99);
  const auto a = build_schedule(params);
  const auto b = build_schedule(params);
  CHECK(a.to_json() == b.to_json());
}

TEST_CASE("parameter validation") {
  CHECK_THROWS(build_schedule(make_params(12, 1, Model::PWR2, 4)));  // not a power of 2
  CHECK_THROWS(build_schedule(make_params(8, 4, Model::PWR2, 4)));   // k > log2 N
  CHECK_THROWS(build_schedule(make_params(8, 1, Model::PWR2, 0)));   // T = 0
  auto bad_p = make_params(8, 1, Model::PWR2, 4);
  bad_p.meas_rate = 1.5;
  CHECK_THROWS(build_schedule(bad_p));
}

TEST_CASE("measurement masks: rates and determinism") {
  auto params = make_params(1024, 1, Model::PWR2, 64);
  params.meas_rate = 0.0;
  for (uint32_t t : {1u, 5u, 64u}) CHECK(sample_measurements(params, t).empty());
  params.meas_rate = 1.0;
  CHECK(sample_measurements(params, 3).size() == 1024);

  params.meas_rate = 0.5;
  double total = 0;
  for (uint32_t t = 1; t <= 64; ++t) {
    const auto qs = sample_measurements(params, t);
    CHECK(qs == sample_measurements(params, t));
    // binomial concentration: 5 sigma around N/2 with sigma = 16
    CHECK(qs.size() >= 512 - 80);
    CHECK(qs.size() <= 512 + 80);
    total += static_cast<double>(qs.size());
  }
  CHECK(total / 64.0 == doctest::Approx(512).epsilon(0.02));
}

TEST_CASE("thermalizer layout") {
  auto one = build_thermalizer(4, 1, 3);
  CHECK(one.gate_kind == GateKind::RandomClifford);
  CHECK(pair_set(one.layers[0]) ==
        std::set<std::pair<uint32_t, uint32_t>>{{0, 1}, {2, 3}});
  auto two = build_thermalizer(4, 2, 3);
  CHECK(pair_set(two.layers[1]) ==
        std::set<std::pair<uint32_t, uint32_t>>{{1, 2}, {0, 3}});
  auto big = build_thermalizer(64, 256, 3);
  CHECK(big.layers.size() == 256);
  for (const auto& layer : big.layers) CHECK(layer.pairs.size() == 32);
}
