#include "scrambler/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace scrambler {

namespace {

using cplx = std::complex<double>;

constexpr cplx kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

const cplx kH[4] = {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
const cplx kP[4] = {1.0, 0.0, 0.0, kI};
const cplx kCZ[16] = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1};
const cplx kCNOT[16] = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};

std::vector<cplx> kron2(std::span<const cplx> a, std::span<const cplx> b) {
  std::vector<cplx> out(16);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out[(i * 2 + k) * 4 + (j * 2 + l)] = a[i * 2 + j] * b[k * 2 + l];
  return out;
}

std::vector<cplx> matmul4(std::span<const cplx> a, std::span<const cplx> b) {
  std::vector<cplx> out(16, cplx{0, 0});
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) out[i * 4 + j] += a[i * 4 + k] * b[k * 4 + j];
  return out;
}

const std::vector<cplx>& q_gate_matrix_storage() {
  static const std::vector<cplx> m = [] {
    auto hh = kron2({kH, 4}, {kH, 4});
    return matmul4({kCZ, 16}, hh);
  }();
  return m;
}

void check_unitary(std::span<const cplx> m, size_t dim) {
  for (size_t i = 0; i < dim; ++i) {
    for (size_t j = 0; j < dim; ++j) {
      cplx acc{0, 0};
      for (size_t k = 0; k < dim; ++k) acc += std::conj(m[k * dim + i]) * m[k * dim + j];
      const cplx expect = (i == j) ? cplx{1, 0} : cplx{0, 0};
      if (std::abs(acc - expect) > 1e-10) {
        throw std::invalid_argument("gate matrix is not unitary");
      }
    }
  }
}

}  // namespace

DenseState oracle_zero_state(size_t n) {
  if (n == 0 || n > kOracleMaxQubits) {
    throw std::invalid_argument("oracle supports 1..12 qubits");
  }
  DenseState s;
  s.n = n;
  s.amp.assign(size_t{1} << n, cplx{0, 0});
  s.amp[0] = 1.0;
  return s;
}

void oracle_apply_gate(DenseState& state, std::span<const cplx> matrix,
                       std::span<const size_t> qubits) {
  if (qubits.size() == 1) {
    check_unitary(matrix, 2);
    const size_t mask = size_t{1} << qubits[0];
    for (size_t idx = 0; idx < state.amp.size(); ++idx) {
      if (idx & mask) continue;
      const cplx a0 = state.amp[idx];
      const cplx a1 = state.amp[idx | mask];
      state.amp[idx] = matrix[0] * a0 + matrix[1] * a1;
      state.amp[idx | mask] = matrix[2] * a0 + matrix[3] * a1;
    }
  } else if (qubits.size() == 2) {
    check_unitary(matrix, 4);
    if (qubits[0] == qubits[1]) throw std::invalid_argument("duplicate qubit");
    const size_t m0 = size_t{1} << qubits[0];
    const size_t m1 = size_t{1} << qubits[1];
    for (size_t idx = 0; idx < state.amp.size(); ++idx) {
      if (idx & (m0 | m1)) continue;
      cplx a[4] = {state.amp[idx], state.amp[idx | m1], state.amp[idx | m0],
                   state.amp[idx | m0 | m1]};
      for (int r = 0; r < 4; ++r) {
        cplx acc{0, 0};
        for (int c = 0; c < 4; ++c) acc += matrix[r * 4 + c] * a[c];
        const size_t out = idx | ((r & 2) ? m0 : 0) | ((r & 1) ? m1 : 0);
        state.amp[out] = acc;
      }
    }
  } else {
    throw std::invalid_argument("oracle gates act on one or two qubits");
  }
}

double oracle_measure_prob_plus(const DenseState& state, size_t qubit) {
  const size_t mask = size_t{1} << qubit;
  double p0 = 0.0;
  for (size_t idx = 0; idx < state.amp.size(); ++idx) {
    if (!(idx & mask)) p0 += std::norm(state.amp[idx]);
  }
  return p0;
}

int oracle_measure_z(DenseState& state, size_t qubit, Rng* rng,
                     std::optional<int> forced) {
  const double p0 = oracle_measure_prob_plus(state, qubit);
  int outcome;
  if (forced.has_value()) {
    outcome = *forced;
    const double prob = outcome > 0 ? p0 : 1.0 - p0;
    if (prob < 1e-12) {
      throw std::invalid_argument("forced outcome has zero probability");
    }
  } else {
    outcome = (rng->uniform() < p0) ? +1 : -1;
  }
  const size_t mask = size_t{1} << qubit;
  const double prob = outcome > 0 ? p0 : 1.0 - p0;
  const double scale = 1.0 / std::sqrt(prob);
  for (size_t idx = 0; idx < state.amp.size(); ++idx) {
    const bool one = (idx & mask) != 0;
    if (one == (outcome > 0)) {
      state.amp[idx] = 0.0;
    } else {
      state.amp[idx] *= scale;
    }
  }
  return outcome;
}

namespace {

Eigen::MatrixXcd reduced_density(const DenseState& state,
                                 std::span<const uint32_t> region) {
  const size_t n = state.n;
  std::vector<uint32_t> inside(region.begin(), region.end());
  std::vector<uint32_t> outside;
  std::vector<bool> in_region(n, false);
  for (uint32_t q : inside) in_region[q] = true;
  for (uint32_t q = 0; q < n; ++q) {
    if (!in_region[q]) outside.push_back(q);
  }
  const size_t da = size_t{1} << inside.size();
  const size_t de = size_t{1} << outside.size();
  auto full_index = [&](size_t a_bits, size_t e_bits) {
    size_t idx = 0;
    for (size_t b = 0; b < inside.size(); ++b) {
      if ((a_bits >> b) & 1u) idx |= size_t{1} << inside[b];
    }
    for (size_t b = 0; b < outside.size(); ++b) {
      if ((e_bits >> b) & 1u) idx |= size_t{1} << outside[b];
    }
    return idx;
  };
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(da, da);
  for (size_t e = 0; e < de; ++e) {
    for (size_t i = 0; i < da; ++i) {
      const cplx ai = state.amp[full_index(i, e)];
      if (ai == cplx{0, 0}) continue;
      for (size_t j = 0; j < da; ++j) {
        rho(i, j) += ai * std::conj(state.amp[full_index(j, e)]);
      }
    }
  }
  return rho;
}

}  // namespace

double oracle_entropy(const DenseState& state, std::span<const uint32_t> region) {
  if (region.empty()) return 0.0;
  // Global state is pure, so use the smaller side.
  if (region.size() > state.n / 2) {
    std::vector<bool> in_region(state.n, false);
    for (uint32_t q : region) in_region[q] = true;
    std::vector<uint32_t> complement;
    for (uint32_t q = 0; q < state.n; ++q) {
      if (!in_region[q]) complement.push_back(q);
    }
    if (complement.empty()) return 0.0;
    return oracle_entropy(state, complement);
  }
  Eigen::MatrixXcd rho = reduced_density(state, region);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
  double s = 0.0;
  for (double lambda : solver.eigenvalues()) {
    if (lambda > 1e-12) s -= lambda * std::log(lambda);
  }
  return s;
}

double oracle_renyi2(const DenseState& state, std::span<const uint32_t> region) {
  if (region.empty()) return 0.0;
  Eigen::MatrixXcd rho = reduced_density(state, region);
  const double purity = (rho * rho).trace().real();
  return -std::log(purity);
}

double oracle_mutual_information(const DenseState& state, std::span<const uint32_t> a,
                                 std::span<const uint32_t> b) {
  std::vector<uint32_t> ab(a.begin(), a.end());
  ab.insert(ab.end(), b.begin(), b.end());
  return oracle_entropy(state, a) + oracle_entropy(state, b) - oracle_entropy(state, ab);
}

double oracle_tripartite_mi(const DenseState& state, std::span<const uint32_t> a,
                            std::span<const uint32_t> b, std::span<const uint32_t> c) {
  std::vector<uint32_t> bc(b.begin(), b.end());
  bc.insert(bc.end(), c.begin(), c.end());
  return oracle_mutual_information(state, a, b) + oracle_mutual_information(state, a, c) -
         oracle_mutual_information(state, a, bc);
}

std::span<const cplx> oracle_h_matrix() { return {kH, 4}; }
std::span<const cplx> oracle_p_matrix() { return {kP, 4}; }
std::span<const cplx> oracle_cz_matrix() { return {kCZ, 16}; }
std::span<const cplx> oracle_cnot_matrix() { return {kCNOT, 16}; }
std::span<const cplx> oracle_q_gate_matrix() {
  const auto& m = q_gate_matrix_storage();
  return {m.data(), m.size()};
}

std::vector<cplx> oracle_clifford2_matrix(uint32_t group_index) {
  const auto& group = Clifford2Group::instance();
  std::vector<cplx> id(16, cplx{0, 0});
  for (int i = 0; i < 4; ++i) id[i * 4 + i] = 1.0;
  std::vector<cplx> u = id;
  auto embed_single = [](std::span<const cplx> m, bool on_a) {
    std::vector<cplx> eye = {1, 0, 0, 1};
    return on_a ? kron2(m, eye) : kron2(eye, m);
  };
  for (Clifford2Op op : group.gate_word(group_index)) {
    std::vector<cplx> g;
    switch (op) {
      case Clifford2Op::HA: g = embed_single({kH, 4}, true); break;
      case Clifford2Op::HB: g = embed_single({kH, 4}, false); break;
      case Clifford2Op::PA: g = embed_single({kP, 4}, true); break;
      case Clifford2Op::PB: g = embed_single({kP, 4}, false); break;
      case Clifford2Op::CZ: g = {kCZ, kCZ + 16}; break;
    }
    u = matmul4(g, u);
  }
  return u;
}

}  // namespace scrambler
