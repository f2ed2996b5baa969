#include "scrambler/tableau.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "scrambler/bitmat.hpp"

namespace scrambler {

namespace {
constexpr double kLn2 = std::numbers::ln2;
}

Tableau::Tableau(size_t n) : n_(n), words_(words_for_bits(n)) {
  if (n == 0) throw std::invalid_argument("tableau needs at least one qubit");
  cols_.assign(n_ * 4 * words_, 0);
  sign_d_.assign(words_, 0);
  sign_s_.assign(words_, 0);
  for (size_t q = 0; q < n_; ++q) {
    assign_bit(xd(q), q, true);  // destabilizer q = X_q
    assign_bit(zs(q), q, true);  // stabilizer q = Z_q
  }
  mask_d_.assign(words_, 0);
  mask_s_.assign(words_, 0);
  s1_d_.assign(words_, 0);
  s2_d_.assign(words_, 0);
  s1_s_.assign(words_, 0);
  s2_s_.assign(words_, 0);
  pivot_x_.assign(n_, 0);
  pivot_z_.assign(n_, 0);
  row_x_.assign(words_, 0);
  row_z_.assign(words_, 0);
  acc_x_.assign(words_, 0);
  acc_z_.assign(words_, 0);
}

void Tableau::apply_h(size_t q) {
  uint64_t* x = xd(q);
  uint64_t* z = zd(q);
  for (size_t w = 0; w < words_; ++w) {
    sign_d_[w] ^= x[w] & z[w];
    std::swap(x[w], z[w]);
  }
  x = xs(q);
  z = zs(q);
  for (size_t w = 0; w < words_; ++w) {
    sign_s_[w] ^= x[w] & z[w];
    std::swap(x[w], z[w]);
  }
}

void Tableau::apply_p(size_t q) {
  uint64_t* x = xd(q);
  uint64_t* z = zd(q);
  for (size_t w = 0; w < words_; ++w) {
    sign_d_[w] ^= x[w] & z[w];
    z[w] ^= x[w];
  }
  x = xs(q);
  z = zs(q);
  for (size_t w = 0; w < words_; ++w) {
    sign_s_[w] ^= x[w] & z[w];
    z[w] ^= x[w];
  }
}

void Tableau::apply_cnot(size_t control, size_t target) {
  if (control == target) throw std::invalid_argument("cnot needs distinct qubits");
  uint64_t* xc = xd(control);
  uint64_t* zc = zd(control);
  uint64_t* xt = xd(target);
  uint64_t* zt = zd(target);
  for (size_t w = 0; w < words_; ++w) {
    sign_d_[w] ^= xc[w] & zt[w] & ~(xt[w] ^ zc[w]);
    xt[w] ^= xc[w];
    zc[w] ^= zt[w];
  }
  xc = xs(control);
  zc = zs(control);
  xt = xs(target);
  zt = zs(target);
  for (size_t w = 0; w < words_; ++w) {
    sign_s_[w] ^= xc[w] & zt[w] & ~(xt[w] ^ zc[w]);
    xt[w] ^= xc[w];
    zc[w] ^= zt[w];
  }
}

void Tableau::apply_cz(size_t a, size_t b) {
  if (a == b) throw std::invalid_argument("cz needs distinct qubits");
  uint64_t* xa = xd(a);
  uint64_t* za = zd(a);
  uint64_t* xb = xd(b);
  uint64_t* zb = zd(b);
  for (size_t w = 0; w < words_; ++w) {
    sign_d_[w] ^= xa[w] & xb[w] & (za[w] ^ zb[w]);
    za[w] ^= xb[w];
    zb[w] ^= xa[w];
  }
  xa = xs(a);
  za = zs(a);
  xb = xs(b);
  zb = zs(b);
  for (size_t w = 0; w < words_; ++w) {
    sign_s_[w] ^= xa[w] & xb[w] & (za[w] ^ zb[w]);
    za[w] ^= xb[w];
    zb[w] ^= xa[w];
  }
}

void Tableau::apply_q_gate(size_t a, size_t b) {
  apply_h(a);
  apply_h(b);
  apply_cz(a, b);
}

void Tableau::apply_clifford2(uint32_t group_index, size_t a, size_t b) {
  const auto& group = Clifford2Group::instance();
  for (Clifford2Op op : group.gate_word(group_index)) {
    switch (op) {
      case Clifford2Op::HA: apply_h(a); break;
      case Clifford2Op::HB: apply_h(b); break;
      case Clifford2Op::PA: apply_p(a); break;
      case Clifford2Op::PB: apply_p(b); break;
      case Clifford2Op::CZ: apply_cz(a, b); break;
    }
  }
}

bool Tableau::measurement_is_random(size_t q) const {
  const uint64_t* x = xs(q);
  for (size_t w = 0; w < words_; ++w) {
    if (x[w] != 0) return true;
  }
  return false;
}

int Tableau::measure_z(size_t q, Rng& rng, bool* was_random) {
  if (q >= n_) throw std::out_of_range("measure_z qubit out of range");
  const uint64_t* x = xs(q);
  size_t pivot = n_;
  for (size_t w = 0; w < words_; ++w) {
    if (x[w] != 0) {
      pivot = w * 64 + static_cast<size_t>(std::countr_zero(x[w]));
      break;
    }
  }
  if (pivot < n_) {
    if (was_random) *was_random = true;
    return measure_random(q, pivot, rng);
  }
  if (was_random) *was_random = false;
  return measure_deterministic(q);
}

int Tableau::measure_random(size_t q, size_t pivot, Rng& rng) {
  // Cache the pivot stabilizer row; it anticommutes with Z_q.
  for (size_t j = 0; j < n_; ++j) {
    pivot_x_[j] = get_bit(xs(j), pivot);
    pivot_z_[j] = get_bit(zs(j), pivot);
  }
  // Every other row with an X on q absorbs the pivot row.
  for (size_t w = 0; w < words_; ++w) {
    mask_d_[w] = xd(q)[w];
    mask_s_[w] = xs(q)[w];
    s1_d_[w] = s2_d_[w] = s1_s_[w] = s2_s_[w] = 0;
  }
  assign_bit(mask_s_.data(), pivot, false);

  // Accumulate the i-power of each row product in two bit planes (mod 4),
  // then apply the column flips. Contribution order matters: phases are
  // evaluated against pre-update bits.
  for (size_t j = 0; j < n_; ++j) {
    const bool px = pivot_x_[j];
    const bool pz = pivot_z_[j];
    if (!px && !pz) continue;
    uint64_t* xdj = xd(j);
    uint64_t* zdj = zd(j);
    uint64_t* xsj = xs(j);
    uint64_t* zsj = zs(j);
    for (size_t w = 0; w < words_; ++w) {
      uint64_t pos_d, neg_d, pos_s, neg_s;
      if (px && pz) {  // pivot Y: +1 where row has Z, -1 where row has X
        pos_d = zdj[w] & ~xdj[w];
        neg_d = xdj[w] & ~zdj[w];
        pos_s = zsj[w] & ~xsj[w];
        neg_s = xsj[w] & ~zsj[w];
      } else if (px) {  // pivot X: +1 on Y rows, -1 on Z rows
        pos_d = zdj[w] & xdj[w];
        neg_d = zdj[w] & ~xdj[w];
        pos_s = zsj[w] & xsj[w];
        neg_s = zsj[w] & ~xsj[w];
      } else {  // pivot Z: +1 on X rows, -1 on Y rows
        pos_d = xdj[w] & ~zdj[w];
        neg_d = xdj[w] & zdj[w];
        pos_s = xsj[w] & ~zsj[w];
        neg_s = xsj[w] & zsj[w];
      }
      uint64_t carry = s1_d_[w] & pos_d;
      s1_d_[w] ^= pos_d;
      s2_d_[w] ^= carry;
      uint64_t borrow = neg_d & ~s1_d_[w];
      s1_d_[w] ^= neg_d;
      s2_d_[w] ^= borrow;
      carry = s1_s_[w] & pos_s;
      s1_s_[w] ^= pos_s;
      s2_s_[w] ^= carry;
      borrow = neg_s & ~s1_s_[w];
      s1_s_[w] ^= neg_s;
      s2_s_[w] ^= borrow;
      if (px) {
        xdj[w] ^= mask_d_[w];
        xsj[w] ^= mask_s_[w];
      }
      if (pz) {
        zdj[w] ^= mask_d_[w];
        zsj[w] ^= mask_s_[w];
      }
    }
  }

  const bool pivot_sign = get_bit(sign_s_.data(), pivot);
  const uint64_t broadcast = pivot_sign ? ~uint64_t{0} : 0;
  for (size_t w = 0; w < words_; ++w) {
    sign_d_[w] ^= mask_d_[w] & (s2_d_[w] ^ broadcast);
    sign_s_[w] ^= mask_s_[w] & (s2_s_[w] ^ broadcast);
  }
  // Valid row products have even i-power on the stabilizer half.
  assert([&] {
    for (size_t w = 0; w < words_; ++w) {
      if (s1_s_[w] & mask_s_[w]) return false;
    }
    return true;
  }());

  // Old pivot row becomes its own destabilizer; the pivot slot becomes +-Z_q.
  const bool minus = rng.coin();
  for (size_t j = 0; j < n_; ++j) {
    assign_bit(xd(j), pivot, pivot_x_[j]);
    assign_bit(zd(j), pivot, pivot_z_[j]);
    assign_bit(xs(j), pivot, false);
    assign_bit(zs(j), pivot, j == q);
  }
  assign_bit(sign_d_.data(), pivot, pivot_sign);
  assign_bit(sign_s_.data(), pivot, minus);
  return minus ? -1 : +1;
}

int Tableau::measure_deterministic(size_t q) const {
  // Product of the stabilizer rows selected by destabilizer X bits on q
  // equals +-Z_q; the accumulated i-power decides the sign.
  for (size_t w = 0; w < words_; ++w) acc_x_[w] = acc_z_[w] = 0;
  unsigned phase = 0;  // mod 4
  const uint64_t* sel = xd(q);
  for (size_t i = 0; i < n_; ++i) {
    if (!((sel[i / 64] >> (i % 64)) & 1u)) continue;
    for (size_t w = 0; w < words_; ++w) row_x_[w] = row_z_[w] = 0;
    for (size_t j = 0; j < n_; ++j) {
      if (get_bit(xs(j), i)) row_x_[j / 64] |= uint64_t{1} << (j % 64);
      if (get_bit(zs(j), i)) row_z_[j / 64] |= uint64_t{1} << (j % 64);
    }
    phase += 2u * get_bit(sign_s_.data(), i);
    // i-power of the product: y(src) + y(dst) - y(dst') + 2*(z_src & x_dst).
    for (size_t w = 0; w < words_; ++w) {
      const uint64_t nx = acc_x_[w] ^ row_x_[w];
      const uint64_t nz = acc_z_[w] ^ row_z_[w];
      phase += static_cast<unsigned>(std::popcount(row_x_[w] & row_z_[w]));
      phase += static_cast<unsigned>(std::popcount(acc_x_[w] & acc_z_[w]));
      phase += 2u * static_cast<unsigned>(std::popcount(row_z_[w] & acc_x_[w]));
      phase -= static_cast<unsigned>(std::popcount(nx & nz));
      acc_x_[w] = nx;
      acc_z_[w] = nz;
      phase &= 3u;
    }
  }
  assert([&] {
    // The product must be exactly Z_q.
    for (size_t j = 0; j < n_; ++j) {
      const bool x = (acc_x_[j / 64] >> (j % 64)) & 1u;
      const bool z = (acc_z_[j / 64] >> (j % 64)) & 1u;
      if (x || (z != (j == q))) return false;
    }
    return (phase & 1u) == 0;
  }());
  return (phase & 2u) ? -1 : +1;
}

int Tableau::entropy_int(std::span<const uint32_t> region) const {
  Gf2Basis basis(n_);
  for (uint32_t q : region) {
    if (q >= n_) throw std::out_of_range("entropy region qubit out of range");
    basis.insert({xs(q), words_});
    basis.insert({zs(q), words_});
  }
  return static_cast<int>(basis.rank()) - static_cast<int>(region.size());
}

double Tableau::entropy(std::span<const uint32_t> region) const {
  return entropy_int(region) * kLn2;
}

namespace {

void check_disjoint(std::span<const uint32_t> a, std::span<const uint32_t> b) {
  for (uint32_t qa : a) {
    for (uint32_t qb : b) {
      if (qa == qb) throw std::invalid_argument("regions must be disjoint");
    }
  }
}

}  // namespace

int Tableau::mutual_information_int(std::span<const uint32_t> a,
                                    std::span<const uint32_t> b) const {
  check_disjoint(a, b);
  Gf2Basis basis_a(n_);
  for (uint32_t q : a) {
    basis_a.insert({xs(q), words_});
    basis_a.insert({zs(q), words_});
  }
  Gf2Basis basis_ab = basis_a;
  Gf2Basis basis_b(n_);
  for (uint32_t q : b) {
    basis_b.insert({xs(q), words_});
    basis_b.insert({zs(q), words_});
    basis_ab.insert({xs(q), words_});
    basis_ab.insert({zs(q), words_});
  }
  const int sa = static_cast<int>(basis_a.rank()) - static_cast<int>(a.size());
  const int sb = static_cast<int>(basis_b.rank()) - static_cast<int>(b.size());
  const int sab =
      static_cast<int>(basis_ab.rank()) - static_cast<int>(a.size() + b.size());
  return sa + sb - sab;
}

double Tableau::mutual_information(std::span<const uint32_t> a,
                                   std::span<const uint32_t> b) const {
  return mutual_information_int(a, b) * kLn2;
}

int Tableau::tripartite_mi_int(std::span<const uint32_t> a,
                               std::span<const uint32_t> b,
                               std::span<const uint32_t> c) const {
  check_disjoint(a, b);
  check_disjoint(a, c);
  check_disjoint(b, c);
  auto rank_of = [&](std::initializer_list<std::span<const uint32_t>> regions) {
    Gf2Basis basis(n_);
    int size = 0;
    for (auto region : regions) {
      size += static_cast<int>(region.size());
      for (uint32_t q : region) {
        basis.insert({xs(q), words_});
        basis.insert({zs(q), words_});
      }
    }
    return static_cast<int>(basis.rank()) - size;
  };
  const int sa = rank_of({a});
  const int sb = rank_of({b});
  const int sc = rank_of({c});
  const int sab = rank_of({a, b});
  const int sac = rank_of({a, c});
  const int sbc = rank_of({b, c});
  const int sabc = rank_of({a, b, c});
  return sa + sb + sc - sab - sac - sbc + sabc;
}

double Tableau::tripartite_mi(std::span<const uint32_t> a,
                              std::span<const uint32_t> b,
                              std::span<const uint32_t> c) const {
  return tripartite_mi_int(a, b, c) * kLn2;
}

void Tableau::stab_row_xz(size_t r, std::span<uint64_t> xz) const {
  const size_t total_words = words_for_bits(2 * n_);
  for (size_t w = 0; w < total_words; ++w) xz[w] = 0;
  for (size_t j = 0; j < n_; ++j) {
    if (get_bit(xs(j), r)) xz[j / 64] |= uint64_t{1} << (j % 64);
    if (get_bit(zs(j), r)) xz[(n_ + j) / 64] |= uint64_t{1} << ((n_ + j) % 64);
  }
}

bool Tableau::stab_sign(size_t r) const { return get_bit(sign_s_.data(), r); }

bool Tableau::check_invariants() const {
  // Symplectic products: <d_i, s_j> = delta_ij, <d_i, d_j> = <s_i, s_j> = 0.
  auto symp = [&](bool row_a_stab, size_t a, bool row_b_stab, size_t b) {
    unsigned acc = 0;
    for (size_t j = 0; j < n_; ++j) {
      const bool ax = get_bit(row_a_stab ? xs(j) : xd(j), a);
      const bool az = get_bit(row_a_stab ? zs(j) : zd(j), a);
      const bool bx = get_bit(row_b_stab ? xs(j) : xd(j), b);
      const bool bz = get_bit(row_b_stab ? zs(j) : zd(j), b);
      acc ^= (ax & bz) ^ (az & bx);
    }
    return acc;
  };
  for (size_t i = 0; i < n_; ++i) {
    for (size_t j = 0; j < n_; ++j) {
      if (symp(false, i, true, j) != (i == j ? 1u : 0u)) return false;
      if (symp(true, i, true, j) != 0u) return false;
      if (symp(false, i, false, j) != 0u) return false;
    }
  }
  // All 2n rows linearly independent.
  Gf2Basis basis(2 * n_);
  std::vector<uint64_t> row(words_for_bits(2 * n_));
  for (size_t r = 0; r < n_; ++r) {
    for (auto& w : row) w = 0;
    for (size_t j = 0; j < n_; ++j) {
      if (get_bit(xd(j), r)) row[j / 64] |= uint64_t{1} << (j % 64);
      if (get_bit(zd(j), r)) row[(n_ + j) / 64] |= uint64_t{1} << ((n_ + j) % 64);
    }
    if (!basis.insert(row)) return false;
    for (auto& w : row) w = 0;
    for (size_t j = 0; j < n_; ++j) {
      if (get_bit(xs(j), r)) row[j / 64] |= uint64_t{1} << (j % 64);
      if (get_bit(zs(j), r)) row[(n_ + j) / 64] |= uint64_t{1} << ((n_ + j) % 64);
    }
    if (!basis.insert(row)) return false;
  }
  return true;
}

Tableau init_z_polarized(size_t n) { return Tableau(n); }

Tableau init_bell_reference(size_t n_system, size_t n_reference) {
  if (n_reference > n_system) {
    throw std::invalid_argument("reference larger than system");
  }
  Tableau t(n_system + n_reference);
  for (size_t i = 0; i < n_reference; ++i) {
    t.apply_h(i);
    t.apply_cnot(i, n_system + i);
  }
  return t;
}

std::vector<uint32_t> index_range(uint32_t begin, uint32_t end) {
  std::vector<uint32_t> out;
  out.reserve(end - begin);
  for (uint32_t i = begin; i < end; ++i) out.push_back(i);
  return out;
}

}  // namespace scrambler
