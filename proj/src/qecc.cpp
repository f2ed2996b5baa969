#include "scrambler/qecc.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "scrambler/bitmat.hpp"

namespace scrambler {

int reference_entropy_int(const Tableau& t, uint32_t n_system) {
  const auto reference = index_range(n_system, static_cast<uint32_t>(t.num_qubits()));
  return t.entropy_int(reference);
}

double code_rate(const Tableau& t, uint32_t n_system) {
  return static_cast<double>(reference_entropy_int(t, n_system)) /
         static_cast<double>(n_system);
}

namespace {

// I(A,R)/ln2 = rank(cols A) + rank(cols R) - rank(cols A+R); the |A| terms
// cancel, so only column ranks are needed.
struct ReferenceScan {
  const Tableau& t;
  uint32_t n_system;
  Gf2Basis basis_r;
  int rank_r;

  explicit ReferenceScan(const Tableau& tab, uint32_t n_sys)
      : t(tab), n_system(n_sys), basis_r(tab.num_qubits()), rank_r(0) {
    for (uint32_t q = n_system; q < t.num_qubits(); ++q) {
      basis_r.insert(t.stab_x_column(q));
      basis_r.insert(t.stab_z_column(q));
    }
    rank_r = static_cast<int>(basis_r.rank());
  }

  // Smallest window size at `offset` reaching threshold, capped at `stop`.
  uint32_t first_crossing(uint32_t offset, int threshold, uint32_t stop) const {
    Gf2Basis basis_a(t.num_qubits());
    Gf2Basis basis_ar = basis_r;
    for (uint32_t s = 1; s <= stop; ++s) {
      const uint32_t q = (offset + s - 1) % n_system;
      basis_a.insert(t.stab_x_column(q));
      basis_a.insert(t.stab_z_column(q));
      basis_ar.insert(t.stab_x_column(q));
      basis_ar.insert(t.stab_z_column(q));
      const int mi = static_cast<int>(basis_a.rank()) + rank_r -
                     static_cast<int>(basis_ar.rank());
      if (mi >= threshold) return s;
    }
    return stop + 1;
  }
};

}  // namespace

int window_reference_mi_int(const Tableau& t, uint32_t n_system, uint32_t offset,
                            uint32_t size) {
  if (size > n_system) throw std::invalid_argument("window larger than system");
  ReferenceScan scan(t, n_system);
  Gf2Basis basis_a(t.num_qubits());
  Gf2Basis basis_ar = scan.basis_r;
  for (uint32_t s = 0; s < size; ++s) {
    const uint32_t q = (offset + s) % n_system;
    basis_a.insert(t.stab_x_column(q));
    basis_a.insert(t.stab_z_column(q));
    basis_ar.insert(t.stab_x_column(q));
    basis_ar.insert(t.stab_z_column(q));
  }
  return static_cast<int>(basis_a.rank()) + scan.rank_r -
         static_cast<int>(basis_ar.rank());
}

CodeDistanceResult contiguous_code_distance(const Tableau& t, uint32_t n_system,
                                            int threshold_int) {
  ReferenceScan scan(t, n_system);
  if (scan.rank_r == static_cast<int>(t.num_qubits() - n_system)) {
    // S_R = 0: nothing encoded.
    return {false, 0};
  }
  uint32_t best = n_system + 1;
  for (uint32_t offset = 0; offset < n_system; ++offset) {
    const uint32_t stop = best - 1;
    if (stop == 0) break;
    const uint32_t s = scan.first_crossing(offset, threshold_int, stop);
    if (s < best) best = s;
  }
  if (best > n_system) {
    return {false, 0};
  }
  return {true, best};
}

namespace {

constexpr size_t kVerificationMaxQubits = 16;

// Rows of the full stabilizer group as (x | z) bit vectors.
Gf2Matrix stab_matrix(const Tableau& t) {
  const size_t n = t.num_qubits();
  Gf2Matrix m(n, 2 * n);
  std::vector<uint64_t> row(words_for_bits(2 * n));
  for (size_t r = 0; r < n; ++r) {
    t.stab_row_xz(r, row);
    for (size_t w = 0; w < row.size(); ++w) m.row(r)[w] = row[w];
  }
  return m;
}

}  // namespace

int localizable_error_count(const Tableau& t, uint32_t n_system,
                            std::span<const uint32_t> region) {
  const size_t n = t.num_qubits();
  if (n > kVerificationMaxQubits) {
    throw std::invalid_argument("localizable_error_count is verification-grade");
  }
  for (uint32_t q : region) {
    if (q >= n_system) throw std::invalid_argument("region must lie in the system");
  }

  // Projected stabilizer group of the system: eliminate reference columns and
  // keep the rows that end up supported on the system alone.
  Gf2Matrix full = stab_matrix(t);
  std::vector<size_t> ref_cols;
  for (size_t q = n_system; q < n; ++q) {
    ref_cols.push_back(q);      // x part
    ref_cols.push_back(n + q);  // z part
  }
  std::vector<bool> used(full.rows(), false);
  for (size_t c : ref_cols) {
    size_t pivot = full.rows();
    for (size_t r = 0; r < full.rows(); ++r) {
      if (!used[r] && full.get(r, c)) {
        pivot = r;
        break;
      }
    }
    if (pivot == full.rows()) continue;
    used[pivot] = true;
    for (size_t r = 0; r < full.rows(); ++r) {
      if (r != pivot && full.get(r, c)) full.xor_rows(r, pivot);
    }
  }
  const size_t nq = n_system;
  Gf2Matrix s_q(0, 2 * nq);  // generators of the projected group, on Q coords
  std::vector<uint64_t> qrow(words_for_bits(2 * nq));
  for (size_t r = 0; r < full.rows(); ++r) {
    if (used[r]) continue;
    for (auto& w : qrow) w = 0;
    for (size_t q = 0; q < nq; ++q) {
      if (full.get(r, q)) qrow[q / 64] |= uint64_t{1} << (q % 64);
      if (full.get(r, n + q)) qrow[(nq + q) / 64] |= uint64_t{1} << ((nq + q) % 64);
    }
    s_q.append_row(qrow);
  }
  const size_t m = s_q.rank();

  // Centralizer of S_Q: kernel of the symplectic Gram map (swap x/z halves).
  Gf2Matrix gram(s_q.rows(), 2 * nq);
  for (size_t r = 0; r < s_q.rows(); ++r) {
    for (size_t q = 0; q < nq; ++q) {
      gram.set(r, nq + q, s_q.get(r, q));
      gram.set(r, q, s_q.get(r, nq + q));
    }
  }
  Gf2Matrix centralizer = gram.kernel_basis();

  // Count centralizer directions whose restriction outside the region leaves
  // the projected-stabilizer span; the remainder is localizable on the region.
  std::vector<bool> in_region(nq, false);
  for (uint32_t q : region) in_region[q] = true;
  std::vector<size_t> outside_cols;
  for (size_t q = 0; q < nq; ++q) {
    if (!in_region[q]) {
      outside_cols.push_back(q);
      outside_cols.push_back(nq + q);
    }
  }
  const size_t n_out = outside_cols.size();
  Gf2Basis outside_span(std::max<size_t>(n_out, 1));
  std::vector<uint64_t> proj(words_for_bits(std::max<size_t>(n_out, 1)));
  auto project = [&](const Gf2Matrix& mat, size_t r) {
    for (auto& w : proj) w = 0;
    for (size_t i = 0; i < n_out; ++i) {
      if (mat.get(r, outside_cols[i])) proj[i / 64] |= uint64_t{1} << (i % 64);
    }
  };
  for (size_t r = 0; r < s_q.rows(); ++r) {
    project(s_q, r);
    outside_span.insert(proj);
  }
  size_t extra = 0;
  for (size_t r = 0; r < centralizer.rows(); ++r) {
    project(centralizer, r);
    if (outside_span.insert(proj)) ++extra;
  }
  const size_t dim_u = centralizer.rows() - extra;
  return static_cast<int>(dim_u) - static_cast<int>(m);
}

double hamming_bound(double w_over_n, HammingVariant variant,
                     std::optional<uint32_t> n) {
  const double log2_3 = std::log2(3.0);
  switch (variant) {
    case HammingVariant::AllErrors: {
      if (w_over_n < 0.0 || w_over_n >= 0.5) {
        throw std::invalid_argument("all-errors bound needs 0 <= w/N < 1/2");
      }
      auto h2 = [](double x) {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
      };
      return 1.0 - w_over_n * log2_3 - h2(w_over_n);
    }
    case HammingVariant::Contiguous: {
      if (!n.has_value()) {
        throw std::invalid_argument("contiguous bound needs a system size");
      }
      const double nn = static_cast<double>(*n);
      const double w = w_over_n * nn;
      if (w_over_n < 0.0 || w >= nn) {
        throw std::invalid_argument("contiguous bound needs 0 <= w < N");
      }
      return 1.0 - w_over_n * log2_3 - std::log2(nn - w) / nn;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace scrambler
