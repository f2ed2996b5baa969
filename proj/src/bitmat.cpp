#include "scrambler/bitmat.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

namespace scrambler {

namespace {

int lowest_set_bit(std::span<const uint64_t> v) {
  for (size_t w = 0; w < v.size(); ++w) {
    if (v[w] != 0) return static_cast<int>(w * 64 + std::countr_zero(v[w]));
  }
  return -1;
}

}  // namespace

bool Gf2Basis::reduce(std::span<uint64_t> v) const {
  const size_t n_rows = pivots_.size();
  for (size_t r = 0; r < n_rows; ++r) {
    const int p = pivots_[r];
    if ((v[p / 64] >> (p % 64)) & 1u) {
      const uint64_t* row = rows_.data() + r * words_;
      for (size_t w = 0; w < words_; ++w) v[w] ^= row[w];
    }
  }
  return lowest_set_bit(v) >= 0;
}

bool Gf2Basis::insert(std::span<const uint64_t> v) {
  std::copy(v.begin(), v.begin() + words_, scratch_.begin());
  if (!reduce(scratch_)) return false;
  rows_.insert(rows_.end(), scratch_.begin(), scratch_.end());
  pivots_.push_back(lowest_set_bit(scratch_));
  return true;
}

void Gf2Matrix::xor_rows(size_t dst, size_t src) {
  uint64_t* d = data_.data() + dst * words_;
  const uint64_t* s = data_.data() + src * words_;
  for (size_t w = 0; w < words_; ++w) d[w] ^= s[w];
}

void Gf2Matrix::swap_rows(size_t a, size_t b) {
  if (a == b) return;
  std::swap_ranges(data_.begin() + a * words_, data_.begin() + (a + 1) * words_,
                   data_.begin() + b * words_);
}

void Gf2Matrix::append_row(std::span<const uint64_t> v) {
  data_.insert(data_.end(), v.begin(), v.begin() + words_);
  ++rows_;
}

size_t Gf2Matrix::echelonize(std::vector<size_t>* pivot_cols) {
  size_t pivot_row = 0;
  for (size_t c = 0; c < cols_ && pivot_row < rows_; ++c) {
    size_t r = pivot_row;
    while (r < rows_ && !get(r, c)) ++r;
    if (r == rows_) continue;
    swap_rows(pivot_row, r);
    for (size_t i = 0; i < rows_; ++i) {
      if (i != pivot_row && get(i, c)) xor_rows(i, pivot_row);
    }
    if (pivot_cols) pivot_cols->push_back(c);
    ++pivot_row;
  }
  return pivot_row;
}

size_t Gf2Matrix::rank() const {
  Gf2Matrix copy = *this;
  return copy.echelonize();
}

Gf2Matrix Gf2Matrix::kernel_basis() const {
  Gf2Matrix reduced = *this;
  std::vector<size_t> pivot_cols;
  reduced.echelonize(&pivot_cols);

  std::vector<bool> is_pivot(cols_, false);
  for (size_t c : pivot_cols) is_pivot[c] = true;

  Gf2Matrix kernel(0, cols_);
  for (size_t free_c = 0; free_c < cols_; ++free_c) {
    if (is_pivot[free_c]) continue;
    kernel.append_zero_row();
    const size_t kr = kernel.rows() - 1;
    kernel.set(kr, free_c, true);
    for (size_t pr = 0; pr < pivot_cols.size(); ++pr) {
      if (reduced.get(pr, free_c)) kernel.set(kr, pivot_cols[pr], true);
    }
  }
  return kernel;
}

}  // namespace scrambler
