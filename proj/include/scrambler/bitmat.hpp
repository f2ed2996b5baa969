#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace scrambler {

inline size_t words_for_bits(size_t n_bits) { return (n_bits + 63) / 64; }

// Incremental GF(2) row basis over fixed-width bit vectors. Rows are kept in
// insertion order, each with a distinct pivot bit, so inserting a vector costs
// one pass over the current basis.
class Gf2Basis {
 public:
  explicit Gf2Basis(size_t n_bits)
      : n_bits_(n_bits), words_(words_for_bits(n_bits)), scratch_(words_) {}

  // Inserts (a copy of) v; returns true if it was independent of the basis.
  bool insert(std::span<const uint64_t> v);

  size_t rank() const { return pivots_.size(); }
  size_t n_bits() const { return n_bits_; }

  // Reduces v in place against the basis; returns true if the residual is
  // nonzero (i.e. v is independent).
  bool reduce(std::span<uint64_t> v) const;

 private:
  size_t n_bits_;
  size_t words_;
  std::vector<uint64_t> rows_;  // rank x words_
  std::vector<int> pivots_;
  std::vector<uint64_t> scratch_;
};

// Dense GF(2) matrix with 64-bit packed rows. Sized for the verification-grade
// symplectic algebra (tens of rows), not for the hot simulation path.
class Gf2Matrix {
 public:
  Gf2Matrix(size_t rows, size_t cols)
      : rows_(rows), cols_(cols), words_(words_for_bits(cols)), data_(rows * words_, 0) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  bool get(size_t r, size_t c) const {
    return (data_[r * words_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(size_t r, size_t c, bool v) {
    uint64_t& w = data_[r * words_ + c / 64];
    const uint64_t m = uint64_t{1} << (c % 64);
    w = v ? (w | m) : (w & ~m);
  }

  std::span<uint64_t> row(size_t r) { return {data_.data() + r * words_, words_}; }
  std::span<const uint64_t> row(size_t r) const {
    return {data_.data() + r * words_, words_};
  }

  void xor_rows(size_t dst, size_t src);
  void swap_rows(size_t a, size_t b);
  void append_row(std::span<const uint64_t> v);
  void append_zero_row() { data_.resize(data_.size() + words_, 0); ++rows_; }

  // In-place reduction to row echelon form; returns the rank. Pivot columns
  // are recorded in ascending order when `pivot_cols` is non-null.
  size_t echelonize(std::vector<size_t>* pivot_cols = nullptr);

  size_t rank() const;

  // Basis of the right kernel {v : M v = 0}, one row per basis vector.
  Gf2Matrix kernel_basis() const;

 private:
  size_t rows_;
  size_t cols_;
  size_t words_;
  std::vector<uint64_t> data_;
};

}  // namespace scrambler
