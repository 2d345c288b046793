#pragma once

// Dense integer matrices with exact (arbitrary precision) determinant, rank
// and characteristic polynomial. No floating point anywhere.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "sunada_lab/errors.hpp"

namespace sunada_lab {

using BigInt = boost::multiprecision::cpp_int;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < m.rows_; ++r) {
      if (rows[r].size() != m.cols_) throw InputError("ragged matrix rows");
      for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw InputError("matrix product dimension mismatch");
    IntMatrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const std::int64_t v = (*this)(i, k);
        if (v == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += v * o(k, j);
      }
    return out;
  }

  IntMatrix operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix sum dimension mismatch");
    IntMatrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] += o.a_[i];
    return out;
  }

  IntMatrix transpose() const {
    IntMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  std::vector<std::vector<std::int64_t>> to_rows() const {
    std::vector<std::vector<std::int64_t>> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      out[r].assign(a_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                    a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::int64_t> a_;
};

namespace detail {

/// Fraction-free (Bareiss) elimination with row pivoting; returns the rank
/// and, for square full-rank input, the determinant.
inline std::pair<std::size_t, BigInt> bareiss(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = m(r, c);
  BigInt prev = 1;
  int sign = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != rank) {
      std::swap(a[piv], a[rank]);
      sign = -sign;
    }
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t c = col + 1; c < cols; ++c) {
        a[r][c] = (a[r][c] * a[rank][col] - a[r][col] * a[rank][c]) / prev;
      }
      a[r][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  BigInt det = 0;
  if (rows == cols && rank == rows) det = rows == 0 ? BigInt(1) : BigInt(sign * a[rows - 1][cols - 1]);
  return {rank, det};
}

}  // namespace detail

inline std::size_t rank(const IntMatrix& m) { return detail::bareiss(m).first; }

inline BigInt determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("determinant of non-square matrix");
  return detail::bareiss(m).second;
}

/// det(xI - M) by Faddeev-LeVerrier in exact integers; coefficients low
/// degree first, leading coefficient 1.
inline std::vector<BigInt> characteristic_polynomial(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("characteristic polynomial of non-square matrix");
  const std::size_t n = m.rows();
  using Big = std::vector<std::vector<BigInt>>;
  Big a(n, std::vector<BigInt>(n)), mk(n, std::vector<BigInt>(n, 0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a[r][c] = m(r, c);
  std::vector<BigInt> coeff(n + 1, 0);
  coeff[n] = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    Big next(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (a[i][l] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) next[i][j] += a[i][l] * mk[l][j];
      }
    for (std::size_t i = 0; i < n; ++i) next[i][i] += coeff[n - k + 1];
    mk = std::move(next);
    BigInt tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * mk[l][i];
    coeff[n - k] = -tr / static_cast<long>(k);
  }
  return coeff;
}

inline std::string big_to_string(const BigInt& v) { return v.str(); }

}  // namespace sunada_lab
