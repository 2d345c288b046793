#pragma once

// Exact arithmetic over Z/n: residues, small square matrices (2x2 and 3x3),
// projective (+-) normal forms, and quadratic-residue helpers.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sunada_lab/errors.hpp"

namespace sunada_lab {

namespace detail {

inline std::int64_t reduce(std::int64_t v, std::int64_t n) {
  v %= n;
  return v < 0 ? v + n : v;
}

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t n) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % n);
}

}  // namespace detail

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::int64_t gcd(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

inline std::int64_t pow_mod(std::int64_t base, std::uint64_t exp,
                            std::int64_t n) {
  std::int64_t result = 1 % n;
  base = detail::reduce(base, n);
  while (exp > 0) {
    if (exp & 1U) result = detail::mul_mod(result, base, n);
    base = detail::mul_mod(base, base, n);
    exp >>= 1U;
  }
  return result;
}

/// Inverse of a modulo n; throws SingularMatrixError when a is not a unit.
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t n) {
  std::int64_t r0 = n, r1 = detail::reduce(a, n);
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    r0 = std::exchange(r1, r0 - q * r1);
    s0 = std::exchange(s1, s0 - q * s1);
  }
  if (r0 != 1) {
    throw SingularMatrixError(std::to_string(a) + " is not a unit mod " +
                              std::to_string(n));
  }
  return detail::reduce(s0, n);
}

/// Element of Z/n. Arithmetic between residues of different moduli throws.
class Residue {
 public:
  Residue(std::int64_t value, std::int64_t modulus) : mod_(modulus) {
    if (modulus < 1) throw InputError("modulus must be positive");
    val_ = detail::reduce(value, modulus);
  }

  std::int64_t value() const { return val_; }
  std::int64_t modulus() const { return mod_; }

  Residue operator+(const Residue& o) const {
    check(o);
    return {val_ + o.val_, mod_};
  }
  Residue operator-(const Residue& o) const {
    check(o);
    return {val_ - o.val_, mod_};
  }
  Residue operator-() const { return {-val_, mod_}; }
  Residue operator*(const Residue& o) const {
    check(o);
    return {detail::mul_mod(val_, o.val_, mod_), mod_};
  }
  Residue operator/(const Residue& o) const {
    check(o);
    return *this * o.inverse();
  }
  Residue inverse() const { return {inverse_mod(val_, mod_), mod_}; }
  Residue pow(std::uint64_t e) const { return {pow_mod(val_, e, mod_), mod_}; }

  bool operator==(const Residue& o) const {
    return val_ == o.val_ && mod_ == o.mod_;
  }
  bool operator<(const Residue& o) const {
    return mod_ != o.mod_ ? mod_ < o.mod_ : val_ < o.val_;
  }

 private:
  void check(const Residue& o) const {
    if (o.mod_ != mod_) {
      throw InputError("residue modulus mismatch: " + std::to_string(mod_) +
                       " vs " + std::to_string(o.mod_));
    }
  }

  std::int64_t val_;
  std::int64_t mod_;
};

inline std::ostream& operator<<(std::ostream& os, const Residue& r) {
  return os << r.value() << " (mod " << r.modulus() << ")";
}

/// Legendre symbol via Euler's criterion: 1, -1 (as p-1 -> -1) or 0.
inline int legendre(std::int64_t a, std::int64_t p) {
  a = detail::reduce(a, p);
  if (a == 0) return 0;
  return pow_mod(a, static_cast<std::uint64_t>((p - 1) / 2), p) == 1 ? 1 : -1;
}

/// All square roots of a modulo the prime p, ascending. Exhaustive scan; the
/// target primes are small.
inline std::vector<Residue> sqrt_mod(const Residue& a, std::int64_t p) {
  if (!is_prime(p)) {
    throw InputError("sqrt_mod: " + std::to_string(p) + " is not prime");
  }
  if (p >= 10000) throw InputError("sqrt_mod: prime too large for scan");
  const std::int64_t target = detail::reduce(a.value(), p);
  std::vector<Residue> roots;
  for (std::int64_t x = 0; x < p; ++x) {
    if ((x * x) % p == target) roots.emplace_back(x, p);
  }
  return roots;
}

inline std::vector<Residue> sqrt_mod(std::int64_t a, std::int64_t p) {
  return sqrt_mod(Residue(a, p), p);
}

/// Square matrix (dimension 2 or 3) over Z/n, entries kept in [0, n).
class ModMatrix {
 public:
  static constexpr int kMaxDim = 3;

  ModMatrix() = default;

  ModMatrix(std::int64_t modulus, int dim) : mod_(static_cast<std::int32_t>(modulus)),
                                             dim_(static_cast<std::uint8_t>(dim)) {
    if (dim < 2 || dim > kMaxDim) throw InputError("matrix dimension must be 2 or 3");
    if (modulus < 1 || modulus > (1LL << 30)) throw InputError("modulus out of range");
  }

  /// Builds from row lists; entries may be negative and are reduced.
  ModMatrix(std::int64_t modulus,
            std::initializer_list<std::initializer_list<std::int64_t>> rows)
      : ModMatrix(modulus, static_cast<int>(rows.size())) {
    int r = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != dim_) throw InputError("matrix is not square");
      int c = 0;
      for (std::int64_t v : row) set(r, c++, v);
      ++r;
    }
  }

  static ModMatrix from_entries(std::int64_t modulus, int dim,
                                const std::vector<std::int64_t>& row_major) {
    ModMatrix m(modulus, dim);
    if (static_cast<int>(row_major.size()) != dim * dim) {
      throw InputError("entry count does not match dimension");
    }
    for (int i = 0; i < dim * dim; ++i) m.set(i / dim, i % dim, row_major[i]);
    return m;
  }

  static ModMatrix identity(std::int64_t modulus, int dim) {
    ModMatrix m(modulus, dim);
    for (int i = 0; i < dim; ++i) m.set(i, i, 1);
    return m;
  }

  static ModMatrix diagonal(std::int64_t modulus, std::int64_t a, std::int64_t d) {
    return ModMatrix(modulus, {{a, 0}, {0, d}});
  }

  int dim() const { return dim_; }
  std::int64_t modulus() const { return mod_; }

  std::int64_t operator()(int r, int c) const { return e_[r * kMaxDim + c]; }
  void set(int r, int c, std::int64_t v) {
    e_[r * kMaxDim + c] = static_cast<std::int32_t>(detail::reduce(v, mod_));
  }

  /// Entries in row-major order.
  std::vector<std::int64_t> entries() const {
    std::vector<std::int64_t> out;
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c) out.push_back((*this)(r, c));
    return out;
  }

  ModMatrix operator*(const ModMatrix& o) const {
    check(o);
    ModMatrix out(mod_, dim_);
    for (int r = 0; r < dim_; ++r) {
      for (int c = 0; c < dim_; ++c) {
        std::int64_t acc = 0;
        for (int k = 0; k < dim_; ++k) acc += (*this)(r, k) * o(k, c);
        out.set(r, c, acc);
      }
    }
    return out;
  }

  ModMatrix operator+(const ModMatrix& o) const {
    check(o);
    ModMatrix out(mod_, dim_);
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c) out.set(r, c, (*this)(r, c) + o(r, c));
    return out;
  }

  ModMatrix operator-() const { return scaled(-1); }

  ModMatrix scaled(std::int64_t s) const {
    ModMatrix out(mod_, dim_);
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c)
        out.set(r, c, detail::mul_mod((*this)(r, c), detail::reduce(s, mod_), mod_));
    return out;
  }

  ModMatrix transpose() const {
    ModMatrix out(mod_, dim_);
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c) out.set(c, r, (*this)(r, c));
    return out;
  }

  std::int64_t trace() const {
    std::int64_t t = 0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return detail::reduce(t, mod_);
  }

  std::int64_t det() const {
    const auto& m = *this;
    if (dim_ == 2) return detail::reduce(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0), mod_);
    const std::int64_t v = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    return detail::reduce(v, mod_);
  }

  /// Adjugate-based inverse; throws SingularMatrixError if det is not a unit.
  ModMatrix inverse() const {
    const std::int64_t d = det();
    if (gcd(d, mod_) != 1) {
      throw SingularMatrixError("matrix is singular mod " + std::to_string(mod_));
    }
    const std::int64_t di = inverse_mod(d, mod_);
    const auto& m = *this;
    ModMatrix adj(mod_, dim_);
    if (dim_ == 2) {
      adj.set(0, 0, m(1, 1));
      adj.set(0, 1, -m(0, 1));
      adj.set(1, 0, -m(1, 0));
      adj.set(1, 1, m(0, 0));
    } else {
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          // cofactor of (c, r)
          const int r0 = (c + 1) % 3, r1 = (c + 2) % 3;
          const int c0 = (r + 1) % 3, c1 = (r + 2) % 3;
          adj.set(r, c, m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0));
        }
      }
    }
    return adj.scaled(di);
  }

  bool is_identity() const { return *this == identity(mod_, dim_); }

  bool operator==(const ModMatrix& o) const {
    return mod_ == o.mod_ && dim_ == o.dim_ && e_ == o.e_;
  }
  bool operator!=(const ModMatrix& o) const { return !(*this == o); }

  /// Row-major lexicographic order on entries in [0, n).
  bool operator<(const ModMatrix& o) const {
    if (mod_ != o.mod_) return mod_ < o.mod_;
    if (dim_ != o.dim_) return dim_ < o.dim_;
    return e_ < o.e_;
  }

  std::size_t hash() const {
    std::size_t h = static_cast<std::size_t>(mod_) * 0x9E3779B97F4A7C15ULL + dim_;
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c)
        h = (h ^ static_cast<std::size_t>((*this)(r, c))) * 0x100000001B3ULL;
    return h ^ (h >> 29);
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (int r = 0; r < dim_; ++r) {
      os << (r ? ",[" : "[");
      for (int c = 0; c < dim_; ++c) os << (c ? "," : "") << (*this)(r, c);
      os << ']';
    }
    os << ']';
    return os.str();
  }

  /// Row lists, the JSON-friendly form.
  std::vector<std::vector<std::int64_t>> rows() const {
    std::vector<std::vector<std::int64_t>> out(dim_);
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c) out[r].push_back((*this)(r, c));
    return out;
  }

 private:
  void check(const ModMatrix& o) const {
    if (o.mod_ != mod_ || o.dim_ != dim_) {
      throw InputError("matrix modulus/dimension mismatch");
    }
  }

  std::array<std::int32_t, kMaxDim * kMaxDim> e_{};
  std::int32_t mod_ = 1;
  std::uint8_t dim_ = 2;
};

inline std::ostream& operator<<(std::ostream& os, const ModMatrix& m) {
  return os << m.to_string();
}

inline ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b) { return a * b; }
inline ModMatrix mat_inv(const ModMatrix& a) { return a.inverse(); }

/// Monic characteristic polynomial det(xI - M), coefficients low degree
/// first (result[k] multiplies x^k), reduced into [0, n).
inline std::vector<std::int64_t> char_poly(const ModMatrix& m) {
  const std::int64_t n = m.modulus();
  if (m.dim() == 2) {
    return {m.det(), detail::reduce(-m.trace(), n), 1};
  }
  const std::int64_t minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) +
                              m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                              m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  return {detail::reduce(-m.det(), n), detail::reduce(minors, n),
          detail::reduce(-m.trace(), n), 1};
}

/// Renders a low-first coefficient list as e.g. "x^3+x^2+1".
inline std::string poly_to_string(const std::vector<std::int64_t>& coeffs) {
  std::string out;
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k) {
    const std::int64_t c = coeffs[k];
    if (c == 0) continue;
    if (!out.empty()) out += '+';
    if (c != 1 || k == 0) out += std::to_string(c);
    if (k >= 1) out += 'x';
    if (k >= 2) out += '^' + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

/// Element of PSL(dim, Z/n): a determinant-one matrix stored as the
/// lexicographically smaller of {M, -M}.
class ProjMatrix {
 public:
  ProjMatrix() = default;

  explicit ProjMatrix(const ModMatrix& m) {
    if (m.det() != 1 % m.modulus()) {
      throw InputError("projective element needs determinant 1, got " + m.to_string());
    }
    rep_ = canonicalize(m);
  }

  ProjMatrix(std::int64_t modulus,
             std::initializer_list<std::initializer_list<std::int64_t>> rows)
      : ProjMatrix(ModMatrix(modulus, rows)) {}

  static ProjMatrix identity(std::int64_t modulus, int dim) {
    return ProjMatrix(ModMatrix::identity(modulus, dim));
  }

  static ModMatrix canonicalize(const ModMatrix& m) {
    const ModMatrix neg = -m;
    return neg < m ? neg : m;
  }

  const ModMatrix& rep() const { return rep_; }
  bool canonical() const { return true; }
  std::int64_t modulus() const { return rep_.modulus(); }
  int dim() const { return rep_.dim(); }

  ProjMatrix operator*(const ProjMatrix& o) const {
    ProjMatrix out;
    out.rep_ = canonicalize(rep_ * o.rep_);
    return out;
  }
  ProjMatrix inverse() const {
    ProjMatrix out;
    out.rep_ = canonicalize(rep_.inverse());
    return out;
  }
  ProjMatrix pow(std::uint64_t e) const {
    ProjMatrix result = identity(modulus(), dim()), base = *this;
    while (e > 0) {
      if (e & 1U) result = result * base;
      base = base * base;
      e >>= 1U;
    }
    return result;
  }

  bool is_identity() const { return rep_ == canonicalize(ModMatrix::identity(modulus(), dim())); }
  bool operator==(const ProjMatrix& o) const { return rep_ == o.rep_; }
  bool operator!=(const ProjMatrix& o) const { return !(rep_ == o.rep_); }
  bool operator<(const ProjMatrix& o) const { return rep_ < o.rep_; }
  std::size_t hash() const { return rep_.hash(); }
  std::string to_string() const { return rep_.to_string(); }

 private:
  ModMatrix rep_;
};

inline std::ostream& operator<<(std::ostream& os, const ProjMatrix& m) {
  return os << m.to_string();
}

/// Smallest k >= 1 with a^k = identity in PSL.
inline std::uint64_t psl_order(const ProjMatrix& a) {
  const ProjMatrix id = ProjMatrix::identity(a.modulus(), a.dim());
  ProjMatrix x = a;
  std::uint64_t k = 1;
  while (x != id) {
    x = x * a;
    ++k;
  }
  return k;
}

/// Order in GL (no sign identification).
inline std::uint64_t matrix_order(const ModMatrix& a) {
  ModMatrix x = a;
  std::uint64_t k = 1;
  while (!x.is_identity()) {
    x = x * a;
    ++k;
  }
  return k;
}

/// The map A -> (A^{-1})^t, an automorphism of GL(n).
inline ModMatrix transpose_inverse(const ModMatrix& m) { return m.inverse().transpose(); }

}  // namespace sunada_lab

template <>
struct std::hash<sunada_lab::ModMatrix> {
  std::size_t operator()(const sunada_lab::ModMatrix& m) const { return m.hash(); }
};

template <>
struct std::hash<sunada_lab::ProjMatrix> {
  std::size_t operator()(const sunada_lab::ProjMatrix& m) const { return m.hash(); }
};
