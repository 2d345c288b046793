#include <gtest/gtest.h>

#include <random>
#include <set>

#include "sunada_lab/modp.hpp"

using namespace sunada_lab;

namespace {

bool trial_division_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d < n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::int64_t> primes_below(std::int64_t n) {
  std::vector<std::int64_t> ps;
  for (std::int64_t p = 2; p < n; ++p)
    if (trial_division_prime(p)) ps.push_back(p);
  return ps;
}

ModMatrix random_matrix(std::mt19937_64& rng, std::int64_t n, int dim) {
  std::vector<std::int64_t> e;
  for (int i = 0; i < dim * dim; ++i) e.push_back(static_cast<std::int64_t>(rng() % n));
  return ModMatrix::from_entries(n, dim, e);
}

}  // namespace

TEST(Arithmetic, PrimalityMatchesTrialDivision) {
  for (std::int64_t n = -3; n < 500; ++n) EXPECT_EQ(is_prime(n), trial_division_prime(n)) << n;
}

TEST(Arithmetic, InverseAndPower) {
  for (std::int64_t p : primes_below(60))
    for (std::int64_t a = 1; a < p; ++a) {
      EXPECT_EQ(detail::mul_mod(a, inverse_mod(a, p), p), 1);
      EXPECT_EQ(pow_mod(a, static_cast<std::uint64_t>(p - 1), p), 1);  // Fermat
    }
  EXPECT_THROW(inverse_mod(0, 7), SingularMatrixError);
  EXPECT_THROW(inverse_mod(4, 14), SingularMatrixError);
  EXPECT_EQ(inverse_mod(3, 14), 5);
  EXPECT_EQ(detail::reduce(-1, 7), 6);
}

TEST(Residue, FieldOperations) {
  const Residue a(5, 7), b(4, 7);
  EXPECT_EQ((a + b).value(), 2);
  EXPECT_EQ((a - b).value(), 1);
  EXPECT_EQ((-a).value(), 2);
  EXPECT_EQ((a * b).value(), 6);
  EXPECT_EQ((a / b * b), a);
  EXPECT_EQ(a.pow(6).value(), 1);
  EXPECT_THROW(a + Residue(1, 11), InputError);
  EXPECT_THROW(Residue(0, 7).inverse(), SingularMatrixError);
  EXPECT_THROW(Residue(1, 0), InputError);
}

TEST(QuadraticResidues, EulerCriterionMatchesSquares) {
  for (std::int64_t p : primes_below(200)) {
    if (p == 2) continue;
    std::set<std::int64_t> squares;
    for (std::int64_t x = 1; x < p; ++x) squares.insert(x * x % p);
    for (std::int64_t a = 1; a < p; ++a) EXPECT_EQ(legendre(a, p), squares.count(a) ? 1 : -1) << a << " " << p;
    EXPECT_EQ(legendre(0, p), 0);
    EXPECT_EQ(squares.size(), static_cast<std::size_t>((p - 1) / 2));
  }
}

TEST(QuadraticResidues, Multiplicative) {
  for (std::int64_t p : primes_below(200)) {
    if (p == 2) continue;
    for (std::int64_t a = 1; a < p; ++a)
      for (std::int64_t b = 1; b < p; b += 3) EXPECT_EQ(legendre(a, p) * legendre(b, p), legendre(a * b, p));
  }
}

TEST(QuadraticResidues, SupplementaryLaws) {
  for (std::int64_t p : primes_below(200)) {
    if (p == 2) continue;
    EXPECT_EQ(legendre(-1, p) == 1, p % 4 == 1) << p;
    EXPECT_EQ(legendre(2, p) == 1, p % 8 == 1 || p % 8 == 7) << p;
  }
}

TEST(QuadraticResidues, Reciprocity) {
  const auto ps = primes_below(200);
  for (std::int64_t p : ps)
    for (std::int64_t q : ps) {
      if (p == 2 || q == 2 || p == q) continue;
      const int sign = ((p - 1) / 2 * ((q - 1) / 2)) % 2 == 0 ? 1 : -1;
      EXPECT_EQ(legendre(p, q) * legendre(q, p), sign) << p << " " << q;
    }
}

TEST(QuadraticResidues, SquareRoots) {
  for (std::int64_t p : primes_below(200)) {
    for (std::int64_t a = 0; a < p; ++a) {
      const auto roots = sqrt_mod(a, p);
      for (const auto& r : roots) EXPECT_EQ(r.value() * r.value() % p, a);
      if (p > 2) {
        EXPECT_EQ(roots.size(), a == 0 ? 1U : (legendre(a, p) == 1 ? 2U : 0U));
      }
      EXPECT_TRUE(std::is_sorted(roots.begin(), roots.end()));
    }
  }
  EXPECT_THROW(sqrt_mod(2, 15), InputError);
  EXPECT_EQ(sqrt_mod(-1, 17).front().value(), 4);
  EXPECT_EQ(sqrt_mod(inverse_mod(2, 23), 23).front().value(), 9);
}

TEST(ModMatrix, InverseAndDeterminant) {
  std::mt19937_64 rng(1);
  for (std::int64_t n : {2, 3, 7, 11, 14, 23}) {
    for (int dim : {2, 3}) {
      for (int trial = 0; trial < 200; ++trial) {
        const ModMatrix a = random_matrix(rng, n, dim), b = random_matrix(rng, n, dim);
        EXPECT_EQ((a * b).det(), detail::mul_mod(a.det(), b.det(), n));
        EXPECT_EQ((a * b).transpose(), b.transpose() * a.transpose());
        if (gcd(a.det(), n) == 1) {
          EXPECT_TRUE((a * a.inverse()).is_identity());
          EXPECT_TRUE((a.inverse() * a).is_identity());
        } else {
          EXPECT_THROW(a.inverse(), SingularMatrixError);
        }
      }
    }
  }
}

TEST(ModMatrix, ConstructionAndErrors) {
  const ModMatrix m(7, {{1, -1}, {8, 3}});
  EXPECT_EQ(m(0, 1), 6);
  EXPECT_EQ(m(1, 0), 1);
  EXPECT_EQ(m.entries(), (std::vector<std::int64_t>{1, 6, 1, 3}));
  EXPECT_EQ(m.trace(), 4);
  EXPECT_EQ(m.det(), detail::reduce(3 - 6, 7));
  EXPECT_THROW(m * ModMatrix::identity(11, 2), InputError);
  EXPECT_THROW(m * ModMatrix::identity(7, 3), InputError);
}

TEST(ModMatrix, CharacteristicPolynomial) {
  // 2x2: x^2 - tr x + det, low-first
  const ModMatrix m(7, {{1, 2}, {3, 4}});
  EXPECT_EQ(char_poly(m), (std::vector<std::int64_t>{detail::reduce(4 - 6, 7), detail::reduce(-5, 7), 1}));
  // Companion matrix of x^3 + x + 1 over F2.
  const ModMatrix c(2, {{0, 0, 1}, {1, 0, 1}, {0, 1, 0}});
  EXPECT_EQ(poly_to_string(char_poly(c)), "x^3+x+1");
  const ModMatrix c2(2, {{0, 0, 1}, {1, 0, 0}, {0, 1, 1}});
  EXPECT_EQ(poly_to_string(char_poly(c2)), "x^3+x^2+1");
}

TEST(ProjMatrix, CanonicalRepresentative) {
  std::mt19937_64 rng(2);
  for (std::int64_t n : {3, 5, 7, 14, 23}) {
    int found = 0;
    while (found < 100) {
      const ModMatrix m = random_matrix(rng, n, 2);
      if (m.det() != 1) continue;
      ++found;
      const ProjMatrix a(m), b(-m);
      EXPECT_EQ(a, b);
      EXPECT_EQ(a.hash(), b.hash());
      EXPECT_TRUE(a.rep() == m || a.rep() == -m);
      EXPECT_FALSE(-a.rep() < a.rep());
    }
  }
}

TEST(ProjMatrix, MultiplicationRespectsCanonicalization) {
  std::mt19937_64 rng(3);
  for (std::int64_t n : {7, 11, 14}) {
    std::vector<ModMatrix> sl;
    while (sl.size() < 40) {
      const ModMatrix m = random_matrix(rng, n, 2);
      if (m.det() == 1) sl.push_back(m);
    }
    for (const auto& a : sl)
      for (const auto& b : sl) {
        EXPECT_EQ(ProjMatrix(a) * ProjMatrix(b), ProjMatrix(a * b));
        EXPECT_EQ(ProjMatrix(a).inverse(), ProjMatrix(a.inverse()));
      }
  }
}

TEST(ProjMatrix, OrdersAndErrors) {
  const ModMatrix s(7, {{0, 1}, {-1, 0}});
  EXPECT_EQ(psl_order(ProjMatrix(s)), 2U);
  EXPECT_EQ(matrix_order(s), 4U);
  EXPECT_EQ(psl_order(ProjMatrix(7, {{1, 1}, {0, 1}})), 7U);
  EXPECT_EQ(ProjMatrix(ModMatrix(7, {{1, 1}, {-1, 0}})).pow(3), ProjMatrix::identity(7, 2));
  EXPECT_THROW(ProjMatrix(ModMatrix(7, {{2, 0}, {0, 2}})), InputError);
  EXPECT_TRUE(ProjMatrix(ModMatrix(7, {{-1, 0}, {0, -1}})).is_identity());
}

TEST(ProjMatrix, TransposeInverseIsHomomorphism) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const ModMatrix a = random_matrix(rng, 2, 3), b = random_matrix(rng, 2, 3);
    if (a.det() != 1 || b.det() != 1) continue;
    EXPECT_EQ(transpose_inverse(a * b), transpose_inverse(a) * transpose_inverse(b));
  }
}
