#include <gtest/gtest.h>

#include <random>

#include "sunada_lab/psl168.hpp"
#include "sunada_lab/report.hpp"
#include "sunada_lab/sunada.hpp"

using namespace sunada_lab;

namespace {

// T[x H2, y H1] = sum over h in H1 of c(x^-1 y h), evaluated naively.
template <class E>
IntMatrix naive_transplantation(const GroupTable<E>& g, const Subgroup& h1, const Subgroup& h2,
                                const std::vector<std::int64_t>& c) {
  const CosetSpace l1 = coset_space(g, h1), l2 = coset_space(g, h2);
  IntMatrix t(l2.size(), l1.size());
  for (std::size_t i = 0; i < l2.size(); ++i)
    for (std::size_t j = 0; j < l1.size(); ++j)
      for (Index h : h1.members()) t(i, j) += c[g.mul(g.mul(g.inv(l2.reps[i]), l1.reps[j]), h)];
  return t;
}

// Fixed points of g on G/H counted from scratch: #{cosets xH with x^-1 g x in H}.
template <class E>
std::size_t fixed_cosets(const GroupTable<E>& g, const Subgroup& h, Index x) {
  std::size_t n = 0;
  for (Index y = 0; y < g.order(); ++y)
    if (h.contains(g.conj(g.inv(y), x))) ++n;
  return n / h.order();
}

}  // namespace

TEST(Sunada, FanoPairIsAlmostConjugate) {
  const FanoTriple t = build_fano_triple();
  EXPECT_EQ(t.h1.order(), 24U);
  EXPECT_EQ(t.h2.order(), 24U);
  const SunadaReport rep = verify_sunada(t.group, t.classes, t.h1, t.h2);
  EXPECT_TRUE(rep.holds);
  EXPECT_TRUE(rep.violating.empty());
  EXPECT_FALSE(subgroups_conjugate(t.group, t.h1, t.h2).has_value());
  // Permutation characters agree on every element, recomputed from the definition.
  for (Index x = 0; x < t.group.order(); ++x) EXPECT_EQ(fixed_cosets(t.group, t.h1, x), fixed_cosets(t.group, t.h2, x));
  EXPECT_EQ(permutation_character(t.group, t.classes, t.h1), permutation_character(t.group, t.classes, t.h2));
}

TEST(Sunada, CorruptedPairFails) {
  const FanoTriple t = build_fano_triple();
  const auto reps = fano_class_representatives();
  const Subgroup s7 = Subgroup::generated(t.group, {t.group.index_of(ProjMatrix(reps[4].matrix))});
  const SunadaReport rep = verify_sunada(t.group, t.classes, t.h1, s7);
  EXPECT_FALSE(rep.holds);
  EXPECT_FALSE(rep.violating.empty());
  // Conjugate subgroups are trivially almost conjugate.
  EXPECT_TRUE(verify_sunada(t.group, t.classes, t.h1, conjugate_subgroup(t.group, t.h1, 17)).holds);
}

TEST(Transplantation, MatrixMatchesNaiveFormula) {
  const FanoTriple t = build_fano_triple();
  const TransplantationBasis basis(t.group, t.h1, t.h2);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::int64_t> cc(basis.right_cosets());
    for (auto& v : cc) v = static_cast<std::int64_t>(rng() % 5) - 2;
    const auto c = basis.expand(cc);
    EXPECT_EQ(basis.matrix(cc), naive_transplantation(t.group, t.h1, t.h2, c));
    EXPECT_EQ(transplantation_matrix(t.group, t.h1, t.h2, c), basis.matrix(cc));
  }
}

TEST(Transplantation, RejectsNonInvariantCoefficients) {
  const FanoTriple t = build_fano_triple();
  std::vector<std::int64_t> c(t.group.order(), 0);
  // Pick an element and a different member of its right coset H2 x.
  const Index x = 5;
  c[x] = 1;
  EXPECT_THROW(transplantation_matrix(t.group, t.h1, t.h2, c), InputError);
  EXPECT_THROW(transplantation_matrix(t.group, t.h1, t.h2, std::vector<std::int64_t>(3, 0)), InputError);
}

TEST(Transplantation, FanoCertificateWithZeroOneCoefficients) {
  const FanoTriple t = build_fano_triple();
  const auto cert = find_transplantation(t.group, t.h1, t.h2, 1, "PSL(3,Z/2)");
  EXPECT_NE(cert.det, 0);
  for (auto v : cert.c_cosets) EXPECT_TRUE(v == 0 || v == 1);
  EXPECT_EQ(cert.T, naive_transplantation(t.group, t.h1, t.h2, cert.c));
  // G-equivariance on every element, not just on generators.
  const CosetSpace l1 = coset_space(t.group, t.h1), l2 = coset_space(t.group, t.h2);
  for (Index x = 0; x < t.group.order(); ++x) {
    const IntMatrix p1 = permutation_matrix(coset_action(t.group, l1, x).perm);
    const IntMatrix p2 = permutation_matrix(coset_action(t.group, l2, x).perm);
    EXPECT_EQ(cert.T * p1, p2 * cert.T);
  }
  // Lexicographic minimality: every earlier c is singular.
  const TransplantationBasis basis(t.group, t.h1, t.h2);
  std::vector<std::int64_t> c(basis.right_cosets(), 0);
  while (c != cert.c_cosets) {
    EXPECT_EQ(determinant(basis.matrix(c)), 0);
    std::size_t k = c.size();
    while (k > 0 && c[k - 1] == 1) c[--k] = 0;
    ASSERT_GT(k, 0U);
    ++c[k - 1];
  }
}

TEST(Transplantation, BoundZeroFindsNothing) {
  const FanoTriple t = build_fano_triple();
  EXPECT_THROW(find_transplantation(t.group, t.h1, t.h2, 0), NotFoundError);
  EXPECT_THROW(find_transplantation(t.group, t.h1, t.h2, -1), InputError);
}

TEST(Transplantation, IntertwinesRandomGeneratorMultisets) {
  const FanoTriple t = build_fano_triple();
  const auto cert = find_transplantation(t.group, t.h1, t.h2, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto gens = random_generators(t.group, seed, 1 + seed % 4);
    const SchreierGraph x1 = schreier_graph(t.group, t.h1, gens), x2 = schreier_graph(t.group, t.h2, gens);
    EXPECT_TRUE(verify_intertwining(cert, x1, x2)) << seed;
    EXPECT_TRUE(charpoly_isospectral(x1, x2)) << seed;
    EXPECT_TRUE(adjacency_isospectral(x1, x2)) << seed;
  }
}

TEST(Transplantation, PresetGraphsAreConnectedAndIsospectral) {
  const FanoTriple t = build_fano_triple();
  const auto gens = fano_237_generators(t);
  ASSERT_EQ(gens.size(), 3U);
  EXPECT_EQ(Subgroup::generated(t.group, gens).order(), 168U);
  const SchreierGraph x1 = schreier_graph(t.group, t.h1, gens), x2 = schreier_graph(t.group, t.h2, gens);
  EXPECT_EQ(rank(x1.laplacian), 6U);  // connected on 7 vertices
  EXPECT_TRUE(charpoly_isospectral(x1, x2));
  // The graphs themselves differ: some vertex degree multiset or edge set changes.
  EXPECT_FALSE(x1.adjacency == x2.adjacency);
}

TEST(Transplantation, CharpolyNegativeControl) {
  // Path and star on four vertices have different Laplacian spectra.
  const auto path = SchreierGraph::from_adjacency(
      IntMatrix::from_rows({{0, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}}));
  const auto star = SchreierGraph::from_adjacency(
      IntMatrix::from_rows({{0, 1, 1, 1}, {1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}}));
  EXPECT_FALSE(charpoly_isospectral(path, star));
  EXPECT_TRUE(charpoly_isospectral(path, path));
  // A wrong T is caught.
  EXPECT_FALSE(verify_intertwining(IntMatrix::identity(4), path, star));
  EXPECT_THROW(verify_intertwining(IntMatrix::identity(3), path, star), InputError);
}

TEST(Transplantation, JsonRoundTrip) {
  const FanoTriple t = build_fano_triple();
  const auto cert = find_transplantation(t.group, t.h1, t.h2, 1, "PSL(3,Z/2)");
  const auto j = to_json(cert);
  const auto back = certificate_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.T, cert.T);
  EXPECT_EQ(back.det, cert.det);
  EXPECT_EQ(back.c, cert.c);
  EXPECT_EQ(back.h1, cert.h1);
  auto bad = j;
  bad["detT"] = 12345;
  EXPECT_THROW(certificate_from_json(bad), InputError);
  bad = j;
  bad["schema"] = "other";
  EXPECT_THROW(certificate_from_json(bad), InputError);
}
