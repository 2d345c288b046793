#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "sunada_lab/congruence.hpp"
#include "sunada_lab/group.hpp"
#include "sunada_lab/linear_groups.hpp"
#include "support/order24.hpp"

using namespace sunada_lab;

TEST(GroupTable, LinearGroupOrders) {
  EXPECT_EQ(sl2(7).order(), 336U);
  EXPECT_EQ(psl2(7).order(), 168U);
  EXPECT_EQ(psl2(5).order(), 60U);
  EXPECT_EQ(psl2(2).order(), 6U);
  EXPECT_EQ(sl2(3).order(), 24U);
  EXPECT_EQ(psl3_mod2().order(), 168U);
  EXPECT_EQ(sl2(23).order(), sl2_prime_order(23));
  // |SL(2,Z/14)| = |SL(2,2)| |SL(2,7)|
  EXPECT_EQ(sl2(14).order(), 6U * 336U);
  EXPECT_EQ(psl2(14).order(), 1008U);
}

TEST(GroupTable, IdentityInverseAndDenseAgreement) {
  const auto g = psl2(7);
  EXPECT_TRUE(g.element(g.identity()).is_identity());
  for (Index a = 0; a < g.order(); ++a) {
    EXPECT_EQ(g.mul(a, g.inv(a)), g.identity());
    for (Index b = 0; b < g.order(); b += 7) EXPECT_EQ(g.element(g.mul(a, b)), g.element(a) * g.element(b));
  }
  // Hash-only multiplication agrees with the dense table.
  GroupOptions sparse;
  sparse.dense_limit = 0;
  const auto h = psl2(7, sparse);
  for (Index a = 0; a < g.order(); ++a)
    for (Index b = 0; b < g.order(); b += 5) EXPECT_EQ(h.mul(a, b), g.mul(a, b));
}

TEST(GroupTable, SizeCap) {
  GroupOptions small;
  small.max_size = 100;
  EXPECT_THROW(psl2(7, small), SizeLimitError);
  EXPECT_NO_THROW(psl2(5, small));
}

TEST(GroupTable, FromElementsValidation) {
  const auto g = psl2(5);
  std::vector<ProjMatrix> elems = g.elements();
  std::reverse(elems.begin(), elems.end());
  const auto h = GroupTable<ProjMatrix>::from_elements(elems, {});
  EXPECT_EQ(h.order(), 60U);
  EXPECT_TRUE(h.element(0).is_identity());
  elems.push_back(elems.front());
  EXPECT_THROW(GroupTable<ProjMatrix>::from_elements(elems, {}), InputError);
  EXPECT_THROW(g.check_index(60), InputError);
  EXPECT_THROW(g.index_of(ProjMatrix(7, {{1, 1}, {0, 1}})), InputError);
}

TEST(Subgroup, LagrangeAndCosetPartition) {
  const auto g = psl2(7);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Index> gens;
    const std::size_t k = 1 + rng() % 2;
    for (std::size_t i = 0; i < k; ++i) gens.push_back(static_cast<Index>(rng() % g.order()));
    const Subgroup h = Subgroup::generated(g, gens);
    EXPECT_EQ(g.order() % h.order(), 0U);
    for (auto side : {CosetSide::kLeft, CosetSide::kRight}) {
      const CosetSpace cs = coset_space(g, h, side);
      EXPECT_EQ(cs.size() * h.order(), g.order());
      std::vector<int> seen(g.order(), 0);
      for (const auto& b : cs.blocks) {
        EXPECT_EQ(b.size(), h.order());
        for (Index x : b) ++seen[x];
      }
      for (int s : seen) EXPECT_EQ(s, 1);
      for (std::size_t i = 0; i + 1 < cs.size(); ++i) EXPECT_LT(cs.reps[i], cs.reps[i + 1]);
    }
  }
}

TEST(Subgroup, FromMembersRejectsNonSubgroups) {
  const auto g = psl2(7);
  EXPECT_THROW(Subgroup::from_members(g, {1, 2}), InputError);
  EXPECT_THROW(Subgroup::from_members(g, {0, 1, 2}), InputError);
  const Subgroup h = Subgroup::generated(g, {3});
  EXPECT_EQ(Subgroup::from_members(g, h.members()), h);
}

TEST(CosetAction, IsAHomomorphism) {
  const auto g = psl2(7);
  const Subgroup h = psl27_sunada_pair().h1;
  const CosetSpace cs = coset_space(g, h);
  std::mt19937_64 rng(6);
  for (int t = 0; t < 300; ++t) {
    const auto a = static_cast<Index>(rng() % g.order()), b = static_cast<Index>(rng() % g.order());
    const auto pa = coset_action(g, cs, a).perm, pb = coset_action(g, cs, b).perm;
    EXPECT_TRUE(is_permutation(pa));
    EXPECT_EQ(coset_action(g, cs, g.mul(a, b)).perm, compose(pa, pb));
  }
  EXPECT_EQ(fixed_points(coset_action(g, cs, g.identity()).perm), cs.size());
  EXPECT_THROW(coset_action(g, coset_space(g, h, CosetSide::kRight), 0), InputError);
}

TEST(ConjugacyClasses, Psl27) {
  const auto g = psl2(7);
  const auto cp = conjugacy_classes(g);
  std::vector<std::size_t> sizes;
  for (const auto& c : cp.classes) sizes.push_back(c.members.size());
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 21, 24, 24, 42, 56}));
  // Brute-force oracle: class of x is {g x g^-1 : g in G}.
  for (const auto& c : cp.classes) {
    std::vector<Index> orbit;
    for (Index z = 0; z < g.order(); ++z) orbit.push_back(g.conj(z, c.representative));
    std::sort(orbit.begin(), orbit.end());
    orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
    EXPECT_EQ(orbit, c.members);
  }
}

TEST(ConjugacyClasses, ClassEquation) {
  for (std::int64_t n : {2, 3, 5, 7, 11}) {
    const auto g = sl2(n);
    const auto cp = conjugacy_classes(g);
    std::size_t total = 0;
    for (const auto& c : cp.classes) {
      EXPECT_EQ(g.order() % c.members.size(), 0U);
      total += c.members.size();
    }
    EXPECT_EQ(total, g.order());
  }
}

TEST(SubgroupConjugacy, FindsSmallestConjugator) {
  const auto g = psl2(7);
  const Subgroup h = Subgroup::generated(g, {5, 9});
  for (Index z : {Index{3}, Index{77}, Index{150}}) {
    const Subgroup k = conjugate_subgroup(g, h, z);
    const auto w = subgroups_conjugate(g, h, k);
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(is_conjugator(g, h, k, *w));
    for (Index y = 0; y < *w; ++y) EXPECT_FALSE(is_conjugator(g, h, k, y));
    // Same answer single-threaded.
    EXPECT_EQ(subgroups_conjugate(g, h, k, 1), w);
  }
  EXPECT_FALSE(subgroups_conjugate(g, h, trivial_subgroup(g)).has_value());
}

TEST(SubgroupConjugacy, ParallelFirstIsDeterministic) {
  for (unsigned threads : {1U, 2U, 3U, 8U}) {
    const auto hit = detail::parallel_first(100000, [](Index i) { return i % 4099 == 4098 || i == 77777; }, threads);
    ASSERT_TRUE(hit.has_value());
    EXPECT_EQ(*hit, 4098U);
  }
  EXPECT_FALSE(detail::parallel_first(5000, [](Index) { return false; }, 4).has_value());
}

TEST(Center, SlAndPsl) {
  const auto g = sl2(7);
  const auto z = center(g, whole_group(g));
  ASSERT_EQ(z.size(), 2U);
  EXPECT_TRUE(g.element(z[0]).is_identity());
  EXPECT_EQ(g.element(z[1]), -ModMatrix::identity(7, 2));
  const auto p = psl2(7);
  EXPECT_EQ(center(p, whole_group(p)).size(), 1U);
}

TEST(OrderStatistics, Psl27) {
  const auto g = psl2(7);
  EXPECT_EQ(order_statistics(g), (OrderStats{{1, 1}, {2, 21}, {3, 56}, {4, 42}, {7, 48}}));
  EXPECT_EQ(order_stats_to_string(s4_order_statistics()), "{1:1, 2:9, 3:8, 4:6}");
}

TEST(S4Fingerprint, UniqueAmongGroupsOfOrder24) {
  const auto groups = order24::all_groups();
  ASSERT_EQ(groups.size(), 15U);
  // The fifteen constructions are pairwise non-isomorphic: separate them by
  // order statistics, class count, center size and commutator subgroup.
  std::set<std::tuple<OrderStats, std::size_t, std::size_t, std::size_t>> signatures;
  int s4_hits = 0;
  for (const auto& ng : groups) {
    const auto& g = ng.table;
    ASSERT_EQ(g.order(), 24U) << ng.name;
    std::vector<Index> comms;
    for (Index a = 0; a < g.order(); ++a)
      for (Index b = 0; b < g.order(); ++b) comms.push_back(g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
    const std::size_t derived = Subgroup::generated(g, comms).order();
    signatures.emplace(order_statistics(g), conjugacy_classes(g).size(), center(g, whole_group(g)).size(), derived);
    const bool hit = s4_fingerprint(g, whole_group(g));
    EXPECT_EQ(hit, ng.name == "S4") << ng.name;
    s4_hits += hit;
  }
  EXPECT_EQ(signatures.size(), 15U);
  EXPECT_EQ(s4_hits, 1);
}
