#pragma once

#include <cstdint>
#include <vector>

#include "sunada_lab/group.hpp"
#include "sunada_lab/modp.hpp"

namespace sunada_lab {

/// T = (1 1 / 0 1) and U = (1 0 / 1 1); they generate SL(2,Z), hence every
/// SL(2,Z/n).
inline ModMatrix unipotent_upper(std::int64_t n, std::int64_t k = 1) {
  return ModMatrix(n, {{1, k}, {0, 1}});
}
inline ModMatrix unipotent_lower(std::int64_t n, std::int64_t k = 1) {
  return ModMatrix(n, {{1, 0}, {k, 1}});
}

inline GroupTable<ModMatrix> sl2(std::int64_t n, const GroupOptions& opts = {}) {
  return generate_group<ModMatrix>({unipotent_upper(n), unipotent_lower(n)}, opts);
}

inline GroupTable<ProjMatrix> psl2(std::int64_t n, const GroupOptions& opts = {}) {
  return generate_group<ProjMatrix>(
      {ProjMatrix(unipotent_upper(n)), ProjMatrix(unipotent_lower(n))}, opts);
}

/// PSL(3,Z/2) = GL(3,F2), generated by the six elementary transvections.
inline GroupTable<ProjMatrix> psl3_mod2(const GroupOptions& opts = {}) {
  std::vector<ProjMatrix> gens;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      ModMatrix m = ModMatrix::identity(2, 3);
      m.set(i, j, 1);
      gens.emplace_back(m);
    }
  return generate_group(gens, opts);
}

/// |SL(2,Z/p)| = p(p^2 - 1) for p prime.
inline std::uint64_t sl2_prime_order(std::uint64_t p) { return p * (p * p - 1); }

}  // namespace sunada_lab
