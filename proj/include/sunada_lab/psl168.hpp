#pragma once

// The order-168 example: PSL(3,Z/2) with the two index-7 subgroups
//
//     H1 = (* * * / 0 * * / 0 * *)      H2 = (* 0 0 / * * * / * * *)
//
// its conjugacy classification, the cycle structure of its action on G/H1
// and G/H2, the transpose-inverse automorphism swapping H1 and H2, and the
// sign-flip automorphism tau of PSL(2,Z/k).

#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sunada_lab/group.hpp"
#include "sunada_lab/linear_groups.hpp"
#include "sunada_lab/modp.hpp"
#include "sunada_lab/sunada.hpp"

namespace sunada_lab {

struct FanoTriple {
  GroupTable<ProjMatrix> group;
  Subgroup h1;
  Subgroup h2;
  ClassPartition classes;
};

/// G/H1 is identified with the nonzero column vectors: gH1 <-> g.e1.
inline FanoTriple build_fano_triple() {
  FanoTriple t{psl3_mod2(), {}, {}, {}};
  t.h1 = Subgroup::filtered(t.group, [](const ProjMatrix& m) {
    return m.rep()(1, 0) == 0 && m.rep()(2, 0) == 0;
  });
  t.h2 = Subgroup::filtered(t.group, [](const ProjMatrix& m) {
    return m.rep()(0, 1) == 0 && m.rep()(0, 2) == 0;
  });
  t.classes = conjugacy_classes(t.group);
  return t;
}

inline ProjMatrix transpose_inverse_automorphism(const ProjMatrix& m) {
  return ProjMatrix(transpose_inverse(m.rep()));
}

struct SwapCheck {
  bool image_is_h2 = false;
  /// Every h in H1 is conjugate in G to (h^{-1})^t.
  bool elementwise_conjugate = false;
  bool holds() const { return image_is_h2 && elementwise_conjugate; }
};

inline SwapCheck verify_swaps_subgroups(const FanoTriple& t) {
  SwapCheck out;
  std::vector<Index> image;
  bool conj = true;
  for (Index h : t.h1.members()) {
    const Index img = t.group.index_of(transpose_inverse_automorphism(t.group.element(h)));
    image.push_back(img);
    conj = conj && t.classes.class_of[h] == t.classes.class_of[img];
  }
  std::sort(image.begin(), image.end());
  out.image_is_h2 = image == t.h2.members();
  out.elementwise_conjugate = conj;
  return out;
}

/// Class representatives of PSL(3,Z/2), one per conjugacy class.
struct ClassRepresentative {
  std::string label;
  std::uint64_t order;
  ModMatrix matrix;
};

inline std::vector<ClassRepresentative> fano_class_representatives() {
  return {
      {"1", 1, ModMatrix::identity(2, 3)},
      {"2", 2, ModMatrix(2, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}})},
      {"3", 3, ModMatrix(2, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}})},
      {"4", 4, ModMatrix(2, {{1, 1, 0}, {0, 1, 1}, {0, 0, 1}})},
      {"7a", 7, ModMatrix(2, {{1, 1, 1}, {1, 1, 0}, {0, 1, 1}})},
      {"7b", 7, ModMatrix(2, {{1, 0, 1}, {1, 1, 1}, {1, 1, 0}})},
  };
}

/// g has order 7 iff g != I and g + I is non-singular over F2.
inline bool order7_criterion(const ModMatrix& g) {
  return !g.is_identity() && (g + ModMatrix::identity(g.modulus(), g.dim())).det() != 0;
}

struct OrderClassification {
  std::uint64_t order = 0;
  std::string label;
  Index representative = 0;
};

inline OrderClassification classify_element(const FanoTriple& t, Index g) {
  t.group.check_index(g);
  const auto reps = fano_class_representatives();
  for (const auto& r : reps) {
    const Index ri = t.group.index_of(ProjMatrix(r.matrix));
    if (t.classes.class_of[ri] == t.classes.class_of[g]) {
      return {t.group.element_order(g), r.label, ri};
    }
  }
  throw InputError("element lies in no listed class");
}

using CycleType = std::vector<std::size_t>;

/// Element order -> set of cycle types seen on G/H (a single entry per
/// order when the structure depends only on the order).
struct CycleStructureTable {
  std::map<std::uint64_t, std::set<CycleType>> on_h1;
  std::map<std::uint64_t, std::set<CycleType>> on_h2;

  bool well_defined() const {
    for (const auto* tab : {&on_h1, &on_h2})
      for (const auto& [ord, types] : *tab)
        if (types.size() != 1) return false;
    return true;
  }
};

template <class E>
std::map<std::uint64_t, std::set<CycleType>> cycle_types_by_order(const GroupTable<E>& g,
                                                                   const Subgroup& h) {
  const CosetSpace cs = coset_space(g, h);
  std::map<std::uint64_t, std::set<CycleType>> out;
  for (Index x = 0; x < g.order(); ++x) {
    out[g.element_order(x)].insert(cycle_type(coset_action(g, cs, x)));
  }
  return out;
}

inline CycleStructureTable cycle_structure_table(const FanoTriple& t) {
  return {cycle_types_by_order(t.group, t.h1), cycle_types_by_order(t.group, t.h2)};
}

inline std::string cycle_type_to_string(const CycleType& ct) {
  std::string s = "(";
  for (std::size_t i = 0; i < ct.size(); ++i) s += (i ? "," : "") + std::to_string(ct[i]);
  return s + ")";
}

inline std::string to_text(const CycleStructureTable& tab) {
  std::ostringstream os;
  os << "order  G/H1           G/H2\n";
  for (const auto& [ord, types] : tab.on_h1) {
    std::string a, b;
    for (const auto& ct : types) a += cycle_type_to_string(ct);
    for (const auto& ct : tab.on_h2.at(ord)) b += cycle_type_to_string(ct);
    os << ord << std::string(7 - std::to_string(ord).size(), ' ') << a
       << std::string(a.size() < 15 ? 15 - a.size() : 1, ' ') << b << '\n';
  }
  return os.str();
}

inline nlohmann::json to_json(const CycleStructureTable& tab) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [ord, types] : tab.on_h1) {
    nlohmann::json r{{"order", ord}, {"g_mod_h1", nlohmann::json::array()},
                     {"g_mod_h2", nlohmann::json::array()}};
    for (const auto& ct : types) r["g_mod_h1"].push_back(ct);
    for (const auto& ct : tab.on_h2.at(ord)) r["g_mod_h2"].push_back(ct);
    rows.push_back(r);
  }
  return rows;
}

/// tau: (a b / c d) -> (a -b / -c d), i.e. conjugation by diag(-1, 1).
inline ModMatrix tau(const ModMatrix& m) {
  if (m.dim() != 2) throw InputError("tau is defined on 2x2 matrices");
  return ModMatrix(m.modulus(), {{m(0, 0), -m(0, 1)}, {-m(1, 0), m(1, 1)}});
}

inline ProjMatrix tau(const ProjMatrix& m) { return ProjMatrix(tau(m.rep())); }

/// Some z in PSL(2,Z/p) with z g z^{-1} = tau(g) for all g, if tau is inner.
inline std::optional<ProjMatrix> tau_inner_witness(const GroupTable<ProjMatrix>& psl) {
  const auto hit = detail::parallel_first(psl.order(), [&](Index z) {
    for (Index s : psl.generators()) {
      if (psl.element(psl.conj(z, s)) != tau(psl.element(s))) return false;
    }
    return true;
  });
  if (!hit) return std::nullopt;
  return psl.element(*hit);
}

/// Class-level fingerprint of a finite group.
struct ClassStatistics {
  std::size_t order = 0;
  std::vector<std::size_t> class_sizes;  // sorted
  OrderStats order_stats;
  /// order -> number of classes of that order
  std::map<std::uint64_t, std::size_t> classes_per_order;

  bool operator==(const ClassStatistics&) const = default;
};

template <class E>
ClassStatistics class_statistics(const GroupTable<E>& g) {
  ClassStatistics st;
  st.order = g.order();
  const auto cp = conjugacy_classes(g);
  for (const auto& c : cp.classes) {
    st.class_sizes.push_back(c.members.size());
    ++st.classes_per_order[g.element_order(c.representative)];
  }
  std::sort(st.class_sizes.begin(), st.class_sizes.end());
  st.order_stats = order_statistics(g);
  return st;
}

struct ClassStatisticsMatch {
  ClassStatistics psl3_2;
  ClassStatistics psl2_7;
  bool holds() const { return psl3_2 == psl2_7; }
};

inline ClassStatisticsMatch verify_class_statistics_match() {
  return {class_statistics(psl3_mod2()), class_statistics(psl2(7))};
}

}  // namespace sunada_lab
