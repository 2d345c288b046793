#pragma once

// Sunada triples and transplantation on finite Schreier-graph models.
//
// Left-coset dictionary. Functions on G/H are functions on G invariant under
// right translation by H, and G acts on them by left translation. A
// coefficient function c on G that is constant on the right cosets H2.g
// gives the operator
//
//     (T f)(x) = sum_g c(g) f(x g)
//
// which commutes with every left translation and maps H1-invariant
// functions to H2-invariant ones. In the indicator bases of G/H1 and G/H2
// (ordered by smallest coset member) its matrix is
//
//     T[x H2, y H1] = sum_{h in H1} c(x^{-1} y h).
//
// The Schreier graph of G/H has an edge u -> s.u for every generator s in
// the multiset, symmetrized with s^{-1}, so T.A1 = A2.T and T.L1 = L2.T hold
// exactly whenever c satisfies the invariance condition; the Sunada
// condition is what makes some such T invertible.

#include <cstdint>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "sunada_lab/group.hpp"
#include "sunada_lab/intmat.hpp"

namespace sunada_lab {

struct SunadaReport {
  bool holds = false;
  std::vector<Index> class_reps;
  std::vector<std::size_t> class_sizes;
  std::vector<std::size_t> counts_h1;
  std::vector<std::size_t> counts_h2;
  /// Class labels where #([g] n H1) != #([g] n H2).
  std::vector<std::size_t> violating;
};

/// #([g] n H1) == #([g] n H2) for every conjugacy class.
template <class E>
SunadaReport verify_sunada(const GroupTable<E>& g, const ClassPartition& classes,
                           const Subgroup& h1, const Subgroup& h2) {
  SunadaReport rep;
  rep.counts_h1.assign(classes.size(), 0);
  rep.counts_h2.assign(classes.size(), 0);
  for (Index m : h1.members()) ++rep.counts_h1[classes.class_of[m]];
  for (Index m : h2.members()) ++rep.counts_h2[classes.class_of[m]];
  for (std::size_t c = 0; c < classes.size(); ++c) {
    rep.class_reps.push_back(classes.classes[c].representative);
    rep.class_sizes.push_back(classes.classes[c].members.size());
    if (rep.counts_h1[c] != rep.counts_h2[c]) rep.violating.push_back(c);
  }
  rep.holds = rep.violating.empty();
  (void)g;
  return rep;
}

template <class E>
SunadaReport verify_sunada(const GroupTable<E>& g, const Subgroup& h1, const Subgroup& h2) {
  return verify_sunada(g, conjugacy_classes(g), h1, h2);
}

/// Number of cosets of H fixed by each class representative.
template <class E>
std::vector<std::size_t> permutation_character(const GroupTable<E>& g,
                                               const ClassPartition& classes,
                                               const Subgroup& h) {
  const CosetSpace cs = coset_space(g, h);
  std::vector<std::size_t> chi;
  chi.reserve(classes.size());
  for (const auto& cls : classes.classes) {
    chi.push_back(fixed_points(coset_action(g, cs, cls.representative).perm));
  }
  return chi;
}

template <class E>
std::vector<std::size_t> permutation_character(const GroupTable<E>& g, const Subgroup& h) {
  return permutation_character(g, conjugacy_classes(g), h);
}

struct TransplantationCertificate {
  std::string group_id;
  std::vector<Index> h1;
  std::vector<Index> h2;
  /// Value of c on each right coset H2.g, cosets ordered by smallest member.
  std::vector<std::int64_t> c_cosets;
  /// c expanded to every element of G.
  std::vector<std::int64_t> c;
  /// [G:H2] x [G:H1].
  IntMatrix T;
  BigInt det;
};

/// Precomputed data for evaluating T for many coefficient functions.
class TransplantationBasis {
 public:
  template <class E>
  TransplantationBasis(const GroupTable<E>& g, const Subgroup& h1, const Subgroup& h2)
      : left1_(coset_space(g, h1)),
        left2_(coset_space(g, h2)),
        right2_(coset_space(g, h2, CosetSide::kRight)) {
    const std::size_t m1 = left1_.size(), m2 = left2_.size(), nr = right2_.size();
    counts_.assign(nr, IntMatrix(m2, m1));
    for (std::size_t i = 0; i < m2; ++i) {
      const Index xi_inv = g.inv(left2_.reps[i]);
      for (std::size_t j = 0; j < m1; ++j) {
        const Index base = g.mul(xi_inv, left1_.reps[j]);
        for (Index h : h1.members()) ++counts_[right2_.block_of[g.mul(base, h)]](i, j);
      }
    }
  }

  std::size_t right_cosets() const { return right2_.size(); }
  const CosetSpace& left1() const { return left1_; }
  const CosetSpace& left2() const { return left2_; }
  const CosetSpace& right2() const { return right2_; }

  IntMatrix matrix(const std::vector<std::int64_t>& c_cosets) const {
    if (c_cosets.size() != counts_.size()) throw InputError("coefficient vector has wrong length");
    IntMatrix t(left2_.size(), left1_.size());
    for (std::size_t r = 0; r < counts_.size(); ++r) {
      if (c_cosets[r] == 0) continue;
      for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j) t(i, j) += c_cosets[r] * counts_[r](i, j);
    }
    return t;
  }

  std::vector<std::int64_t> expand(const std::vector<std::int64_t>& c_cosets) const {
    std::vector<std::int64_t> c(right2_.block_of.size());
    for (std::size_t x = 0; x < c.size(); ++x) c[x] = c_cosets[right2_.block_of[x]];
    return c;
  }

 private:
  CosetSpace left1_, left2_, right2_;
  std::vector<IntMatrix> counts_;
};

/// Transplantation matrix for an explicit coefficient function on G; throws
/// if c is not constant on the right cosets of H2.
template <class E>
IntMatrix transplantation_matrix(const GroupTable<E>& g, const Subgroup& h1, const Subgroup& h2,
                                 const std::vector<std::int64_t>& c) {
  if (c.size() != g.order()) throw InputError("c must have one value per group element");
  TransplantationBasis basis(g, h1, h2);
  std::vector<std::int64_t> per_coset(basis.right_cosets());
  for (std::size_t r = 0; r < basis.right_cosets(); ++r) {
    const auto& block = basis.right2().blocks[r];
    per_coset[r] = c[block.front()];
    for (Index x : block)
      if (c[x] != per_coset[r]) throw InputError("c is not constant on right H2-cosets");
  }
  return basis.matrix(per_coset);
}

/// Lexicographic search over c: H2\G -> {0..coeff_bound} (last coset varies
/// fastest) for the first c whose T is invertible over Q.
template <class E>
TransplantationCertificate find_transplantation(const GroupTable<E>& g, const Subgroup& h1,
                                                const Subgroup& h2, std::int64_t coeff_bound,
                                                std::string group_id = {},
                                                std::uint64_t max_candidates = 50'000'000) {
  if (h1.order() != h2.order()) throw InputError("H1 and H2 must have equal index");
  if (coeff_bound < 0) throw InputError("coeff_bound must be non-negative");
  TransplantationBasis basis(g, h1, h2);
  const std::size_t nr = basis.right_cosets();
  std::vector<std::int64_t> c(nr, 0);
  for (std::uint64_t tried = 0; tried < max_candidates; ++tried) {
    IntMatrix t = basis.matrix(c);
    BigInt det = determinant(t);
    if (det != 0) {
      TransplantationCertificate cert;
      cert.group_id = std::move(group_id);
      cert.h1 = h1.members();
      cert.h2 = h2.members();
      cert.c_cosets = c;
      cert.c = basis.expand(c);
      cert.T = std::move(t);
      cert.det = std::move(det);
      return cert;
    }
    std::size_t k = nr;
    while (k > 0 && c[k - 1] == coeff_bound) c[--k] = 0;
    if (k == 0) break;
    ++c[k - 1];
  }
  throw NotFoundError("no invertible transplantation with coefficients in [0, " +
                      std::to_string(coeff_bound) + "]; raise the bound");
}

struct SchreierGraph {
  struct Edge {
    std::uint32_t from;
    std::uint32_t to;
    std::uint32_t label;
  };

  std::size_t vertices = 0;
  std::vector<Index> generators;
  std::vector<Permutation> perms;
  std::vector<Edge> edges;
  IntMatrix adjacency;
  IntMatrix laplacian;

  /// Arbitrary symmetric graph given by its adjacency matrix (controls).
  static SchreierGraph from_adjacency(const IntMatrix& adj) {
    SchreierGraph x;
    x.vertices = adj.rows();
    x.adjacency = adj;
    x.laplacian = IntMatrix(adj.rows(), adj.cols());
    for (std::size_t u = 0; u < adj.rows(); ++u) {
      std::int64_t deg = 0;
      for (std::size_t v = 0; v < adj.cols(); ++v) {
        deg += adj(u, v);
        x.laplacian(u, v) = -adj(u, v);
      }
      x.laplacian(u, u) += deg;
    }
    return x;
  }
};

/// Coset graph of G/H for a generator multiset, symmetrized so the
/// Laplacian is a symmetric integer matrix with zero row sums.
template <class E>
SchreierGraph schreier_graph(const GroupTable<E>& g, const CosetSpace& cs,
                             const std::vector<Index>& gens) {
  const std::size_t n = cs.size();
  SchreierGraph x;
  x.vertices = n;
  x.generators = gens;
  IntMatrix adj(n, n);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const Permutation p = coset_action(g, cs, gens[k]).perm;
    for (std::size_t u = 0; u < n; ++u) {
      x.edges.push_back({static_cast<std::uint32_t>(u), p[u], static_cast<std::uint32_t>(k)});
      adj(u, p[u]) += 1;
      adj(p[u], u) += 1;
    }
    x.perms.push_back(p);
  }
  SchreierGraph built = SchreierGraph::from_adjacency(adj);
  built.generators = std::move(x.generators);
  built.perms = std::move(x.perms);
  built.edges = std::move(x.edges);
  return built;
}

template <class E>
SchreierGraph schreier_graph(const GroupTable<E>& g, const Subgroup& h,
                             const std::vector<Index>& gens) {
  return schreier_graph(g, coset_space(g, h), gens);
}

inline IntMatrix permutation_matrix(const Permutation& p) {
  IntMatrix m(p.size(), p.size());
  for (std::size_t u = 0; u < p.size(); ++u) m(u, p[u]) = 1;
  return m;
}

/// T.A1 = A2.T and T.L1 = L2.T, plus T.P1(s) = P2(s).T for each generator
/// when both graphs carry their generator permutations.
inline bool verify_intertwining(const IntMatrix& t, const SchreierGraph& x1,
                                const SchreierGraph& x2) {
  if (t.rows() != x2.vertices || t.cols() != x1.vertices) {
    throw InputError("transplantation matrix does not match graph sizes");
  }
  if (!(t * x1.adjacency == x2.adjacency * t)) return false;
  if (!(t * x1.laplacian == x2.laplacian * t)) return false;
  if (x1.perms.size() == x2.perms.size()) {
    for (std::size_t k = 0; k < x1.perms.size(); ++k) {
      if (!(t * permutation_matrix(x1.perms[k]) == permutation_matrix(x2.perms[k]) * t)) {
        return false;
      }
    }
  }
  return true;
}

inline bool verify_intertwining(const TransplantationCertificate& cert, const SchreierGraph& x1,
                                const SchreierGraph& x2) {
  return verify_intertwining(cert.T, x1, x2);
}

inline bool charpoly_isospectral(const SchreierGraph& x1, const SchreierGraph& x2) {
  if (x1.vertices != x2.vertices) return false;
  return characteristic_polynomial(x1.laplacian) == characteristic_polynomial(x2.laplacian);
}

inline bool adjacency_isospectral(const SchreierGraph& x1, const SchreierGraph& x2) {
  if (x1.vertices != x2.vertices) return false;
  return characteristic_polynomial(x1.adjacency) == characteristic_polynomial(x2.adjacency);
}

inline constexpr const char* kCertificateSchema = "sunada-lab/transplantation/v1";

inline nlohmann::json big_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(v);
  }
  return v.str();
}

inline nlohmann::json to_json(const TransplantationCertificate& cert) {
  return {
      {"schema", kCertificateSchema},
      {"group_id", cert.group_id},
      {"h1", cert.h1},
      {"h2", cert.h2},
      {"c", cert.c},
      {"c_cosets", cert.c_cosets},
      {"T", cert.T.to_rows()},
      {"detT", big_to_json(cert.det)},
  };
}

/// Parses a certificate document; throws InputError on schema mismatch.
inline TransplantationCertificate certificate_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("schema", "") != kCertificateSchema) {
    throw InputError("unsupported certificate schema");
  }
  TransplantationCertificate cert;
  cert.group_id = j.at("group_id").get<std::string>();
  cert.h1 = j.at("h1").get<std::vector<Index>>();
  cert.h2 = j.at("h2").get<std::vector<Index>>();
  cert.c = j.at("c").get<std::vector<std::int64_t>>();
  cert.c_cosets = j.at("c_cosets").get<std::vector<std::int64_t>>();
  cert.T = IntMatrix::from_rows(j.at("T").get<std::vector<std::vector<std::int64_t>>>());
  const auto& d = j.at("detT");
  cert.det = d.is_string() ? BigInt(d.get<std::string>()) : BigInt(d.get<std::int64_t>());
  if (determinant(cert.T) != cert.det) throw InputError("certificate detT does not match T");
  return cert;
}

}  // namespace sunada_lab
