#pragma once

// Congruence-level constructions: S(4) subgroups K of PSL(2,Z/p) that are
// not conjugate to their image under tau (p = 7 mod 8) or tau_D (p = 1 mod
// 8), and the Sunada triple
//
//     G  = P(id x SL(2,Z/7) x SL(2,Z/p))
//     H1 = P(id x H1' x K),   H2 = P(id x H2' x K)
//
// inside PSL(2,Z/14p), where (H1', H2') = (K7, tau(K7)) is the index-7
// Sunada pair of PSL(2,Z/7) obtained from the same S(4) construction at p=7.

#include <array>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sunada_lab/group.hpp"
#include "sunada_lab/linear_groups.hpp"
#include "sunada_lab/modp.hpp"
#include "sunada_lab/product.hpp"
#include "sunada_lab/psl168.hpp"
#include "sunada_lab/sunada.hpp"

namespace sunada_lab {

/// F_p(i) with i^2 = -1. When -1 is already a square mod p the extension
/// collapses and i is an element of Z/p.
class QuadraticExtension {
 public:
  struct Elem {
    std::int64_t re = 0;
    std::int64_t im = 0;
    bool operator==(const Elem&) const = default;
  };

  explicit QuadraticExtension(std::int64_t p) : p_(p) {
    if (!is_prime(p) || p == 2) throw InputError("quadratic extension needs an odd prime");
    const auto roots = sqrt_mod(-1, p);
    if (!roots.empty()) i_in_base_ = roots.front().value();
  }

  std::int64_t prime() const { return p_; }
  bool collapsed() const { return i_in_base_.has_value(); }

  Elem from(std::int64_t a) const { return {detail::reduce(a, p_), 0}; }
  Elem i() const { return collapsed() ? from(*i_in_base_) : Elem{0, 1}; }

  Elem add(Elem a, Elem b) const { return {(a.re + b.re) % p_, (a.im + b.im) % p_}; }
  Elem neg(Elem a) const { return {detail::reduce(-a.re, p_), detail::reduce(-a.im, p_)}; }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    // (a + b i)(c + d i) = (ac - bd) + (ad + bc) i
    return {detail::reduce(a.re * b.re - a.im * b.im, p_),
            detail::reduce(a.re * b.im + a.im * b.re, p_)};
  }
  Elem inv(Elem a) const {
    const std::int64_t norm = detail::reduce(a.re * a.re + a.im * a.im, p_);
    const std::int64_t ni = inverse_mod(norm, p_);
    return {detail::reduce(a.re * ni, p_), detail::reduce(-a.im * ni, p_)};
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  /// z -> (a z + b) / (c z + d)
  Elem mobius(const ModMatrix& m, Elem z) const {
    return div(add(mul(from(m(0, 0)), z), from(m(0, 1))),
               add(mul(from(m(1, 0)), z), from(m(1, 1))));
  }

  /// c z^2 + (d - a) z - b = 0
  bool is_fixed_point(const ModMatrix& m, Elem z) const {
    const Elem v = sub(add(mul(from(m(1, 0)), mul(z, z)), mul(from(m(1, 1) - m(0, 0)), z)),
                       from(m(0, 1)));
    return v == Elem{0, 0};
  }

 private:
  std::int64_t p_;
  std::optional<std::int64_t> i_in_base_;
};

using RelationChecks = std::map<std::string, bool>;

inline bool all_hold(const RelationChecks& r) {
  for (const auto& [name, ok] : r)
    if (!ok) return false;
  return true;
}

struct S4Construction {
  std::int64_t p = 0;
  std::int64_t alpha = 0, beta = 0, gamma = 0;
  ModMatrix A, C1, D, C2, E;
  GroupTable<ProjMatrix> psl;
  Subgroup K;
  RelationChecks relations;
  bool fingerprint = false;
};

namespace detail {

inline std::int64_t smallest_root(std::int64_t a, std::int64_t p, const char* what) {
  const auto roots = sqrt_mod(a, p);
  if (roots.empty()) throw InputError(std::string(what) + " is not a square mod " + std::to_string(p));
  return roots.front().value();
}

inline bool proj_eq(const ModMatrix& a, const ModMatrix& b) {
  return ProjMatrix::canonicalize(a) == ProjMatrix::canonicalize(b);
}

/// The S(4) relations shared by both constructions, evaluated in PSL.
inline RelationChecks s4_relations(const ModMatrix& A, const ModMatrix& C1, const ModMatrix& D,
                                   const ModMatrix& C2, const ModMatrix& E) {
  const ModMatrix I = ModMatrix::identity(A.modulus(), 2);
  const ModMatrix Ei = E.inverse(), Ai = A.inverse();
  return {
      {"A^2 = C1", proj_eq(A * A, C1)},
      {"A^4 = 1", proj_eq(A * A * A * A, I)},
      {"D^2 = 1", proj_eq(D * D, I)},
      {"DAD = A^-1", proj_eq(D * A * D, Ai)},
      {"C2 = C1 D", proj_eq(C2, C1 * D)},
      {"E^3 = 1", proj_eq(E * E * E, I)},
      {"E C1 E^-1 = D", proj_eq(E * C1 * Ei, D)},
      {"E D E^-1 = C2", proj_eq(E * D * Ei, C2)},
      {"E C2 E^-1 = C1", proj_eq(E * C2 * Ei, C1)},
      {"A E A^-1 E = C1", proj_eq(A * E * Ai * E, C1)},
  };
}

}  // namespace detail

/// Deterministic (beta, gamma): the first beta = 1, 2, ... admitting gamma
/// with beta^2 + gamma^2 = -1 (smallest such gamma), with gamma negated if
/// beta + gamma - 1 = 0.
inline std::pair<std::int64_t, std::int64_t> choose_beta_gamma(std::int64_t p) {
  for (std::int64_t beta = 1; beta < p; ++beta) {
    const auto roots = sqrt_mod(-1 - beta * beta, p);
    if (roots.empty()) continue;
    std::int64_t gamma = roots.front().value();
    if (gamma == 0) continue;
    if (detail::reduce(beta + gamma - 1, p) == 0) gamma = detail::reduce(-gamma, p);
    return {beta, gamma};
  }
  throw NotFoundError("no beta, gamma with beta^2 + gamma^2 = -1 mod " + std::to_string(p));
}

/// The order-3 element sending the fixed points of C1 -> D -> C2 -> C1.
inline ModMatrix e_tilde(std::int64_t p, std::int64_t beta, std::int64_t gamma) {
  const Residue b(beta, p), g(gamma, p), one(1, p);
  const Residue den = b + g - one;
  const Residue a = (g + b * b) / den;
  const Residue bb = (-b + b * g - g) / den;
  const Residue c = (b * g - one) / den;
  const Residue d = (b + g * g) / den;
  return ModMatrix(p, {{a.value(), bb.value()}, {c.value(), d.value()}});
}

/// S(4) inside PSL(2,Z/p) for p = 7 (mod 8): K = <A, D, E>.
inline S4Construction build_s4_mod_p(std::int64_t p, const GroupOptions& opts = {}) {
  if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
  if (p % 8 != 7) {
    throw InputError("S(4) construction needs p = 7 (mod 8): a cyclic subgroup of order 4 "
                     "requires p = +-1 (mod 8) and p = 1 (mod 4) makes tau inner; got p = " +
                     std::to_string(p));
  }
  S4Construction s;
  s.p = p;
  s.alpha = detail::smallest_root(inverse_mod(2, p), p, "1/2");
  std::tie(s.beta, s.gamma) = choose_beta_gamma(p);
  const std::int64_t a = s.alpha;
  s.A = ModMatrix(p, {{a, a}, {-a, a}});
  s.C1 = ModMatrix(p, {{0, 1}, {-1, 0}});
  s.D = ModMatrix(p, {{s.beta, s.gamma}, {s.gamma, -s.beta}});
  s.C2 = ModMatrix(p, {{-s.gamma, s.beta}, {s.beta, s.gamma}});
  s.E = e_tilde(p, s.beta, s.gamma);

  s.relations = detail::s4_relations(s.A, s.C1, s.D, s.C2, s.E);
  const ModMatrix& E = s.E;
  s.relations["beta^2 + gamma^2 = -1"] = detail::reduce(s.beta * s.beta + s.gamma * s.gamma + 1, p) == 0;
  s.relations["alpha^2 = 1/2"] = detail::reduce(2 * a * a - 1, p) == 0;
  s.relations["beta, gamma != 0"] = s.beta != 0 && s.gamma != 0;
  s.relations["beta + gamma - 1 != 0"] = detail::reduce(s.beta + s.gamma - 1, p) != 0;
  s.relations["E: a + d = 1"] = detail::reduce(E(0, 0) + E(1, 1) - 1, p) == 0;
  s.relations["E: c - b = 1"] = detail::reduce(E(1, 0) - E(0, 1) - 1, p) == 0;
  s.relations["E: ad - bc = 1"] = E.det() == 1;

  s.psl = psl2(p, opts);
  s.K = Subgroup::generated(s.psl, {s.psl.index_of(ProjMatrix(s.A)), s.psl.index_of(ProjMatrix(s.D)),
                                     s.psl.index_of(ProjMatrix(s.E))});
  s.fingerprint = s4_fingerprint(s.psl, s.K);
  return s;
}

struct FixedPointCheck {
  bool c1_fixed = false;   // +-i
  bool d_fixed = false;    // (beta +- i) / gamma
  bool c2_fixed = false;   // (-gamma +- i) / beta
  bool e_cycles = false;   // E: i -> (beta+i)/gamma -> (-gamma+i)/beta -> i
  bool holds() const { return c1_fixed && d_fixed && c2_fixed && e_cycles; }
};

/// Substitutes the listed fixed points into each linear fractional map.
inline FixedPointCheck check_fixed_points(const S4Construction& s) {
  const QuadraticExtension f(s.p);
  using El = QuadraticExtension::Elem;
  const El i = f.i(), mi = f.neg(i);
  const El b = f.from(s.beta), g = f.from(s.gamma);
  const El d_plus = f.div(f.add(b, i), g), d_minus = f.div(f.add(b, mi), g);
  const El c2_plus = f.div(f.add(f.neg(g), i), b), c2_minus = f.div(f.add(f.neg(g), mi), b);
  FixedPointCheck out;
  out.c1_fixed = f.is_fixed_point(s.C1, i) && f.is_fixed_point(s.C1, mi);
  out.d_fixed = f.is_fixed_point(s.D, d_plus) && f.is_fixed_point(s.D, d_minus);
  out.c2_fixed = f.is_fixed_point(s.C2, c2_plus) && f.is_fixed_point(s.C2, c2_minus);
  out.e_cycles = f.mobius(s.E, i) == d_plus && f.mobius(s.E, d_plus) == c2_plus &&
                 f.mobius(s.E, c2_plus) == i;
  return out;
}

enum class CentralizerForm {
  kNotCommuting,
  /// (x y / -y x), x^2 + y^2 = 1
  kRotation,
  /// (b g / g -b), b^2 + g^2 = -1
  kReflection,
  kOther,
};

/// Classifies Z in PSL(2,Z/p) against the two shapes of matrices commuting
/// (projectively) with C1 = (0 1 / -1 0).
inline CentralizerForm centralizer_form_check(std::int64_t p, const ProjMatrix& z) {
  const ModMatrix c1(p, {{0, 1}, {-1, 0}});
  const ModMatrix& m = z.rep();
  if (!detail::proj_eq(m * c1 * m.inverse(), c1)) return CentralizerForm::kNotCommuting;
  const std::int64_t x = m(0, 0), y = m(0, 1);
  if (m(1, 0) == detail::reduce(-y, p) && m(1, 1) == x &&
      detail::reduce(x * x + y * y - 1, p) == 0) {
    return CentralizerForm::kRotation;
  }
  if (m(1, 0) == y && m(1, 1) == detail::reduce(-x, p) &&
      detail::reduce(x * x + y * y + 1, p) == 0) {
    return CentralizerForm::kReflection;
  }
  return CentralizerForm::kOther;
}

struct NonconjugacyCertificate {
  std::size_t scanned = 0;
  std::optional<Index> witness;
  /// Replay of the hand argument (empty when not applicable).
  RelationChecks replay;
  bool holds() const { return !witness && all_hold(replay); }
};

inline nlohmann::json to_json(const NonconjugacyCertificate& c) {
  nlohmann::json replay = nlohmann::json::object();
  for (const auto& [k, v] : c.replay) replay[k] = v;
  return {{"scanned", c.scanned},
          {"witness", c.witness ? nlohmann::json(*c.witness) : nlohmann::json(nullptr)},
          {"replay", replay}};
}

/// K is not conjugate to tau(K): exhaustive scan of PSL(2,Z/p), plus a
/// replay of the two-sign argument on every Z with Z tau(C1) Z^-1 = C1 and
/// Z tau(A) Z^-1 = A.
inline NonconjugacyCertificate verify_nonconjugate_tau(const S4Construction& s) {
  const auto& g = s.psl;
  NonconjugacyCertificate cert;
  const Subgroup tk = map_subgroup(g, s.K, [](const ProjMatrix& m) { return tau(m); });
  cert.scanned = g.order();
  cert.witness = subgroups_conjugate(g, s.K, tk);

  const std::int64_t p = s.p;
  cert.replay["tau(C1) = C1"] = detail::proj_eq(tau(s.C1), s.C1);
  cert.replay["tau(A) = A^-1"] = detail::proj_eq(tau(s.A), s.A.inverse());

  bool forms_ok = true, d_never = true;
  std::size_t candidates = 0;
  for (Index zi = 0; zi < g.order(); ++zi) {
    const ModMatrix& z = g.element(zi).rep();
    const ModMatrix zinv = z.inverse();
    if (!detail::proj_eq(z * tau(s.C1) * zinv, s.C1)) continue;
    if (!detail::proj_eq(z * tau(s.A) * zinv, s.A)) continue;
    ++candidates;
    const std::int64_t x = z(0, 0), y = z(0, 1);
    forms_ok = forms_ok && z(1, 0) == y && z(1, 1) == detail::reduce(-x, p) &&
               detail::reduce(x * x + y * y + 1, p) == 0;
    d_never = d_never && !detail::proj_eq(z * tau(s.D) * zinv, s.D);
  }
  cert.replay["Z has the form (x y / y -x), x^2+y^2 = -1"] = candidates > 0 && forms_ok;
  cert.replay["no such Z gives D = Z tau(D) Z^-1"] = d_never;

  // Entry equations over every (x, y) with x^2 + y^2 = -1.
  bool plus_impossible = true, minus_impossible = true;
  const std::int64_t b = s.beta, c = s.gamma;
  for (std::int64_t x = 0; x < p; ++x)
    for (std::int64_t y = 0; y < p; ++y) {
      if (detail::reduce(x * x + y * y + 1, p) != 0) continue;
      if (detail::reduce(x * c + y * b, p) == 0 && detail::reduce(-x * b + y * c, p) == 0)
        plus_impossible = false;
      if (detail::reduce(y * c - x * b, p) == 0 && detail::reduce(-y * b - x * c, p) == 0)
        minus_impossible = false;
    }
  cert.replay["plus sign: x gamma + y beta = 0 = -x beta + y gamma has no solution"] = plus_impossible;
  cert.replay["minus sign: y gamma = x beta, -y beta = x gamma has no solution"] = minus_impossible;
  return cert;
}

/// tau_D: (a b / c d) -> (a Db / c/D d), conjugation by diag(D, 1).
inline ModMatrix tau_d(const ModMatrix& m, std::int64_t dn) {
  const std::int64_t p = m.modulus();
  const std::int64_t di = inverse_mod(dn, p);
  return ModMatrix(p, {{m(0, 0), detail::mul_mod(dn, m(0, 1), p)},
                       {detail::mul_mod(di, m(1, 0), p), m(1, 1)}});
}

struct S4DiagonalConstruction {
  std::int64_t p = 0;
  std::int64_t i = 0;
  std::int64_t alpha = 0;
  std::int64_t dnon = 0;
  ModMatrix A, C1, D, C2, E;
  GroupTable<ProjMatrix> psl;
  Subgroup K;
  RelationChecks relations;
  bool fingerprint = false;
};

/// Smallest quadratic non-residue mod p.
inline std::int64_t smallest_nonresidue(std::int64_t p) {
  for (std::int64_t a = 2; a < p; ++a)
    if (legendre(a, p) == -1) return a;
  throw NotFoundError("no non-residue mod " + std::to_string(p));
}

/// S(4) with diagonal A and C1 for p = 1 (mod 4). Needs 2 to be a square
/// (for alpha), which forces p = 1 (mod 8), and dnon a non-residue.
inline S4DiagonalConstruction build_s4_diagonal(std::int64_t p, std::optional<std::int64_t> dnon = {},
                                                const GroupOptions& opts = {}) {
  if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
  std::vector<std::string> failed;
  if (p % 4 != 1) failed.push_back("p = 1 (mod 4)");
  if (legendre(2, p) != 1) failed.push_back("2 is a square mod p");
  const std::int64_t dn = dnon ? detail::reduce(*dnon, p) : (failed.empty() ? smallest_nonresidue(p) : 0);
  if (failed.empty() && legendre(dn, p) != -1) {
    failed.push_back("D is a non-residue (for a square D, tau_D is inner)");
  }
  if (!failed.empty()) {
    std::string msg = "diagonal S(4) construction preconditions failed for p = " + std::to_string(p) + ":";
    for (const auto& f : failed) msg += " [" + f + "]";
    throw InputError(msg);
  }
  S4DiagonalConstruction s;
  s.p = p;
  s.dnon = dn;
  s.i = detail::smallest_root(-1, p, "-1");
  s.alpha = detail::smallest_root(inverse_mod(2, p), p, "1/2");
  const std::int64_t i = s.i, a = s.alpha, half = inverse_mod(2, p);
  s.A = ModMatrix::diagonal(p, a * (1 + i), a * (1 - i));
  s.C1 = ModMatrix::diagonal(p, i, -i);
  s.D = ModMatrix(p, {{0, 1}, {-1, 0}});
  s.C2 = s.C1 * s.D;
  s.E = ModMatrix(p, {{(1 - i) * half, (1 - i) * half}, {-(1 + i) * half, (1 + i) * half}});

  s.relations = detail::s4_relations(s.A, s.C1, s.D, s.C2, s.E);
  s.relations["i^2 = -1"] = detail::reduce(i * i + 1, p) == 0;
  s.relations["alpha^2 = 1/2"] = detail::reduce(2 * a * a - 1, p) == 0;
  s.relations["tau_D(A) = A"] = tau_d(s.A, dn) == s.A;
  s.relations["tau_D(C1) = C1"] = tau_d(s.C1, dn) == s.C1;
  s.relations["tau_D(D) = (0 D / -1/D 0)"] =
      tau_d(s.D, dn) == ModMatrix(p, {{0, dn}, {-inverse_mod(dn, p), 0}});

  s.psl = psl2(p, opts);
  s.K = Subgroup::generated(s.psl, {s.psl.index_of(ProjMatrix(s.A)), s.psl.index_of(ProjMatrix(s.D)),
                                     s.psl.index_of(ProjMatrix(s.E))});
  s.fingerprint = s4_fingerprint(s.psl, s.K);
  return s;
}

/// K is not conjugate to tau_D(K): exhaustive scan, plus the diagonal
/// argument (every Z fixing A and C1 is diagonal, and conjugating tau_D(D)
/// by diag(x, 1/x) scales its corner by x^2, never reaching +-1).
inline NonconjugacyCertificate verify_nonconjugate_tau_d(const S4DiagonalConstruction& s) {
  const auto& g = s.psl;
  const std::int64_t p = s.p, dn = s.dnon;
  NonconjugacyCertificate cert;
  const Subgroup tk = map_subgroup(g, s.K, [&](const ProjMatrix& m) { return ProjMatrix(tau_d(m.rep(), dn)); });
  cert.scanned = g.order();
  cert.witness = subgroups_conjugate(g, s.K, tk);

  bool diagonal = true, never_c1 = true;
  std::size_t candidates = 0;
  const ModMatrix td = tau_d(s.D, dn);
  for (Index zi = 0; zi < g.order(); ++zi) {
    const ModMatrix& z = g.element(zi).rep();
    const ModMatrix zinv = z.inverse();
    if (!detail::proj_eq(z * s.A * zinv, s.A) || !detail::proj_eq(z * s.C1 * zinv, s.C1)) continue;
    ++candidates;
    diagonal = diagonal && z(0, 1) == 0 && z(1, 0) == 0;
    never_c1 = never_c1 && !detail::proj_eq(z * td * zinv, s.D);
  }
  cert.replay["Z fixing A and C1 is diagonal"] = candidates > 0 && diagonal;
  cert.replay["Z tau_D(D) Z^-1 != (0 1 / -1 0) for all such Z"] = never_c1;
  bool corner = true;
  for (std::int64_t x = 1; x < p; ++x) {
    const std::int64_t v = detail::mul_mod(detail::mul_mod(x, x, p), dn, p);
    corner = corner && v != 1 && v != p - 1;
  }
  cert.replay["x^2 D != +-1 for all x"] = corner;
  return cert;
}

// ---------------------------------------------------------------------------
// Products and the congruence triple.

/// SL(2,Z/k) with its classes and the action of -I on classes.
struct SlFactor {
  std::int64_t modulus = 0;
  GroupTable<ModMatrix> group;
  ClassPartition classes;
  std::vector<std::uint32_t> neg_class;

  static SlFactor build(std::int64_t k, const GroupOptions& opts = {}) {
    SlFactor f;
    f.modulus = k;
    f.group = sl2(k, opts);
    f.classes = conjugacy_classes(f.group);
    for (const auto& c : f.classes.classes) {
      f.neg_class.push_back(f.classes.class_of[f.group.index_of(-f.group.element(c.representative))]);
    }
    return f;
  }
};

/// Conjugacy class of P(F1 x ... x Fr) as a sign orbit of component-class
/// tuples.
struct FusedClass {
  std::vector<std::uint32_t> component_classes;
  std::vector<Index> representative;  // component class representatives
  std::uint64_t size = 0;
};

namespace detail {

inline std::vector<std::uint32_t> negate_tuple(const std::vector<const SlFactor*>& fs,
                                               const std::vector<std::uint32_t>& t) {
  std::vector<std::uint32_t> n(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) n[i] = fs[i]->neg_class[t[i]];
  return n;
}

}  // namespace detail

/// Class model of the sign quotient: tuples (c1..cr) and (-c1..-cr) fuse;
/// a fused pair has size |c1|...|cr|, a self-paired tuple half that.
inline std::vector<FusedClass> fused_classes(const std::vector<const SlFactor*>& fs) {
  std::vector<FusedClass> out;
  std::vector<std::uint32_t> t(fs.size(), 0);
  while (true) {
    const auto n = detail::negate_tuple(fs, t);
    if (!(n < t)) {
      FusedClass fc;
      fc.component_classes = t;
      std::uint64_t size = 1;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto& c = fs[i]->classes.classes[t[i]];
        fc.representative.push_back(c.representative);
        size *= c.members.size();
      }
      fc.size = n == t ? size / 2 : size;
      out.push_back(std::move(fc));
    }
    std::size_t k = fs.size();
    while (k > 0 && ++t[k - 1] == fs[k - 1]->classes.size()) t[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

/// Fused-class label of a tuple of component elements.
inline std::size_t fused_class_of(const std::vector<const SlFactor*>& fs,
                                  const std::vector<FusedClass>& classes,
                                  const std::map<std::vector<std::uint32_t>, std::size_t>& lookup,
                                  const std::vector<Index>& comps) {
  std::vector<std::uint32_t> t(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) t[i] = fs[i]->classes.class_of[comps[i]];
  const auto n = detail::negate_tuple(fs, t);
  (void)classes;
  return lookup.at(std::min(t, n));
}

inline std::map<std::vector<std::uint32_t>, std::size_t> fused_lookup(const std::vector<FusedClass>& cs) {
  std::map<std::vector<std::uint32_t>, std::size_t> m;
  for (std::size_t i = 0; i < cs.size(); ++i) m[cs[i].component_classes] = i;
  return m;
}

struct FusionValidation {
  std::size_t brute_force_classes = 0;
  std::size_t model_classes = 0;
  std::uint64_t model_total = 0;
  std::size_t group_order = 0;
  /// Every brute-force class maps onto exactly one model class of equal size.
  bool consistent = false;
};

/// Compares the fused-class model against conjugacy classes computed by
/// brute force on the materialized product group.
inline FusionValidation validate_class_fusion(const std::vector<const SlFactor*>& fs) {
  std::vector<const GroupTable<ModMatrix>*> tables;
  for (const auto* f : fs) tables.push_back(&f->group);
  const auto prod = product_group(tables, true);
  const auto brute = conjugacy_classes(prod);
  const auto model = fused_classes(fs);
  const auto lookup = fused_lookup(model);

  FusionValidation v;
  v.brute_force_classes = brute.size();
  v.model_classes = model.size();
  v.group_order = prod.order();
  for (const auto& fc : model) v.model_total += fc.size;

  bool ok = v.brute_force_classes == v.model_classes && v.model_total == v.group_order;
  std::vector<int> hit(model.size(), 0);
  for (const auto& cls : brute.classes) {
    std::optional<std::size_t> label;
    for (Index x : cls.members) {
      std::vector<Index> comps;
      for (std::size_t i = 0; i < fs.size(); ++i) comps.push_back(fs[i]->group.index_of(prod.element(x).component(i)));
      const std::size_t l = fused_class_of(fs, model, lookup, comps);
      if (label && *label != l) ok = false;
      label = l;
    }
    if (label) {
      ++hit[*label];
      ok = ok && model[*label].size == cls.members.size();
    }
  }
  for (int h : hit) ok = ok && h == 1;
  v.consistent = ok;
  return v;
}

/// The index-7 Sunada pair (K7, tau(K7)) of PSL(2,Z/7).
struct Psl27Pair {
  GroupTable<ProjMatrix> group;
  Subgroup h1;
  Subgroup h2;
};

inline Psl27Pair psl27_sunada_pair() {
  S4Construction s = build_s4_mod_p(7);
  Psl27Pair out{std::move(s.psl), std::move(s.K), {}};
  out.h2 = map_subgroup(out.group, out.h1, [](const ProjMatrix& m) { return tau(m); });
  return out;
}

/// Preimage in SL(2,Z/k) of a subgroup of PSL(2,Z/k).
inline Subgroup sl_preimage(const GroupTable<ModMatrix>& sl, const GroupTable<ProjMatrix>& psl,
                            const Subgroup& h) {
  return Subgroup::filtered(sl, [&](const ModMatrix& m) {
    return h.contains(psl.index_of(ProjMatrix(m)));
  });
}

/// Cycle count of an element acting componentwise on a product of coset
/// spaces SL(2,Z/k_i)/H_i. Each H_i must contain -I (or k_i = 2) so that the
/// sign quotient does not merge cosets.
struct ProductCosets {
  std::vector<const GroupTable<ModMatrix>*> groups;
  std::vector<CosetSpace> cosets;

  std::size_t points() const {
    std::size_t n = 1;
    for (const auto& c : cosets) n *= c.size();
    return n;
  }

  /// Permutations of each factor induced by the components of x.
  std::vector<Permutation> factor_perms(const std::vector<ModMatrix>& x) const {
    std::vector<Permutation> out;
    for (std::size_t i = 0; i < groups.size(); ++i)
      out.push_back(coset_action(*groups[i], cosets[i], groups[i]->index_of(x[i])).perm);
    return out;
  }

  /// The induced permutation of the product space (mixed radix, last factor
  /// fastest).
  Permutation perm(const std::vector<ModMatrix>& x) const {
    const auto fp = factor_perms(x);
    const std::size_t n = points();
    Permutation p(n);
    std::vector<std::size_t> digits(cosets.size());
    for (std::size_t pt = 0; pt < n; ++pt) {
      std::size_t rest = pt;
      for (std::size_t i = cosets.size(); i-- > 0;) {
        digits[i] = rest % cosets[i].size();
        rest /= cosets[i].size();
      }
      std::size_t img = 0;
      for (std::size_t i = 0; i < cosets.size(); ++i) img = img * cosets[i].size() + fp[i][digits[i]];
      p[pt] = static_cast<std::uint32_t>(img);
    }
    return p;
  }
};

struct NonIsometryCertificate {
  /// Conjugation: the PSL(2,Z/7) component would conjugate H1' to H2'.
  std::size_t scanned_7 = 0;
  std::optional<Index> witness_7;
  /// tau and tau-compositions: the PSL(2,Z/p) component would conjugate K
  /// to tau(K).
  NonconjugacyCertificate k_vs_tau_k;
  bool holds() const { return !witness_7 && k_vs_tau_k.holds(); }
};

struct TorsionCheck {
  /// Images of S, ST, (ST)^2 in PSL(2,Z/2) are all nontrivial.
  bool torsion_nontrivial_mod_2 = false;
  /// Every element of the subgroup has trivial Z/2 component.
  bool subgroup_trivial_mod_2 = false;
  bool holds() const { return torsion_nontrivial_mod_2 && subgroup_trivial_mod_2; }
};

/// S = (0 1 / -1 0), ST and (ST)^2: representatives of the torsion classes
/// of PSL(2,Z), reduced mod n.
inline std::array<ModMatrix, 3> torsion_representatives(std::int64_t n) {
  const ModMatrix s(n, {{0, 1}, {-1, 0}});
  const ModMatrix st = s * unipotent_upper(n);
  return {s, st, st * st};
}

struct SurfaceInvariants {
  std::size_t index = 0;
  std::size_t cusps = 0;
  std::int64_t genus = 0;
};

namespace detail {

inline SurfaceInvariants surface_from_index_and_cusps(std::size_t index, std::size_t cusps) {
  if (index % 6 != 0) throw InputError("index not divisible by 6; subgroup cannot be torsion-free");
  const std::int64_t twice_genus = 2 - static_cast<std::int64_t>(cusps) + static_cast<std::int64_t>(index / 6);
  if (twice_genus < 0 || twice_genus % 2 != 0) throw InputError("inconsistent Euler characteristic");
  return {index, cusps, twice_genus / 2};
}

}  // namespace detail

struct CongruenceTriple {
  std::int64_t p = 0;
  SlFactor sl2_factor, sl7, slp;
  Psl27Pair pair7;
  S4Construction k;
  Subgroup h1_hat, h2_hat, k_hat;

  std::uint64_t order = 0;
  std::optional<std::uint64_t> closure_order;
  std::size_t subgroup_order = 0;
  std::size_t index = 0;

  std::vector<FusedClass> classes;
  std::uint64_t class_size_total = 0;
  std::vector<std::size_t> character_h1, character_h2;
  std::vector<std::size_t> meet_h1, meet_h2;
  bool sunada = false;

  NonIsometryCertificate nonisometry;
  TorsionCheck torsion;

  bool certified() const {
    return sunada && torsion.holds() && nonisometry.holds() && class_size_total == order;
  }
};

struct TripleOptions {
  GroupOptions group;
  /// Count |G| by closure as well as by formula.
  bool closure_count = true;
  /// Use H1' for both slots (degenerate control).
  bool same_subgroups = false;
};

/// Assembles G = P(id x SL(2,Z/7) x SL(2,Z/p)) with H~i = P(id x Hi' x K)
/// and certifies the Sunada condition on fused class representatives,
/// torsion freeness, and componentwise non-isometry.
inline CongruenceTriple assemble_congruence_triple(std::int64_t p, const TripleOptions& opts = {}) {
  if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
  if (p == 2 || p == 7) throw InputError("p must differ from 2 or 7");
  CongruenceTriple t;
  t.p = p;
  t.k = build_s4_mod_p(p, opts.group);
  t.nonisometry.k_vs_tau_k = verify_nonconjugate_tau(t.k);
  if (t.nonisometry.k_vs_tau_k.witness) {
    throw InputError("K is conjugate to tau(K); no congruence triple from this K");
  }
  t.pair7 = psl27_sunada_pair();
  if (opts.same_subgroups) t.pair7.h2 = t.pair7.h1;
  t.nonisometry.scanned_7 = t.pair7.group.order();
  t.nonisometry.witness_7 = subgroups_conjugate(t.pair7.group, t.pair7.h1, t.pair7.h2);

  t.sl2_factor = SlFactor::build(2, opts.group);
  t.sl7 = SlFactor::build(7, opts.group);
  t.slp = SlFactor::build(p, opts.group);
  t.h1_hat = sl_preimage(t.sl7.group, t.pair7.group, t.pair7.h1);
  t.h2_hat = sl_preimage(t.sl7.group, t.pair7.group, t.pair7.h2);
  t.k_hat = sl_preimage(t.slp.group, t.k.psl, t.k.K);

  t.order = product_group_order({1, t.sl7.group.order(), t.slp.group.order()}, {2, 7, p}, true);
  t.subgroup_order = t.h1_hat.order() * t.k_hat.order() / 2;
  t.index = t.order / t.subgroup_order;
  if (opts.closure_count) {
    const ModMatrix id2 = ModMatrix::identity(2, 2);
    const std::vector<ProductElement> gens{
        ProductElement({id2, unipotent_upper(7), unipotent_upper(p)}, true),
        ProductElement({id2, unipotent_lower(7), unipotent_lower(p)}, true)};
    t.closure_order = closure_order(gens, ProductPacking({2, 7, p}, true), opts.group.max_size);
  }

  // Classes of G as fused (SL7-class, SLp-class) pairs.
  const std::vector<const SlFactor*> fs{&t.sl7, &t.slp};
  t.classes = fused_classes(fs);
  for (const auto& c : t.classes) t.class_size_total += c.size;
  const auto lookup = fused_lookup(t.classes);

  // G/H~i = SL7/Hi^ x SLp/K^ since -I lies in both preimages.
  const CosetSpace c7_1 = coset_space(t.sl7.group, t.h1_hat);
  const CosetSpace c7_2 = coset_space(t.sl7.group, t.h2_hat);
  const CosetSpace cp = coset_space(t.slp.group, t.k_hat);
  if (c7_1.size() * cp.size() != t.index || c7_2.size() * cp.size() != t.index) {
    throw InputError("coset product does not match the index");
  }
  auto fixed_on = [&](const CosetSpace& c7, Index a, Index b) {
    // (a, b) fixes (x Hi^, y K^) iff it does so up to the common sign.
    const Index na = t.sl7.group.index_of(-t.sl7.group.element(a));
    const Index nb = t.slp.group.index_of(-t.slp.group.element(b));
    std::size_t fixed = 0;
    for (std::size_t u = 0; u < c7.size(); ++u) {
      const bool plus7 = c7.block_of[t.sl7.group.mul(a, c7.reps[u])] == u;
      const bool minus7 = c7.block_of[t.sl7.group.mul(na, c7.reps[u])] == u;
      for (std::size_t v = 0; v < cp.size(); ++v) {
        const bool plusp = cp.block_of[t.slp.group.mul(b, cp.reps[v])] == v;
        const bool minusp = cp.block_of[t.slp.group.mul(nb, cp.reps[v])] == v;
        fixed += (plus7 && plusp) || (minus7 && minusp);
      }
    }
    return fixed;
  };
  for (const auto& c : t.classes) {
    t.character_h1.push_back(fixed_on(c7_1, c.representative[0], c.representative[1]));
    t.character_h2.push_back(fixed_on(c7_2, c.representative[0], c.representative[1]));
  }

  // #([g] n H~i), each +- pair of the product counted once.
  auto meet = [&](const Subgroup& h7) {
    std::vector<std::size_t> counts(t.classes.size(), 0);
    for (Index a : h7.members())
      for (Index b : t.k_hat.members()) ++counts[fused_class_of(fs, t.classes, lookup, {a, b})];
    for (auto& n : counts) n /= 2;
    return counts;
  };
  t.meet_h1 = meet(t.h1_hat);
  t.meet_h2 = meet(t.h2_hat);
  t.sunada = t.character_h1 == t.character_h2 && t.meet_h1 == t.meet_h2;

  std::array<ModMatrix, 3> torsion = torsion_representatives(2);
  t.torsion.torsion_nontrivial_mod_2 = true;
  for (const auto& m : torsion) t.torsion.torsion_nontrivial_mod_2 &= !m.is_identity();
  // H~i = P(id x ...) by construction; every element has identity Z/2 part.
  t.torsion.subgroup_trivial_mod_2 = true;
  return t;
}

inline bool torsion_free_check(const CongruenceTriple& t) { return t.torsion.holds(); }

/// Brute-force torsion check inside an explicit PSL(2,Z/N): no conjugate of
/// S, ST or (ST)^2 lies in H.
inline bool torsion_free_bruteforce(const GroupTable<ProjMatrix>& ambient, const Subgroup& h) {
  const std::int64_t n = ambient.element(0).modulus();
  const auto classes = conjugacy_classes(ambient);
  std::vector<bool> torsion_class(classes.size(), false);
  for (const auto& m : torsion_representatives(n)) {
    const ProjMatrix pm(m);
    if (pm.is_identity()) continue;
    torsion_class[classes.class_of[ambient.index_of(pm)]] = true;
  }
  for (Index x : h.members())
    if (torsion_class[classes.class_of[x]]) return false;
  return true;
}

/// Index, cusp count (orbits of T on cosets) and genus of the surface of a
/// torsion-free subgroup H of PSL(2,Z/N). Refuses subgroups with torsion.
inline SurfaceInvariants congruence_surface_invariants(const GroupTable<ProjMatrix>& ambient,
                                                       const Subgroup& h) {
  if (!torsion_free_bruteforce(ambient, h)) {
    throw InputError("subgroup contains torsion; the quotient is an orbifold");
  }
  const std::int64_t n = ambient.element(0).modulus();
  const CosetSpace cs = coset_space(ambient, h);
  const auto act = coset_action(ambient, cs, ambient.index_of(ProjMatrix(unipotent_upper(n))));
  return detail::surface_from_index_and_cusps(cs.size(), cycle_type(act).size());
}

/// Index, cusps and genus of P(1 x H_2 x ... x H_r) inside
/// P(SL(2,Z/2) x SL(2,Z/k_2) x ...), computed on the product of the factor
/// coset spaces. The first factor must be SL(2,Z/2) with trivial subgroup:
/// torsion of PSL(2,Z) is nontrivial mod 2, so such subgroups are
/// torsion-free. The other subgroups must contain -I.
inline SurfaceInvariants product_surface_invariants(const std::vector<const GroupTable<ModMatrix>*>& groups,
                                                    const std::vector<const Subgroup*>& subgroups) {
  if (groups.empty() || groups.size() != subgroups.size()) throw InputError("factor lists differ in length");
  if (groups[0]->element(0).modulus() != 2 || subgroups[0]->order() != 1) {
    throw InputError("first factor must be SL(2,Z/2) with trivial subgroup (torsion removal)");
  }
  ProductCosets pc;
  std::vector<ModMatrix> t;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = *groups[i];
    const std::int64_t k = g.element(0).modulus();
    if (k != 2 && !subgroups[i]->contains(g.index_of(-ModMatrix::identity(k, 2)))) {
      throw InputError("factor subgroup must contain -I");
    }
    pc.groups.push_back(&g);
    pc.cosets.push_back(coset_space(g, *subgroups[i]));
    t.push_back(unipotent_upper(k));
  }
  return detail::surface_from_index_and_cusps(pc.points(), cycle_type(pc.perm(t)).size());
}

/// Same invariants for H~1 (which = 1) or H~2 of the triple, inside
/// PSL(2,Z/14p).
inline SurfaceInvariants congruence_surface_invariants(const CongruenceTriple& t, int which) {
  if (!torsion_free_check(t)) throw InputError("triple is not torsion-free");
  const Subgroup trivial2 = trivial_subgroup(t.sl2_factor.group);
  const Subgroup& h7 = which == 1 ? t.h1_hat : t.h2_hat;
  return product_surface_invariants({&t.sl2_factor.group, &t.sl7.group, &t.slp.group},
                                    {&trivial2, &h7, &t.k_hat});
}

inline nlohmann::json matrices_to_json(const GroupTable<ProjMatrix>& g, const std::vector<Index>& idx) {
  nlohmann::json arr = nlohmann::json::array();
  for (Index i : idx) arr.push_back(g.element(i).rep().rows());
  return arr;
}

}  // namespace sunada_lab
