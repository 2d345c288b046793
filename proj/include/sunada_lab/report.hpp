#pragma once

// Claim runners shared by the CLI and the acceptance suite. Each runner
// produces a Report whose witness is enough to replay the check.

#include <chrono>
#include <cstdint>
#include <functional>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sunada_lab/congruence.hpp"
#include "sunada_lab/orbifold.hpp"
#include "sunada_lab/psl168.hpp"
#include "sunada_lab/sunada.hpp"

namespace sunada_lab {

enum class Status { kPass, kFail };

struct Report {
  std::string claim_id;
  std::string description;
  Status status = Status::kFail;
  nlohmann::json witness;
  std::string text;
  std::int64_t runtime_ms = 0;

  bool pass() const { return status == Status::kPass; }
};

inline nlohmann::json to_json(const Report& r, bool with_timing = false) {
  nlohmann::json j{{"claim_id", r.claim_id},
                   {"description", r.description},
                   {"status", r.pass() ? "pass" : "fail"},
                   {"witness", r.witness}};
  if (with_timing) j["runtime_ms"] = r.runtime_ms;
  return j;
}

inline std::string to_text(const Report& r, bool with_timing = false) {
  std::ostringstream os;
  os << r.claim_id << ": " << (r.pass() ? "PASS" : "FAIL") << "\n" << r.description << "\n";
  if (!r.text.empty()) os << "\n" << r.text;
  if (with_timing) os << "runtime_ms: " << r.runtime_ms << "\n";
  return os.str();
}

namespace detail {

inline Report timed(const std::function<Report()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r = f();
  r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline nlohmann::json matrix_list(const GroupTable<ProjMatrix>& g, const std::vector<Index>& idx) {
  nlohmann::json arr = nlohmann::json::array();
  for (Index i : idx) arr.push_back(g.element(i).rep().rows());
  return arr;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace detail

// ---------------------------------------------------------------------------

struct SunadaVerifyOptions {
  /// Replace H2 by a Sylow 7-subgroup (negative control).
  bool corrupt = false;
};

inline Report run_sunada_verify(const SunadaVerifyOptions& opts = {}) {
  return detail::timed([&] {
    Report r;
    r.claim_id = "sunada-triple";
    r.description = "PSL(3,Z/2) with the two index-7 parabolic subgroups is a Sunada triple";
    FanoTriple t = build_fano_triple();
    Subgroup h2 = t.h2;
    if (opts.corrupt) {
      const auto reps = fano_class_representatives();
      h2 = Subgroup::generated(t.group, {t.group.index_of(ProjMatrix(reps[4].matrix))});
    }
    const SunadaReport sr = verify_sunada(t.group, t.classes, t.h1, h2);
    const auto chi1 = permutation_character(t.group, t.classes, t.h1);
    const auto chi2 = permutation_character(t.group, t.classes, h2);
    const SwapCheck swap = verify_swaps_subgroups(t);
    const bool not_conj = !subgroups_conjugate(t.group, t.h1, h2).has_value();

    nlohmann::json classes = nlohmann::json::array();
    std::ostringstream os;
    os << "class  order  size  |C n H1|  |C n H2|  fix(G/H1)  fix(G/H2)\n";
    for (std::size_t c = 0; c < t.classes.size(); ++c) {
      const Index rep = t.classes.classes[c].representative;
      const auto ord = t.group.element_order(rep);
      classes.push_back({{"representative", t.group.element(rep).rep().rows()},
                         {"order", ord},
                         {"size", sr.class_sizes[c]},
                         {"meet_h1", sr.counts_h1[c]},
                         {"meet_h2", sr.counts_h2[c]},
                         {"fix_h1", chi1[c]},
                         {"fix_h2", chi2[c]}});
      os << c << std::string(7 - std::to_string(c).size(), ' ') << ord << std::string(7 - std::to_string(ord).size(), ' ')
         << sr.class_sizes[c] << std::string(6 - std::to_string(sr.class_sizes[c]).size(), ' ') << sr.counts_h1[c]
         << std::string(10 - std::to_string(sr.counts_h1[c]).size(), ' ') << sr.counts_h2[c]
         << std::string(10 - std::to_string(sr.counts_h2[c]).size(), ' ') << chi1[c]
         << std::string(11 - std::to_string(chi1[c]).size(), ' ') << chi2[c] << "\n";
    }
    os << "violating classes: ";
    for (std::size_t i = 0; i < sr.violating.size(); ++i) os << (i ? ", " : "") << sr.violating[i];
    os << (sr.violating.empty() ? "none" : "") << "\n";
    os << "H1, H2 not conjugate: " << detail::yes_no(not_conj) << "\n";
    os << "transpose-inverse swaps H1 and H2: " << detail::yes_no(swap.holds()) << "\n";
    r.text = os.str();

    r.witness = {{"group_order", t.group.order()},
                 {"h1_order", t.h1.order()},
                 {"h2_order", h2.order()},
                 {"h2_corrupted", opts.corrupt},
                 {"classes", classes},
                 {"violating_classes", sr.violating},
                 {"characters_equal", chi1 == chi2},
                 {"not_conjugate", not_conj},
                 {"automorphism_swaps", swap.holds()}};
    r.status = sr.holds && chi1 == chi2 && not_conj && (opts.corrupt || swap.holds()) ? Status::kPass : Status::kFail;
    return r;
  });
}

inline Report run_cycle_table() {
  return detail::timed([] {
    Report r;
    r.claim_id = "cycle-structure";
    r.description = "cycle type of g on G/H1 and G/H2 depends only on the order of g";
    FanoTriple t = build_fano_triple();
    const CycleStructureTable tab = cycle_structure_table(t);
    const std::map<std::uint64_t, CycleType> expected{
        {1, {1, 1, 1, 1, 1, 1, 1}}, {2, {2, 2, 1, 1, 1}}, {3, {3, 3, 1}}, {4, {4, 2, 1}}, {7, {7}}};
    bool match = tab.well_defined();
    for (const auto* side : {&tab.on_h1, &tab.on_h2}) {
      match = match && side->size() == expected.size();
      for (const auto& [ord, types] : *side) {
        auto it = expected.find(ord);
        match = match && it != expected.end() && types.size() == 1 && *types.begin() == it->second;
      }
    }
    r.text = to_text(tab);
    r.witness = {{"table", to_json(tab)}, {"well_defined", tab.well_defined()}};
    r.status = match ? Status::kPass : Status::kFail;
    return r;
  });
}

inline Report run_theorem1(EndsConvention conv = EndsConvention::kPaper) {
  return detail::timed([&] {
    Report r;
    r.claim_id = "theorem1";
    r.description = "genus and ends of the Sunada covers of orbifold bases with monodromy onto PSL(2,Z/7)";
    const Theorem1Report rep = theorem1_report(conv);
    nlohmann::json facts = nlohmann::json::object();
    for (const auto& [k, v] : rep.matrix_facts) facts[k] = v;
    r.witness = {{"ends_convention", conv == EndsConvention::kPaper ? "paper" : "smooth"},
                 {"rows", to_json(rep)},
                 {"matrix_facts", facts}};
    r.text = to_text(rep);
    r.status = rep.pass() ? Status::kPass : Status::kFail;
    return r;
  });
}

// ---------------------------------------------------------------------------

struct TransplantOptions {
  /// "preset" or "random".
  std::string gens = "preset";
  std::uint64_t seed = 0;
  std::int64_t coeff_bound = 1;
  /// Generator multiset size for random mode.
  std::size_t random_size = 3;
};

struct TransplantCheck {
  std::string model;
  std::vector<Index> gens;
  TransplantationCertificate cert;
  bool intertwines = false;
  bool laplacian_isospectral = false;
  bool adjacency_isospectral = false;
  bool coefficients_01 = false;
  bool pass() const { return intertwines && laplacian_isospectral && adjacency_isospectral && cert.det != 0; }
};

template <class E>
TransplantCheck check_transplantation(const GroupTable<E>& g, const Subgroup& h1, const Subgroup& h2,
                                      const std::vector<Index>& gens, std::int64_t bound, const std::string& model) {
  TransplantCheck c;
  c.model = model;
  c.gens = gens;
  c.cert = find_transplantation(g, h1, h2, bound, model);
  const SchreierGraph x1 = schreier_graph(g, h1, gens);
  const SchreierGraph x2 = schreier_graph(g, h2, gens);
  c.intertwines = verify_intertwining(c.cert, x1, x2);
  c.laplacian_isospectral = charpoly_isospectral(x1, x2);
  c.adjacency_isospectral = sunada_lab::adjacency_isospectral(x1, x2);
  c.coefficients_01 = true;
  for (auto v : c.cert.c_cosets) c.coefficients_01 = c.coefficients_01 && (v == 0 || v == 1);
  return c;
}

/// Lexicographically first generating (2,3,7) triple of PSL(3,Z/2).
inline std::vector<Index> fano_237_generators(const FanoTriple& t) {
  const OrbifoldCertificate c = search_certificate(t.group, {0, {2, 3, 7}});
  std::vector<Index> gens;
  for (const auto& m : c.cones) gens.push_back(t.group.index_of(ProjMatrix(m)));
  return gens;
}

/// Seeded generator multiset; the modulo reduction keeps the draw identical
/// across standard libraries.
template <class E>
std::vector<Index> random_generators(const GroupTable<E>& g, std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::vector<Index> gens;
  for (std::size_t i = 0; i < n; ++i) gens.push_back(static_cast<Index>(rng() % g.order()));
  return gens;
}

inline nlohmann::json to_json(const TransplantCheck& c, const nlohmann::json& gens) {
  return {{"model", c.model},
          {"generators", gens},
          {"certificate", to_json(c.cert)},
          {"intertwines", c.intertwines},
          {"laplacian_charpoly_equal", c.laplacian_isospectral},
          {"adjacency_charpoly_equal", c.adjacency_isospectral},
          {"coefficients_in_0_1", c.coefficients_01}};
}

inline Report run_transplant(const TransplantOptions& opts = {}) {
  if (opts.gens != "preset" && opts.gens != "random") throw InputError("--gens must be preset or random");
  return detail::timed([&] {
    Report r;
    r.claim_id = "transplantation";
    r.description = "an invertible transplantation intertwines the Laplacians of the paired Schreier graphs";
    FanoTriple t = build_fano_triple();
    std::vector<TransplantCheck> checks;
    nlohmann::json models = nlohmann::json::array();
    if (opts.gens == "preset") {
      const auto gens = fano_237_generators(t);
      checks.push_back(check_transplantation(t.group, t.h1, t.h2, gens, opts.coeff_bound, "PSL(3,Z/2)"));
      models.push_back(to_json(checks.back(), detail::matrix_list(t.group, gens)));

      const Psl27Pair pair = psl27_sunada_pair();
      std::vector<Index> abc;
      for (const auto& m : {orbifold_matrices::a(), orbifold_matrices::b(), orbifold_matrices::c()})
        abc.push_back(pair.group.index_of(ProjMatrix(m)));
      checks.push_back(check_transplantation(pair.group, pair.h1, pair.h2, abc, opts.coeff_bound, "PSL(2,Z/7)"));
      models.push_back(to_json(checks.back(), detail::matrix_list(pair.group, abc)));
    } else {
      const auto gens = random_generators(t.group, opts.seed, opts.random_size);
      checks.push_back(check_transplantation(t.group, t.h1, t.h2, gens, opts.coeff_bound, "PSL(3,Z/2)"));
      models.push_back(to_json(checks.back(), detail::matrix_list(t.group, gens)));
    }
    std::ostringstream os;
    bool ok = true;
    for (const auto& c : checks) {
      ok = ok && c.pass();
      os << c.model << ": generators " << c.gens.size() << ", c on right cosets (";
      for (std::size_t i = 0; i < c.cert.c_cosets.size(); ++i) os << (i ? "," : "") << c.cert.c_cosets[i];
      os << "), det T = " << big_to_string(c.cert.det) << "\n"
         << "  T A1 = A2 T, T L1 = L2 T: " << detail::yes_no(c.intertwines) << "\n"
         << "  Laplacian char polys equal: " << detail::yes_no(c.laplacian_isospectral) << "\n"
         << "  adjacency char polys equal: " << detail::yes_no(c.adjacency_isospectral) << "\n";
    }
    r.text = os.str();
    r.witness = {{"gens", opts.gens}, {"seed", opts.seed}, {"coeff_bound", opts.coeff_bound}, {"models", models}};
    r.status = ok ? Status::kPass : Status::kFail;
    return r;
  });
}

// ---------------------------------------------------------------------------

struct Theorem2Options {
  std::int64_t p = 23;
  GroupOptions group;
};

/// Refuses bad p before any group is built.
inline void check_theorem2_prime(std::int64_t p) {
  if (p == 2 || p == 7) throw InputError("p must differ from 2 or 7");
  if (p < 2 || !is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
  if (p % 8 != 7) {
    throw InputError("PSL(2,Z/" + std::to_string(p) +
                     ") has no S(4) subgroup with tau outer: S(4) needs p = +-1 (mod 8) and tau is inner "
                     "for p = 1 (mod 4), so p = 7 (mod 8) is required");
  }
}

inline Report run_theorem2(const Theorem2Options& opts = {}) {
  check_theorem2_prime(opts.p);
  return detail::timed([&] {
    Report r;
    r.claim_id = "theorem2";
    r.description = "congruence Sunada triple inside PSL(2,Z/14p): Sunada, torsion-free, non-isometric components";
    TripleOptions topts;
    topts.group = opts.group;
    const std::uint64_t formula = product_group_order({1, sl2_prime_order(7), sl2_prime_order(opts.p)},
                                                      {2, 7, opts.p}, true);
    topts.closure_count = formula <= opts.group.max_size;
    const CongruenceTriple t = assemble_congruence_triple(opts.p, topts);
    const auto& s = t.k;
    const bool relations = all_hold(s.relations);
    const FixedPointCheck fix = check_fixed_points(s);
    const SurfaceInvariants s1 = congruence_surface_invariants(t, 1);
    const SurfaceInvariants s2 = congruence_surface_invariants(t, 2);
    const bool closure_ok = !t.closure_order || *t.closure_order == t.order;

    const std::vector<ModMatrix> kgens{s.A, s.D, s.E};
    nlohmann::json kj = nlohmann::json::array(), tkj = nlohmann::json::array();
    for (const auto& m : kgens) {
      kj.push_back(ProjMatrix(m).rep().rows());
      tkj.push_back(tau(ProjMatrix(m)).rep().rows());
    }
    nlohmann::json rel = nlohmann::json::object();
    for (const auto& [k, v] : s.relations) rel[k] = v;
    r.witness = {
        {"p", opts.p},
        {"alpha", s.alpha},
        {"beta", s.beta},
        {"gamma", s.gamma},
        {"K_generators", kj},
        {"tau_K_generators", tkj},
        {"K_order", s.K.order()},
        {"K_s4_fingerprint", s.fingerprint},
        {"relations", rel},
        {"fixed_points", fix.holds()},
        {"nonconjugacy", to_json(t.nonisometry.k_vs_tau_k)},
        {"triple",
         {{"order", t.order},
          {"closure_order", t.closure_order ? nlohmann::json(*t.closure_order) : nlohmann::json(nullptr)},
          {"subgroup_order", t.subgroup_order},
          {"index", t.index},
          {"classes", t.classes.size()},
          {"class_sizes_sum", t.class_size_total},
          {"sunada", t.sunada},
          {"torsion_free", torsion_free_check(t)}}},
        {"nonisometry",
         {{"psl2_7_conjugation_scanned", t.nonisometry.scanned_7},
          {"psl2_7_witness", t.nonisometry.witness_7 ? nlohmann::json(*t.nonisometry.witness_7) : nlohmann::json(nullptr)},
          {"psl2_p_tau_scanned", t.nonisometry.k_vs_tau_k.scanned},
          {"psl2_p_tau_witness", nullptr}}},
        {"surfaces",
         {{"H1", {{"index", s1.index}, {"cusps", s1.cusps}, {"genus", s1.genus}}},
          {"H2", {{"index", s2.index}, {"cusps", s2.cusps}, {"genus", s2.genus}}}}}};
    std::ostringstream os;
    os << "p = " << opts.p << ", alpha = " << s.alpha << ", beta = " << s.beta << ", gamma = " << s.gamma << "\n"
       << "K = <A, D, E>: order " << s.K.order() << ", S(4) fingerprint " << detail::yes_no(s.fingerprint)
       << ", relations " << detail::yes_no(relations) << ", fixed points " << detail::yes_no(fix.holds()) << "\n"
       << "K vs tau(K): scanned " << t.nonisometry.k_vs_tau_k.scanned << " elements, conjugate: "
       << detail::yes_no(t.nonisometry.k_vs_tau_k.witness.has_value()) << ", two-sign replay "
       << detail::yes_no(all_hold(t.nonisometry.k_vs_tau_k.replay)) << "\n"
       << "H1' vs H2' in PSL(2,Z/7): scanned " << t.nonisometry.scanned_7
       << " elements, conjugate: " << detail::yes_no(t.nonisometry.witness_7.has_value()) << "\n"
       << "|G| = " << t.order;
    if (t.closure_order) os << " (closure " << *t.closure_order << ")";
    os << ", |H~i| = " << t.subgroup_order << ", index " << t.index << ", " << t.classes.size() << " classes\n"
       << "Sunada on class representatives: " << detail::yes_no(t.sunada) << "\n"
       << "torsion-free: " << detail::yes_no(torsion_free_check(t)) << "\n"
       << "surfaces in PSL(2,Z/" << 14 * opts.p << "): index " << s1.index << ", cusps " << s1.cusps << " / "
       << s2.cusps << ", genus " << s1.genus << " / " << s2.genus << "\n";
    r.text = os.str();
    const bool ok = relations && s.fingerprint && fix.holds() && t.certified() && closure_ok &&
                    s1.index == s2.index && s1.cusps == s2.cusps && s1.genus == s2.genus;
    r.status = ok ? Status::kPass : Status::kFail;
    return r;
  });
}

}  // namespace sunada_lab
