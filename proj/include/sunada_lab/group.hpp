#pragma once

// Explicit finite groups: closure from generators, subgroups, coset spaces,
// coset actions, conjugacy classes and brute-force subgroup conjugacy.
//
// Conventions: cosets are left cosets gH and G acts on them by left
// translation x.H -> g.x.H. Right cosets are available where a function has
// to be constant on H\G (transplantation coefficients).

#include <algorithm>
#include <atomic>
#include <concepts>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sunada_lab/errors.hpp"

namespace sunada_lab {

using Index = std::uint32_t;

template <class E>
concept GroupElement = std::equality_comparable<E> && requires(const E& a, const E& b) {
  { a * b } -> std::convertible_to<E>;
  { a.inverse() } -> std::convertible_to<E>;
  { a.hash() } -> std::convertible_to<std::size_t>;
};

struct GroupOptions {
  std::size_t max_size = 5'000'000;
  /// Groups up to this order get a dense Cayley table.
  std::size_t dense_limit = 1100;
};

namespace detail {

/// Open-addressing table of element indices keyed by the elements' hash.
class IndexHash {
 public:
  static constexpr Index kEmpty = std::numeric_limits<Index>::max();

  void reserve(std::size_t n) {
    std::size_t cap = 16;
    while (cap < 2 * n) cap <<= 1U;
    if (cap > slots_.size()) rehash(cap);
  }

  template <class E>
  std::optional<Index> find(const std::vector<E>& elems, const E& x) const {
    if (slots_.empty()) return std::nullopt;
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t s = x.hash() & mask;; s = (s + 1) & mask) {
      const Index i = slots_[s];
      if (i == kEmpty) return std::nullopt;
      if (elems[i] == x) return i;
    }
  }

  template <class E>
  void insert(const std::vector<E>& elems, Index i) {
    if (2 * (count_ + 1) > slots_.size()) grow(elems);
    place(elems[i].hash(), i);
    ++count_;
  }

 private:
  template <class E>
  void grow(const std::vector<E>& elems) {
    std::vector<Index> old = std::move(slots_);
    slots_.assign(std::max<std::size_t>(16, old.size() * 2), kEmpty);
    for (Index i : old)
      if (i != kEmpty) place(elems[i].hash(), i);
  }

  void rehash(std::size_t cap) {
    // Only used before any insertion.
    slots_.assign(cap, kEmpty);
  }

  void place(std::size_t h, Index i) {
    const std::size_t mask = slots_.size() - 1;
    std::size_t s = h & mask;
    while (slots_[s] != kEmpty) s = (s + 1) & mask;
    slots_[s] = i;
  }

  std::vector<Index> slots_;
  std::size_t count_ = 0;
};

/// Smallest i in [0, n) with pred(i), scanning in parallel chunks. The
/// smallest witness wins regardless of scheduling.
template <class Pred>
std::optional<Index> parallel_first(std::size_t n, Pred pred, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, n / 256)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      if (pred(static_cast<Index>(i))) return static_cast<Index>(i);
    return std::nullopt;
  }
  std::atomic<std::size_t> best{n};
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
      for (std::size_t i = lo; i < hi && i < best.load(std::memory_order_relaxed); ++i) {
        if (pred(static_cast<Index>(i))) {
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (best.load() == n) return std::nullopt;
  return static_cast<Index>(best.load());
}

}  // namespace detail

/// Fully enumerated finite group. Element 0 is the identity; the remaining
/// order is breadth-first from the identity under right multiplication by
/// the generators, so it is deterministic given the generator list.
template <GroupElement E>
class GroupTable {
 public:
  using element_type = E;

  static GroupTable generate(const std::vector<E>& gens, const GroupOptions& opts = {}) {
    if (gens.empty()) throw InputError("generate_group: empty generator list");
    GroupTable g;
    g.opts_ = opts;
    g.push(gens.front() * gens.front().inverse());
    for (std::size_t head = 0; head < g.elems_.size(); ++head) {
      for (const E& s : gens) {
        E y = g.elems_[head] * s;
        if (!g.index_.find(g.elems_, y)) {
          if (g.elems_.size() >= opts.max_size) {
            throw SizeLimitError("group closure exceeds " + std::to_string(opts.max_size) +
                                 " elements");
          }
          g.push(std::move(y));
        }
      }
    }
    for (const E& s : gens) g.gens_.push_back(*g.index_.find(g.elems_, s));
    g.finish();
    return g;
  }

  /// Wraps an explicit element list (must be closed; duplicates rejected).
  /// The identity is moved to index 0, the rest keep their relative order.
  static GroupTable from_elements(std::vector<E> elems, const std::vector<E>& gens,
                                  const GroupOptions& opts = {}) {
    if (elems.empty()) throw InputError("from_elements: empty element list");
    if (elems.size() > opts.max_size) throw SizeLimitError("element list exceeds size cap");
    GroupTable g;
    g.opts_ = opts;
    const E id = elems.front() * elems.front().inverse();
    auto it = std::find(elems.begin(), elems.end(), id);
    if (it == elems.end()) throw InputError("from_elements: identity missing");
    std::rotate(elems.begin(), it, it + 1);
    g.index_.reserve(elems.size());
    for (auto& x : elems) {
      if (g.index_.find(g.elems_, x)) throw InputError("from_elements: duplicate element");
      g.push(std::move(x));
    }
    for (const E& s : gens) g.gens_.push_back(g.index_of(s));
    g.finish();
    return g;
  }

  std::size_t order() const { return elems_.size(); }
  Index identity() const { return 0; }
  const E& element(Index i) const { return elems_[i]; }
  const std::vector<E>& elements() const { return elems_; }
  const std::vector<Index>& generators() const { return gens_; }
  const GroupOptions& options() const { return opts_; }

  std::optional<Index> find(const E& x) const { return index_.find(elems_, x); }

  Index index_of(const E& x) const {
    auto i = find(x);
    if (!i) throw InputError("element is not in the group");
    return *i;
  }

  Index mul(Index a, Index b) const {
    if (!dense_.empty()) return dense_[static_cast<std::size_t>(a) * elems_.size() + b];
    return *index_.find(elems_, elems_[a] * elems_[b]);
  }

  Index inv(Index a) const { return inv_[a]; }

  /// g x g^{-1}
  Index conj(Index g, Index x) const { return mul(mul(g, x), inv_[g]); }

  Index pow(Index a, std::uint64_t e) const {
    Index r = identity();
    for (std::uint64_t k = 0; k < e; ++k) r = mul(r, a);
    return r;
  }

  std::uint64_t element_order(Index a) const {
    std::uint64_t k = 1;
    for (Index x = a; x != identity(); x = mul(x, a)) ++k;
    return k;
  }

  void check_index(Index a) const {
    if (a >= elems_.size()) {
      throw InputError("element index " + std::to_string(a) + " out of range");
    }
  }

 private:
  void push(E x) {
    elems_.push_back(std::move(x));
    index_.insert(elems_, static_cast<Index>(elems_.size() - 1));
  }

  void finish() {
    const std::size_t n = elems_.size();
    inv_.resize(n);
    for (std::size_t i = 0; i < n; ++i) inv_[i] = index_of(elems_[i].inverse());
    if (n <= opts_.dense_limit) {
      dense_.resize(n * n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) dense_[a * n + b] = index_of(elems_[a] * elems_[b]);
    }
  }

  std::vector<E> elems_;
  detail::IndexHash index_;
  std::vector<Index> inv_;
  std::vector<Index> gens_;
  std::vector<Index> dense_;
  GroupOptions opts_;
};

template <GroupElement E>
GroupTable<E> generate_group(const std::vector<E>& gens, const GroupOptions& opts = {}) {
  return GroupTable<E>::generate(gens, opts);
}

/// Subgroup of an explicit group, stored as a sorted index set plus a
/// membership mask over the parent.
class Subgroup {
 public:
  Subgroup() = default;

  template <class E>
  static Subgroup generated(const GroupTable<E>& g, const std::vector<Index>& gens) {
    Subgroup h;
    h.parent_order_ = g.order();
    h.mask_.assign(g.order(), false);
    std::vector<Index> order{g.identity()};
    h.mask_[g.identity()] = true;
    for (std::size_t head = 0; head < order.size(); ++head) {
      for (Index s : gens) {
        g.check_index(s);
        const Index y = g.mul(order[head], s);
        if (!h.mask_[y]) {
          h.mask_[y] = true;
          order.push_back(y);
        }
      }
    }
    h.members_ = std::move(order);
    std::sort(h.members_.begin(), h.members_.end());
    h.gens_ = gens;
    return h;
  }

  /// Validates that the set is a subgroup; picks a small generating set.
  template <class E>
  static Subgroup from_members(const GroupTable<E>& g, std::vector<Index> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    std::vector<bool> in(g.order(), false);
    for (Index m : members) {
      g.check_index(m);
      in[m] = true;
    }
    if (members.empty() || !in[g.identity()]) throw InputError("subset lacks the identity");
    std::vector<Index> gens;
    Subgroup cur = generated(g, gens);
    for (Index m : members) {
      if (cur.contains(m)) continue;
      gens.push_back(m);
      cur = generated(g, gens);
      for (Index x : cur.members_)
        if (!in[x]) throw InputError("subset is not closed under multiplication");
    }
    if (cur.order() != members.size()) throw InputError("subset is not a subgroup");
    return cur;
  }

  /// Subgroup consisting of the elements satisfying pred.
  template <class E, class Pred>
  static Subgroup filtered(const GroupTable<E>& g, Pred pred) {
    std::vector<Index> members;
    for (Index i = 0; i < g.order(); ++i)
      if (pred(g.element(i))) members.push_back(i);
    return from_members(g, std::move(members));
  }

  std::size_t order() const { return members_.size(); }
  std::size_t parent_order() const { return parent_order_; }
  const std::vector<Index>& members() const { return members_; }
  const std::vector<Index>& generators() const { return gens_; }
  bool contains(Index i) const { return i < mask_.size() && mask_[i]; }

  bool operator==(const Subgroup& o) const {
    return parent_order_ == o.parent_order_ && members_ == o.members_;
  }

 private:
  std::size_t parent_order_ = 0;
  std::vector<Index> members_;
  std::vector<Index> gens_;
  std::vector<bool> mask_;
};

/// z H z^{-1}
template <class E>
Subgroup conjugate_subgroup(const GroupTable<E>& g, const Subgroup& h, Index z) {
  std::vector<Index> gens;
  for (Index s : h.generators()) gens.push_back(g.conj(z, s));
  return Subgroup::generated(g, gens);
}

/// Image of H under an element map that is an automorphism of G.
template <class E, class F>
Subgroup map_subgroup(const GroupTable<E>& g, const Subgroup& h, F&& f) {
  std::vector<Index> gens;
  for (Index s : h.generators()) gens.push_back(g.index_of(f(g.element(s))));
  return Subgroup::generated(g, gens);
}

enum class CosetSide { kLeft, kRight };

/// Partition of G into the cosets of H. Blocks are labelled in increasing
/// order of their smallest element, which is also the block representative.
struct CosetSpace {
  CosetSide side = CosetSide::kLeft;
  std::vector<std::vector<Index>> blocks;
  std::vector<Index> reps;
  std::vector<Index> block_of;

  std::size_t size() const { return blocks.size(); }
};

template <class E>
CosetSpace coset_space(const GroupTable<E>& g, const Subgroup& h,
                       CosetSide side = CosetSide::kLeft) {
  constexpr Index kUnset = std::numeric_limits<Index>::max();
  CosetSpace cs;
  cs.side = side;
  cs.block_of.assign(g.order(), kUnset);
  for (Index x = 0; x < g.order(); ++x) {
    if (cs.block_of[x] != kUnset) continue;
    const auto label = static_cast<Index>(cs.blocks.size());
    std::vector<Index> block;
    block.reserve(h.order());
    for (Index m : h.members()) {
      const Index y = side == CosetSide::kLeft ? g.mul(x, m) : g.mul(m, x);
      cs.block_of[y] = label;
      block.push_back(y);
    }
    std::sort(block.begin(), block.end());
    cs.blocks.push_back(std::move(block));
    cs.reps.push_back(x);
  }
  return cs;
}

using Permutation = std::vector<std::uint32_t>;

struct CosetAction {
  Index element = 0;
  Permutation perm;
};

/// Left translation of g on the left cosets.
template <class E>
CosetAction coset_action(const GroupTable<E>& g, const CosetSpace& cs, Index elem) {
  g.check_index(elem);
  if (cs.side != CosetSide::kLeft) throw InputError("coset_action expects left cosets");
  CosetAction a{elem, Permutation(cs.size())};
  for (std::size_t b = 0; b < cs.size(); ++b) a.perm[b] = cs.block_of[g.mul(elem, cs.reps[b])];
  return a;
}

template <class E>
CosetAction coset_action(const GroupTable<E>& g, const Subgroup& h, Index elem) {
  return coset_action(g, coset_space(g, h), elem);
}

/// p o q (apply q first).
inline Permutation compose(const Permutation& p, const Permutation& q) {
  Permutation r(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
  return r;
}

inline bool is_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

/// Cycle lengths, longest first.
inline std::vector<std::size_t> cycle_type(const Permutation& p) {
  std::vector<std::size_t> lengths;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.rbegin(), lengths.rend());
  return lengths;
}

inline std::vector<std::size_t> cycle_type(const CosetAction& a) { return cycle_type(a.perm); }

inline std::size_t fixed_points(const Permutation& p) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.size(); ++i) n += p[i] == i;
  return n;
}

struct ConjClass {
  Index representative = 0;
  std::vector<Index> members;
};

struct ClassPartition {
  std::vector<ConjClass> classes;
  std::vector<std::uint32_t> class_of;

  std::size_t size() const { return classes.size(); }
};

/// Conjugacy classes by orbit expansion under conjugation by the group's
/// generators. Classes are ordered by their smallest member, which is the
/// representative.
template <class E>
ClassPartition conjugacy_classes(const GroupTable<E>& g) {
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  ClassPartition cp;
  cp.class_of.assign(g.order(), kUnset);
  std::vector<Index> gens = g.generators();
  if (gens.empty()) gens.push_back(g.identity());
  for (Index x = 0; x < g.order(); ++x) {
    if (cp.class_of[x] != kUnset) continue;
    const auto label = static_cast<std::uint32_t>(cp.classes.size());
    ConjClass cls{x, {x}};
    cp.class_of[x] = label;
    for (std::size_t head = 0; head < cls.members.size(); ++head) {
      for (Index s : gens) {
        const Index y = g.conj(s, cls.members[head]);
        if (cp.class_of[y] == kUnset) {
          cp.class_of[y] = label;
          cls.members.push_back(y);
        }
      }
    }
    std::sort(cls.members.begin(), cls.members.end());
    cp.classes.push_back(std::move(cls));
  }
  return cp;
}

/// Some z with z K1 z^{-1} = K2, or nullopt after scanning all of G. The
/// smallest such index is returned.
template <class E>
std::optional<Index> subgroups_conjugate(const GroupTable<E>& g, const Subgroup& k1,
                                         const Subgroup& k2, unsigned threads = 0) {
  if (k1.order() != k2.order()) return std::nullopt;
  std::vector<Index> gens = k1.generators();
  if (gens.empty()) gens.push_back(g.identity());
  // Equal orders: generators landing in K2 forces the whole conjugate to be K2.
  return detail::parallel_first(
      g.order(),
      [&](Index z) {
        for (Index s : gens)
          if (!k2.contains(g.conj(z, s))) return false;
        return true;
      },
      threads);
}

template <class E>
bool is_conjugator(const GroupTable<E>& g, const Subgroup& k1, const Subgroup& k2, Index z) {
  if (k1.order() != k2.order()) return false;
  for (Index m : k1.members())
    if (!k2.contains(g.conj(z, m))) return false;
  return true;
}

using OrderStats = std::map<std::uint64_t, std::size_t>;

template <class E>
OrderStats order_statistics(const GroupTable<E>& g, const Subgroup& h) {
  OrderStats st;
  for (Index m : h.members()) ++st[g.element_order(m)];
  return st;
}

template <class E>
OrderStats order_statistics(const GroupTable<E>& g) {
  OrderStats st;
  for (Index m = 0; m < g.order(); ++m) ++st[g.element_order(m)];
  return st;
}

/// Elements of H commuting with every element of H.
template <class E>
std::vector<Index> center(const GroupTable<E>& g, const Subgroup& h) {
  std::vector<Index> z;
  std::vector<Index> gens = h.generators();
  for (Index m : h.members()) {
    bool central = true;
    for (Index s : gens) central = central && g.mul(m, s) == g.mul(s, m);
    if (central) z.push_back(m);
  }
  return z;
}

template <class E>
Subgroup whole_group(const GroupTable<E>& g) {
  std::vector<Index> gens = g.generators();
  if (gens.empty()) gens.push_back(g.identity());
  return Subgroup::generated(g, gens);
}

template <class E>
Subgroup trivial_subgroup(const GroupTable<E>& g) {
  return Subgroup::generated(g, {});
}

/// Element-order statistics of S(4).
inline const OrderStats& s4_order_statistics() {
  static const OrderStats st{{1, 1}, {2, 9}, {3, 8}, {4, 6}};
  return st;
}

/// Order 24, trivial center and the order statistics of S(4). Among the
/// fifteen groups of order 24 only S(4) passes (checked in the test suite).
template <class E>
bool s4_fingerprint(const GroupTable<E>& g, const Subgroup& h) {
  return h.order() == 24 && center(g, h).size() == 1 &&
         order_statistics(g, h) == s4_order_statistics();
}

inline std::string order_stats_to_string(const OrderStats& st) {
  std::string s = "{";
  for (const auto& [ord, n] : st) {
    if (s.size() > 1) s += ", ";
    s += std::to_string(ord) + ":" + std::to_string(n);
  }
  return s + "}";
}

}  // namespace sunada_lab
