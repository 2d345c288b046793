#pragma once

// Products P(SL(2,Z/k1) x ... x SL(2,Z/kr)) of 2x2 matrix groups with
// pairwise coprime moduli, optionally modulo the simultaneous sign.

#include <array>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "sunada_lab/group.hpp"
#include "sunada_lab/modp.hpp"

namespace sunada_lab {

class ProductElement {
 public:
  static constexpr std::size_t kMaxFactors = 4;

  ProductElement() = default;

  ProductElement(const std::vector<ModMatrix>& comps, bool projective) : projective_(projective) {
    if (comps.empty() || comps.size() > kMaxFactors) throw InputError("bad factor count");
    count_ = static_cast<std::uint8_t>(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (comps[i].dim() != 2) throw InputError("product factors must be 2x2");
      comps_[i] = comps[i];
    }
    normalize();
  }

  std::size_t factors() const { return count_; }
  const ModMatrix& component(std::size_t i) const { return comps_[i]; }
  bool projective() const { return projective_; }

  ProductElement operator*(const ProductElement& o) const {
    ProductElement r = *this;
    for (std::size_t i = 0; i < count_; ++i) r.comps_[i] = comps_[i] * o.comps_[i];
    r.normalize();
    return r;
  }

  ProductElement inverse() const {
    ProductElement r = *this;
    for (std::size_t i = 0; i < count_; ++i) r.comps_[i] = comps_[i].inverse();
    r.normalize();
    return r;
  }

  ProductElement negated() const {
    ProductElement r = *this;
    for (std::size_t i = 0; i < count_; ++i) r.comps_[i] = -comps_[i];
    r.normalize();
    return r;
  }

  bool operator==(const ProductElement& o) const {
    if (count_ != o.count_ || projective_ != o.projective_) return false;
    for (std::size_t i = 0; i < count_; ++i)
      if (comps_[i] != o.comps_[i]) return false;
    return true;
  }

  std::size_t hash() const {
    std::size_t h = count_;
    for (std::size_t i = 0; i < count_; ++i) h = h * 0x9E3779B97F4A7C15ULL ^ comps_[i].hash();
    return h;
  }

  std::string to_string() const {
    std::string s = projective_ ? "P(" : "(";
    for (std::size_t i = 0; i < count_; ++i) s += (i ? ", " : "") + comps_[i].to_string();
    return s + ")";
  }

 private:
  // Picks the lexicographically smaller of (M1..Mr) and (-M1..-Mr).
  void normalize() {
    if (!projective_) return;
    for (std::size_t i = 0; i < count_; ++i) {
      const ModMatrix neg = -comps_[i];
      if (neg == comps_[i]) continue;
      if (neg < comps_[i]) {
        for (std::size_t j = i; j < count_; ++j) comps_[j] = -comps_[j];
      }
      return;
    }
  }

  std::array<ModMatrix, kMaxFactors> comps_{};
  std::uint8_t count_ = 0;
  bool projective_ = false;
};

namespace detail {

inline void check_coprime(const std::vector<std::int64_t>& moduli) {
  for (std::size_t i = 0; i < moduli.size(); ++i)
    for (std::size_t j = i + 1; j < moduli.size(); ++j)
      if (gcd(moduli[i], moduli[j]) != 1) {
        throw InputError("product_group: moduli " + std::to_string(moduli[i]) + " and " +
                         std::to_string(moduli[j]) + " are not coprime");
      }
}

}  // namespace detail

/// Exact order of the product: |G1|...|Gr|, halved when the sign is
/// identified and -I differs from I in some factor.
inline std::uint64_t product_group_order(const std::vector<std::uint64_t>& factor_orders,
                                         const std::vector<std::int64_t>& moduli,
                                         bool identify_center) {
  std::uint64_t n = 1;
  for (auto o : factor_orders) n *= o;
  bool sign_nontrivial = false;
  for (auto m : moduli) sign_nontrivial = sign_nontrivial || m > 2;
  return identify_center && sign_nontrivial ? n / 2 : n;
}

/// Enumerates the Cartesian product of the factor groups (each a group of
/// 2x2 matrices over Z/ki, normally SL(2,Z/ki) or a subgroup containing -I)
/// and identifies (M1..Mr) with (-M1..-Mr) when identify_center is set.
inline GroupTable<ProductElement> product_group(
    const std::vector<const GroupTable<ModMatrix>*>& factors, bool identify_center,
    const GroupOptions& opts = {}) {
  if (factors.empty()) throw InputError("product_group: no factors");
  std::vector<std::int64_t> moduli;
  for (const auto* f : factors) moduli.push_back(f->element(0).modulus());
  detail::check_coprime(moduli);

  std::vector<ModMatrix> ids;
  for (const auto* f : factors) ids.push_back(f->element(f->identity()));

  std::vector<ProductElement> gens;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    for (Index s : factors[i]->generators()) {
      auto comps = ids;
      comps[i] = factors[i]->element(s);
      gens.emplace_back(comps, identify_center);
    }
  }
  if (gens.empty()) gens.emplace_back(ids, identify_center);

  std::vector<ProductElement> elems;
  std::vector<std::size_t> odo(factors.size(), 0);
  std::vector<ModMatrix> comps(factors.size());
  while (true) {
    for (std::size_t i = 0; i < factors.size(); ++i)
      comps[i] = factors[i]->element(static_cast<Index>(odo[i]));
    // Keep only canonical representatives so each class appears once.
    ProductElement x(comps, identify_center);
    bool canonical = true;
    for (std::size_t i = 0; i < comps.size(); ++i) canonical = canonical && x.component(i) == comps[i];
    if (canonical) {
      if (elems.size() >= opts.max_size) throw SizeLimitError("product exceeds size cap");
      elems.push_back(x);
    }
    std::size_t k = 0;
    while (k < factors.size() && ++odo[k] == factors[k]->order()) odo[k++] = 0;
    if (k == factors.size()) break;
  }
  return GroupTable<ProductElement>::from_elements(std::move(elems), gens, opts);
}

/// Injective 64-bit packing of product elements with fixed factor moduli,
/// used to count closures too large to materialize as GroupTables.
class ProductPacking {
 public:
  explicit ProductPacking(std::vector<std::int64_t> moduli, bool projective)
      : moduli_(std::move(moduli)), projective_(projective) {
    unsigned __int128 span = 1;
    for (auto m : moduli_) {
      for (int k = 0; k < 4; ++k) span *= static_cast<unsigned __int128>(m);
    }
    if (span >> 64U) throw InputError("product too large for 64-bit packing");
  }

  std::uint64_t pack(const ProductElement& x) const {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      const ModMatrix& m = x.component(i);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) key = key * static_cast<std::uint64_t>(moduli_[i]) + m(r, c);
    }
    return key;
  }

  ProductElement unpack(std::uint64_t key) const {
    std::vector<ModMatrix> comps(moduli_.size());
    for (std::size_t i = moduli_.size(); i-- > 0;) {
      std::vector<std::int64_t> e(4);
      for (int k = 3; k >= 0; --k) {
        e[k] = static_cast<std::int64_t>(key % static_cast<std::uint64_t>(moduli_[i]));
        key /= static_cast<std::uint64_t>(moduli_[i]);
      }
      comps[i] = ModMatrix::from_entries(moduli_[i], 2, e);
    }
    return ProductElement(comps, projective_);
  }

 private:
  std::vector<std::int64_t> moduli_;
  bool projective_;
};

/// Order of <gens> by breadth-first closure over packed keys only.
inline std::size_t closure_order(const std::vector<ProductElement>& gens,
                                 const ProductPacking& packing, std::size_t max_size) {
  if (gens.empty()) throw InputError("closure_order: no generators");
  const ProductElement id = gens.front() * gens.front().inverse();
  std::vector<std::uint64_t> queue{packing.pack(id)};
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(max_size / 2);
  seen.insert(queue.front());
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const ProductElement x = packing.unpack(queue[head]);
    for (const auto& s : gens) {
      const std::uint64_t k = packing.pack(x * s);
      if (seen.insert(k).second) {
        if (queue.size() >= max_size) throw SizeLimitError("closure exceeds size cap");
        queue.push_back(k);
      }
    }
  }
  return queue.size();
}

}  // namespace sunada_lab
