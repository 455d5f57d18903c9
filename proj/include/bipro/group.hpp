#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bipro/bitset.hpp"
#include "bipro/config.hpp"
#include "bipro/error.hpp"
#include "bipro/perm.hpp"

namespace bipro {

/// A finite permutation group stored as an explicit element table.
///
/// Element 0 is the identity. Groups built by closure() list elements by
/// word length over the generators, ties broken lexicographically by image
/// vector, so every index-based report is reproducible. Immutable after
/// construction.
class Group {
 public:
  static constexpr std::size_t kDenseTableLimit = 2048;

  static Group closure(std::size_t degree, const std::vector<Permutation>& generators,
                       std::size_t max_order = kDefaultMaxOrder) {
    for (const auto& g : generators)
      if (g.degree() != degree)
        throw DomainError("generator degree " + std::to_string(g.degree()) + " differs from group degree " +
                          std::to_string(degree));
    std::vector<Permutation> elements{Permutation(degree)};
    std::map<std::vector<std::uint32_t>, std::size_t> seen{{elements[0].images(), 0}};
    std::vector<Permutation> level = elements;
    while (!level.empty()) {
      std::vector<Permutation> next;
      for (const auto& x : level)
        for (const auto& s : generators) {
          auto y = x * s;
          if (!seen.contains(y.images())) next.push_back(std::move(y));
        }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      for (const auto& y : next) {
        seen.emplace(y.images(), elements.size());
        elements.push_back(y);
        if (elements.size() > max_order)
          throw CapacityError("group order exceeds cap of " + std::to_string(max_order));
      }
      level = std::move(next);
    }
    Group g(degree, std::move(elements), generators);
    g.build_classes();
    return g;
  }

  /// Builds a group from an explicit element list (identity first). The list
  /// must be closed under products; this is verified.
  static Group from_elements(std::size_t degree, std::vector<Permutation> elements,
                             std::vector<Permutation> generators = {}) {
    if (elements.empty() || !elements[0].is_identity()) throw DomainError("element list must start with identity");
    Group g(degree, std::move(elements), std::move(generators));
    if (g.generators_.empty()) g.generators_ = g.greedy_generators();
    g.build_classes();
    return g;
  }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  std::size_t degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }
  static constexpr std::size_t identity() { return 0; }
  const Permutation& element(std::size_t i) const { return elements_[i]; }
  const std::vector<Permutation>& elements() const { return elements_; }
  const std::vector<Permutation>& generators() const { return generators_; }

  std::optional<std::size_t> find(const Permutation& p) const {
    auto it = index_.find(p.images());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t index_of(const Permutation& p) const {
    auto i = find(p);
    if (!i) throw DomainError("permutation " + p.to_cycles() + " is not an element of the group");
    return *i;
  }

  std::size_t mul(std::size_t a, std::size_t b) const {
    if (!table_.empty()) return table_[a * order() + b];
    return index_.at((elements_[a] * elements_[b]).images());
  }
  std::size_t inv(std::size_t a) const { return inverse_[a]; }
  std::size_t element_order(std::size_t a) const { return element_order_[a]; }

  /// Conjugacy classes sorted by (element order, least member); each class
  /// lists its members in increasing index order. The identity class is first.
  const std::vector<std::vector<std::size_t>>& classes() const { return classes_; }
  std::size_t num_classes() const { return classes_.size(); }
  std::size_t class_of(std::size_t g) const { return class_of_[g]; }

 private:
  Group(std::size_t degree, std::vector<Permutation> elements, std::vector<Permutation> generators)
      : degree_(degree), elements_(std::move(elements)), generators_(std::move(generators)) {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (elements_[i].degree() != degree_) throw DomainError("element degree mismatch");
      if (!index_.emplace(elements_[i].images(), i).second) throw DomainError("duplicate group element");
    }
    const std::size_t n = order();
    if (n <= kDenseTableLimit) {
      table_.resize(n * n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          auto it = index_.find((elements_[a] * elements_[b]).images());
          if (it == index_.end()) throw DomainError("element list is not closed under products");
          table_[a * n + b] = it->second;
        }
    }
    inverse_.resize(n);
    element_order_.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
      auto it = index_.find(elements_[a].inverse().images());
      if (it == index_.end()) throw DomainError("element list is not closed under inverses");
      inverse_[a] = it->second;
      element_order_[a] = elements_[a].order();
    }
  }

  std::vector<Permutation> greedy_generators() const {
    std::vector<Permutation> gens;
    Bitset reached(order());
    reached.set(0);
    std::vector<std::size_t> members{0};
    for (std::size_t i = 1; i < order(); ++i) {
      if (reached.test(i)) continue;
      gens.push_back(elements_[i]);
      std::vector<std::size_t> gen_idx;
      for (const auto& g : gens) gen_idx.push_back(index_of(g));
      for (std::size_t k = 0; k < members.size(); ++k)
        for (auto s : gen_idx) {
          auto y = mul(members[k], s);
          if (!reached.test(y)) {
            reached.set(y);
            members.push_back(y);
          }
        }
    }
    return gens;
  }

  void build_classes() {
    const std::size_t n = order();
    std::vector<std::size_t> gen_idx, gen_inv;
    for (const auto& g : generators_) {
      gen_idx.push_back(index_of(g));
      gen_inv.push_back(inv(gen_idx.back()));
    }
    class_of_.assign(n, n);
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t g = 0; g < n; ++g) {
      if (class_of_[g] != n) continue;
      std::vector<std::size_t> orbit{g};
      class_of_[g] = classes.size();
      for (std::size_t k = 0; k < orbit.size(); ++k)
        for (std::size_t s = 0; s < gen_idx.size(); ++s) {
          auto y = mul(mul(gen_inv[s], orbit[k]), gen_idx[s]);
          if (class_of_[y] == n) {
            class_of_[y] = classes.size();
            orbit.push_back(y);
          }
        }
      std::sort(orbit.begin(), orbit.end());
      classes.push_back(std::move(orbit));
    }
    std::stable_sort(classes.begin(), classes.end(), [&](const auto& a, const auto& b) {
      if (element_order_[a[0]] != element_order_[b[0]]) return element_order_[a[0]] < element_order_[b[0]];
      return a[0] < b[0];
    });
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (auto g : classes[c]) class_of_[g] = c;
    classes_ = std::move(classes);
  }

  std::string name_;
  std::size_t degree_ = 0;
  std::vector<Permutation> elements_;
  std::vector<Permutation> generators_;
  std::map<std::vector<std::uint32_t>, std::size_t> index_;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> inverse_;
  std::vector<std::size_t> element_order_;
  std::vector<std::vector<std::size_t>> classes_;
  std::vector<std::size_t> class_of_;
};

using GroupPtr = std::shared_ptr<const Group>;

inline GroupPtr make_group(Group g) { return std::make_shared<const Group>(std::move(g)); }

/// Membership bitset of a subgroup over the ambient group's element indices.
class SubgroupHandle {
 public:
  SubgroupHandle() = default;
  explicit SubgroupHandle(Bitset members) : members_(std::move(members)) {}

  const Bitset& members() const { return members_; }
  std::size_t order() const { return members_.count(); }
  bool contains(std::size_t g) const { return members_.test(g); }
  std::vector<std::size_t> elements() const { return members_.indices(); }
  bool is_subgroup_of(const SubgroupHandle& other) const { return members_.is_subset_of(other.members_); }

  bool operator==(const SubgroupHandle&) const = default;
  std::strong_ordering operator<=>(const SubgroupHandle& o) const {
    if (auto c = order() <=> o.order(); c != 0) return c;
    return members_ <=> o.members_;
  }

 private:
  Bitset members_;
};

/// Smallest subgroup containing the seed indices.
inline SubgroupHandle generated_subgroup(const Group& g, std::span<const std::size_t> seed) {
  std::vector<std::size_t> gens;
  for (auto s : seed) {
    if (s >= g.order()) throw DomainError("seed index out of range");
    if (s != Group::identity()) gens.push_back(s);
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  Bitset bits(g.order());
  bits.set(Group::identity());
  std::vector<std::size_t> members{Group::identity()};
  for (std::size_t k = 0; k < members.size(); ++k)
    for (auto s : gens) {
      auto y = g.mul(members[k], s);
      if (!bits.test(y)) {
        bits.set(y);
        members.push_back(y);
      }
    }
  return SubgroupHandle(std::move(bits));
}

inline SubgroupHandle generated_subgroup(const Group& g, std::initializer_list<std::size_t> seed) {
  return generated_subgroup(g, std::span<const std::size_t>(seed.begin(), seed.size()));
}

inline bool is_subgroup(const Group& g, const Bitset& bits) {
  if (bits.size() != g.order() || !bits.test(Group::identity())) return false;
  const auto members = bits.indices();
  for (auto a : members)
    for (auto b : members)
      if (!bits.test(g.mul(a, b))) return false;
  return true;
}

inline SubgroupHandle make_subgroup(const Group& g, Bitset bits) {
  if (!is_subgroup(g, bits)) throw DomainError("member set is not a subgroup");
  return SubgroupHandle(std::move(bits));
}

inline SubgroupHandle trivial_subgroup(const Group& g) {
  Bitset b(g.order());
  b.set(Group::identity());
  return SubgroupHandle(std::move(b));
}

inline SubgroupHandle whole_group(const Group& g) {
  Bitset b(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) b.set(i);
  return SubgroupHandle(std::move(b));
}

enum class CosetSide { left, right, double_sided };

/// Partition of the group into cosets gH, Hg or HgH, ordered by least member;
/// members of each coset sorted.
inline std::vector<std::vector<std::size_t>> cosets(const Group& g, const SubgroupHandle& h, CosetSide side) {
  if (!is_subgroup(g, h.members())) throw DomainError("cosets: argument is not a subgroup");
  const auto hs = h.elements();
  std::vector<bool> done(g.order(), false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t x = 0; x < g.order(); ++x) {
    if (done[x]) continue;
    std::vector<std::size_t> c;
    auto add = [&](std::size_t y) {
      if (!done[y]) {
        done[y] = true;
        c.push_back(y);
      }
    };
    switch (side) {
      case CosetSide::left:
        for (auto k : hs) add(g.mul(x, k));
        break;
      case CosetSide::right:
        for (auto k : hs) add(g.mul(k, x));
        break;
      case CosetSide::double_sided:
        for (auto k1 : hs)
          for (auto k2 : hs) add(g.mul(g.mul(k1, x), k2));
        break;
    }
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  return out;
}

/// x H x^-1 as a member set.
inline SubgroupHandle conjugate(const Group& g, const SubgroupHandle& h, std::size_t x) {
  Bitset b(g.order());
  for (auto k : h.elements()) b.set(g.mul(g.mul(x, k), g.inv(x)));
  return SubgroupHandle(std::move(b));
}

inline bool is_normal(const Group& g, const SubgroupHandle& h) {
  for (const auto& s : g.generators())
    if (conjugate(g, h, g.index_of(s)) != h) return false;
  return true;
}

/// Largest normal subgroup contained in h.
inline SubgroupHandle core(const Group& g, const SubgroupHandle& h) {
  Bitset b = h.members();
  for (std::size_t x = 0; x < g.order(); ++x) b &= conjugate(g, h, x).members();
  return SubgroupHandle(std::move(b));
}

inline bool is_core_free(const Group& g, const SubgroupHandle& h) { return core(g, h).order() == 1; }

/// A subgroup re-materialized as a standalone Group; elements keep the
/// ambient index order. embedding[i] is the ambient index of element i.
struct EmbeddedGroup {
  GroupPtr group;
  std::vector<std::size_t> embedding;

  /// Ambient member set -> bitset over the subgroup's own indices.
  Bitset restrict(const Bitset& ambient) const {
    Bitset b(embedding.size());
    for (std::size_t i = 0; i < embedding.size(); ++i)
      if (ambient.test(embedding[i])) b.set(i);
    return b;
  }
};

inline EmbeddedGroup subgroup_as_group(const Group& g, const SubgroupHandle& h,
                                       const std::vector<std::size_t>& generators = {}) {
  EmbeddedGroup out;
  out.embedding = h.elements();
  std::vector<Permutation> elems, gens;
  for (auto i : out.embedding) elems.push_back(g.element(i));
  for (auto i : generators) gens.push_back(g.element(i));
  out.group = make_group(Group::from_elements(g.degree(), std::move(elems), std::move(gens)));
  return out;
}

}  // namespace bipro
