#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bipro/bitset.hpp"
#include "bipro/config.hpp"
#include "bipro/error.hpp"
#include "bipro/group.hpp"

namespace bipro {

/// All subgroups of a group ordered by inclusion, with dense meet/join tables.
///
/// Nodes are sorted by (order, member list), so node 0 is the trivial
/// subgroup and the last node is the whole group.
class SubgroupLattice {
 public:
  static SubgroupLattice build(GroupPtr group, std::size_t max_subgroups = kDefaultMaxSubgroups) {
    const Group& g = *group;
    struct Found {
      SubgroupHandle handle;
      std::vector<std::size_t> gens;
    };
    std::vector<Found> found;
    std::unordered_map<Bitset, std::size_t, BitsetHash> seen;
    auto add = [&](SubgroupHandle h, std::vector<std::size_t> gens) {
      if (seen.contains(h.members())) return;
      if (found.size() >= max_subgroups)
        throw CapacityError("subgroup count exceeds cap of " + std::to_string(max_subgroups));
      seen.emplace(h.members(), found.size());
      found.push_back({std::move(h), std::move(gens)});
    };

    // every subgroup is the join of its cyclic subgroups
    std::vector<std::size_t> cyclic_gens;
    for (std::size_t x = 0; x < g.order(); ++x) {
      auto c = generated_subgroup(g, {x});
      if (seen.contains(c.members())) continue;
      cyclic_gens.push_back(x);
      add(std::move(c), x == Group::identity() ? std::vector<std::size_t>{} : std::vector<std::size_t>{x});
    }
    for (std::size_t k = 0; k < found.size(); ++k)
      for (auto c : cyclic_gens) {
        if (found[k].handle.contains(c)) continue;
        auto gens = found[k].gens;
        gens.push_back(c);
        auto joined = generated_subgroup(g, gens);
        add(std::move(joined), std::move(gens));
      }

    std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) { return a.handle < b.handle; });

    SubgroupLattice l;
    l.group_ = std::move(group);
    for (auto& f : found) {
      l.index_.emplace(f.handle.members(), l.nodes_.size());
      l.nodes_.push_back(std::move(f.handle));
      l.gens_.push_back(std::move(f.gens));
    }
    l.build_tables();
    return l;
  }

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  std::size_t size() const { return nodes_.size(); }
  const SubgroupHandle& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<SubgroupHandle>& nodes() const { return nodes_; }
  /// A small generating set of node i (element indices).
  const std::vector<std::size_t>& generators(std::size_t i) const { return gens_[i]; }

  std::size_t bottom() const { return 0; }
  std::size_t top() const { return nodes_.size() - 1; }

  bool leq(std::size_t a, std::size_t b) const { return leq_[a * size() + b] != 0; }
  bool less(std::size_t a, std::size_t b) const { return a != b && leq(a, b); }
  std::size_t meet(std::size_t a, std::size_t b) const { return meet_[a * size() + b]; }
  std::size_t join(std::size_t a, std::size_t b) const { return join_[a * size() + b]; }

  std::optional<std::size_t> find(const Bitset& members) const {
    auto it = index_.find(members);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t index_of(const SubgroupHandle& h) const {
    auto i = find(h.members());
    if (!i) throw DomainError("not a subgroup of the lattice's group");
    return *i;
  }

  /// Pairs (a, b) with b covering a.
  std::vector<std::pair<std::size_t, std::size_t>> covers() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = 0; b < size(); ++b) {
        if (!less(a, b)) continue;
        bool covering = true;
        for (std::size_t c = 0; c < size() && covering; ++c)
          if (less(a, c) && less(c, b)) covering = false;
        if (covering) out.emplace_back(a, b);
      }
    return out;
  }

  /// "order:index" label used by the exports.
  std::string label(std::size_t i) const { return std::to_string(nodes_[i].order()) + ":" + std::to_string(i); }

 private:
  void build_tables() {
    const std::size_t n = size();
    leq_.assign(n * n, 0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (nodes_[a].order() <= nodes_[b].order() && nodes_[a].is_subgroup_of(nodes_[b])) leq_[a * n + b] = 1;
    meet_.assign(n * n, 0);
    join_.assign(n * n, 0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        auto m = index_.at(nodes_[a].members() & nodes_[b].members());
        meet_[a * n + b] = meet_[b * n + a] = m;
        // nodes are sorted by order, so the first common upper bound is the least one
        std::size_t j = n;
        for (std::size_t c = b; c < n; ++c)
          if (leq(a, c) && leq(b, c)) {
            j = c;
            break;
          }
        join_[a * n + b] = join_[b * n + a] = j;
      }
  }

  GroupPtr group_;
  std::vector<SubgroupHandle> nodes_;
  std::vector<std::vector<std::size_t>> gens_;
  std::unordered_map<Bitset, std::size_t, BitsetHash> index_;
  std::vector<char> leq_;
  std::vector<std::size_t> meet_;
  std::vector<std::size_t> join_;
};

/// The sublattice [low, high] of a subgroup lattice.
struct Interval {
  const SubgroupLattice* lattice = nullptr;
  std::size_t low = 0;
  std::size_t high = 0;
  std::vector<std::size_t> members;
};

inline Interval interval(const SubgroupLattice& l, std::size_t low, std::size_t high) {
  if (low >= l.size() || high >= l.size()) throw DomainError("interval endpoint out of range");
  if (!l.leq(low, high)) throw DomainError("interval endpoints are not comparable");
  Interval iv{&l, low, high, {}};
  for (std::size_t c = 0; c < l.size(); ++c)
    if (l.leq(low, c) && l.leq(c, high)) iv.members.push_back(c);
  return iv;
}

struct LatticeProfile {
  bool is_distributive = false;
  bool is_boolean = false;
  std::optional<std::size_t> boolean_rank;
  std::vector<std::size_t> atoms;
  std::vector<std::size_t> coatoms;
  std::pair<std::size_t, std::size_t> bottom_interval{};
  std::pair<std::size_t, std::size_t> top_interval{};
  bool is_top_boolean = false;
  bool is_bottom_boolean = false;
  std::map<std::size_t, std::size_t> complements;  // first complement found, by node order
};

namespace detail {

inline std::vector<std::size_t> members_between(const SubgroupLattice& l, std::size_t low, std::size_t high) {
  std::vector<std::size_t> m;
  for (std::size_t c = low; c <= high; ++c)
    if (l.leq(low, c) && l.leq(c, high)) m.push_back(c);
  return m;
}

inline std::vector<std::size_t> atoms_of(const SubgroupLattice& l, std::size_t low,
                                         const std::vector<std::size_t>& members) {
  std::vector<std::size_t> out;
  for (auto m : members) {
    if (m == low) continue;
    bool minimal = true;
    for (auto k : members)
      if (k != low && l.less(k, m)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(m);
  }
  return out;
}

inline std::vector<std::size_t> coatoms_of(const SubgroupLattice& l, std::size_t high,
                                           const std::vector<std::size_t>& members) {
  std::vector<std::size_t> out;
  for (auto m : members) {
    if (m == high) continue;
    bool maximal = true;
    for (auto k : members)
      if (k != high && l.less(m, k)) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(m);
  }
  return out;
}

inline bool is_distributive(const SubgroupLattice& l, const std::vector<std::size_t>& members) {
  for (auto a : members)
    for (auto b : members)
      for (auto c : members)
        if (l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c))) return false;
  return true;
}

inline std::optional<std::size_t> complement_in(const SubgroupLattice& l, std::size_t low, std::size_t high,
                                                const std::vector<std::size_t>& members, std::size_t a) {
  for (auto c : members)
    if (l.meet(a, c) == low && l.join(a, c) == high) return c;
  return std::nullopt;
}

/// Boolean test with a cheap cardinality pre-check: a Boolean lattice with
/// r atoms has exactly 2^r elements.
inline bool is_boolean_interval(const SubgroupLattice& l, std::size_t low, std::size_t high) {
  const auto members = members_between(l, low, high);
  const auto atoms = atoms_of(l, low, members);
  if (atoms.size() >= 63 || members.size() != (std::size_t{1} << atoms.size())) return false;
  if (!is_distributive(l, members)) return false;
  for (auto a : members)
    if (!complement_in(l, low, high, members, a)) return false;
  return true;
}

inline std::size_t join_all(const SubgroupLattice& l, std::size_t start, const std::vector<std::size_t>& xs) {
  std::size_t acc = start;
  for (auto x : xs) acc = l.join(acc, x);
  return acc;
}

inline std::size_t meet_all(const SubgroupLattice& l, std::size_t start, const std::vector<std::size_t>& xs) {
  std::size_t acc = start;
  for (auto x : xs) acc = l.meet(acc, x);
  return acc;
}

}  // namespace detail

/// Top interval [meet of coatoms, high] of [low, high] is Boolean.
inline bool is_top_boolean(const SubgroupLattice& l, std::size_t low, std::size_t high) {
  const auto members = detail::members_between(l, low, high);
  const auto t = detail::meet_all(l, high, detail::coatoms_of(l, high, members));
  return detail::is_boolean_interval(l, t, high);
}

/// Bottom interval [low, join of atoms] of [low, high] is Boolean.
inline bool is_bottom_boolean(const SubgroupLattice& l, std::size_t low, std::size_t high) {
  const auto members = detail::members_between(l, low, high);
  const auto b = detail::join_all(l, low, detail::atoms_of(l, low, members));
  return detail::is_boolean_interval(l, low, b);
}

inline LatticeProfile analyze(const Interval& iv) {
  const auto& l = *iv.lattice;
  LatticeProfile p;
  p.is_distributive = detail::is_distributive(l, iv.members);
  bool all_complemented = true;
  for (auto a : iv.members) {
    if (auto c = detail::complement_in(l, iv.low, iv.high, iv.members, a))
      p.complements.emplace(a, *c);
    else
      all_complemented = false;
  }
  p.is_boolean = p.is_distributive && all_complemented;
  p.atoms = detail::atoms_of(l, iv.low, iv.members);
  p.coatoms = detail::coatoms_of(l, iv.high, iv.members);
  if (p.is_boolean) p.boolean_rank = p.atoms.size();
  p.bottom_interval = {iv.low, detail::join_all(l, iv.low, p.atoms)};
  p.top_interval = {detail::meet_all(l, iv.high, p.coatoms), iv.high};
  p.is_bottom_boolean = detail::is_boolean_interval(l, p.bottom_interval.first, p.bottom_interval.second);
  p.is_top_boolean = detail::is_boolean_interval(l, p.top_interval.first, p.top_interval.second);
  return p;
}

struct ComplementReport {
  bool join_is_top = false;            // a ∨ b = high
  std::size_t complement_of_a = 0;
  bool b_above_complement = false;     // b ≥ a∁
  bool implication_holds = false;      // a ∨ b = high ⇒ b ≥ a∁
  bool a_is_atom = false;
  bool atom_clause_holds = true;       // a atom ∧ a ∨ b = high ⇒ b ∈ {a∁, high}
};

/// Checks, for members a and b of a Boolean interval, that a ∨ b = top forces
/// b above the complement of a (and b ∈ {a∁, top} when a is an atom).
inline ComplementReport complement_check(const Interval& iv, std::size_t a, std::size_t b) {
  const auto& l = *iv.lattice;
  const auto prof = analyze(iv);
  if (!prof.is_boolean) throw DomainError("complement_check requires a Boolean interval");
  auto in = [&](std::size_t x) { return std::find(iv.members.begin(), iv.members.end(), x) != iv.members.end(); };
  if (!in(a) || !in(b)) throw DomainError("complement_check: arguments must be members of the interval");
  ComplementReport r;
  r.complement_of_a = prof.complements.at(a);
  r.join_is_top = l.join(a, b) == iv.high;
  r.b_above_complement = l.leq(r.complement_of_a, b);
  r.implication_holds = !r.join_is_top || r.b_above_complement;
  r.a_is_atom = std::find(prof.atoms.begin(), prof.atoms.end(), a) != prof.atoms.end();
  if (r.a_is_atom && r.join_is_top) r.atom_clause_holds = (b == r.complement_of_a || b == iv.high);
  return r;
}

/// First element g of the top subgroup (in element order) with <low, g> = high.
inline std::optional<std::size_t> is_h_cyclic(const Interval& iv) {
  const auto& l = *iv.lattice;
  const auto& target = l.node(iv.high);
  const auto& low = l.node(iv.low);
  auto seed = l.generators(iv.low);
  seed.push_back(0);
  for (auto g : target.elements()) {
    if (low.contains(g) && iv.low != iv.high) continue;
    seed.back() = g;
    if (generated_subgroup(l.group(), seed) == target) return g;
  }
  return std::nullopt;
}

enum class ChainMode { top, bottom };

struct ChainResult {
  std::size_t length = 0;
  std::vector<std::size_t> chain;  // node indices, source first
};

/// Shortest chain source = H0 < H1 < ... < target in which every step
/// [Hi, Hi+1] is top (resp. bottom) Boolean. Breadth-first over node order,
/// so ties resolve to the lexicographically first chain; with several sources
/// the earliest listed source wins ties.
inline ChainResult shortest_boolean_chain(const SubgroupLattice& l, ChainMode mode,
                                          const std::vector<std::size_t>& sources, std::size_t target) {
  const std::size_t n = l.size();
  std::vector<std::size_t> parent(n, n), dist(n, n);
  std::deque<std::size_t> queue;
  for (auto s : sources)
    if (dist[s] == n) {
      dist[s] = 0;
      parent[s] = s;
      queue.push_back(s);
    }
  while (!queue.empty() && dist[target] == n) {
    auto x = queue.front();
    queue.pop_front();
    for (std::size_t y = x + 1; y < n; ++y) {
      if (dist[y] != n || !l.less(x, y) || !l.leq(y, target)) continue;
      const bool ok = mode == ChainMode::top ? is_top_boolean(l, x, y) : is_bottom_boolean(l, x, y);
      if (!ok) continue;
      dist[y] = dist[x] + 1;
      parent[y] = x;
      queue.push_back(y);
    }
  }
  if (dist[target] == n) throw IntegrityError("no Boolean chain reaches the target");
  ChainResult r;
  r.length = dist[target];
  for (std::size_t v = target;; v = parent[v]) {
    r.chain.push_back(v);
    if (parent[v] == v) break;
  }
  std::reverse(r.chain.begin(), r.chain.end());
  return r;
}

inline ChainResult boolean_chain_length(const SubgroupLattice& l, ChainMode mode) {
  return shortest_boolean_chain(l, mode, {l.bottom()}, l.top());
}

namespace detail {

inline bool generates_within(const Group& g, std::vector<std::size_t>& chosen, std::size_t k, std::size_t start,
                             const SubgroupHandle& current) {
  if (chosen.size() == k) return current.order() == g.order();
  for (std::size_t x = start; x < g.order(); ++x) {
    if (current.contains(x)) continue;  // redundant generator
    chosen.push_back(x);
    auto next = generated_subgroup(g, chosen);
    if (generates_within(g, chosen, k, x + 1, next)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace detail

/// Smallest number of elements generating the group.
inline std::size_t minimal_generating_size(const Group& g) {
  if (g.order() == 1) return 0;
  for (std::size_t k = 1;; ++k) {
    std::vector<std::size_t> chosen;
    if (detail::generates_within(g, chosen, k, 1, trivial_subgroup(g))) return k;
  }
}

}  // namespace bipro
