#include <gtest/gtest.h>

#include "bipro/catalogue.hpp"
#include "bipro/lattice.hpp"
#include "oracles.hpp"

using namespace bipro;

namespace {

SubgroupLattice lattice_of(const char* name) { return SubgroupLattice::build(parse_group(name)); }

std::size_t node_of(const SubgroupLattice& l, const char* gens) {
  const auto& g = l.group();
  std::vector<std::size_t> idx;
  for (const auto& p : parse_permutation_list(gens, g.degree())) idx.push_back(g.index_of(p));
  return l.index_of(generated_subgroup(g, std::span<const std::size_t>(idx)));
}

std::size_t node_of_order(const SubgroupLattice& l, std::size_t order) {
  for (std::size_t i = 0; i < l.size(); ++i)
    if (l.node(i).order() == order) return i;
  return l.size();
}

}  // namespace

TEST(Lattice, SubsetOracleSmallGroups) {
  for (const char* name : {"Z1", "Z2", "S3", "Z2xZ2", "Z6", "D4", "Q8", "Z2xZ2xZ2", "D5", "A4", "D6", "Z12"}) {
    auto l = lattice_of(name);
    auto expected = oracle::subgroups_by_subsets(l.group());
    ASSERT_EQ(l.size(), expected.size()) << name;
    for (std::size_t i = 0; i < l.size(); ++i) {
      std::vector<bool> in(l.group().order());
      for (auto x : l.node(i).elements()) in[x] = true;
      EXPECT_TRUE(expected.count(in)) << name;
    }
  }
}

TEST(Lattice, S4HasThirtySubgroups) {
  auto l = lattice_of("S4");
  EXPECT_EQ(l.size(), 30u);
  EXPECT_EQ(oracle::subgroups_by_triples(l.group()).size(), 30u);
}

TEST(Lattice, PrimeCyclic) {
  for (const char* name : {"Z2", "Z3", "Z5", "Z7", "Z11"}) EXPECT_EQ(lattice_of(name).size(), 2u);
}

TEST(Lattice, CyclicIsDivisorLattice) {
  for (std::size_t n : {1, 4, 6, 12, 30, 36}) {
    auto l = lattice_of(("Z" + std::to_string(n)).c_str());
    EXPECT_EQ(l.size(), oracle::divisor_count(n)) << n;
    EXPECT_EQ(l.covers().size(), oracle::divisor_covers(n)) << n;
    EXPECT_TRUE(analyze(interval(l, l.bottom(), l.top())).is_distributive) << n;
  }
}

TEST(Lattice, NodesSortedAndOrdered) {
  auto l = lattice_of("D4");
  for (std::size_t i = 1; i < l.size(); ++i) EXPECT_LE(l.node(i - 1).order(), l.node(i).order());
  EXPECT_EQ(l.node(l.bottom()).order(), 1u);
  EXPECT_EQ(l.node(l.top()).order(), 8u);
  for (std::size_t a = 0; a < l.size(); ++a)
    for (std::size_t b = 0; b < l.size(); ++b) {
      auto m = l.meet(a, b), j = l.join(a, b);
      EXPECT_TRUE(l.leq(m, a) && l.leq(m, b) && l.leq(a, j) && l.leq(b, j));
      EXPECT_EQ(l.node(m).members(), l.node(a).members() & l.node(b).members());
    }
}

TEST(Lattice, Intervals) {
  auto l = lattice_of("S3");
  EXPECT_EQ(interval(l, l.bottom(), l.top()).members.size(), 6u);
  EXPECT_EQ(interval(l, 2, 2).members.size(), 1u);
  auto a3 = node_of(l, "(0 1 2)");
  EXPECT_EQ(interval(l, a3, l.top()).members.size(), 2u);
  auto t = node_of(l, "(0 1)");
  EXPECT_THROW(interval(l, a3, t), DomainError);
  EXPECT_THROW(interval(l, 0, 99), DomainError);
}

TEST(Lattice, Profiles) {
  auto z6 = lattice_of("Z6");
  auto p = analyze(interval(z6, z6.bottom(), z6.top()));
  EXPECT_TRUE(p.is_distributive);
  EXPECT_TRUE(p.is_boolean);
  ASSERT_TRUE(p.boolean_rank.has_value());
  EXPECT_EQ(*p.boolean_rank, 2u);

  auto v4 = lattice_of("Z2xZ2");
  auto q = analyze(interval(v4, v4.bottom(), v4.top()));
  EXPECT_FALSE(q.is_distributive);
  EXPECT_FALSE(q.is_boolean);
  EXPECT_EQ(q.atoms.size(), 3u);

  auto s4 = lattice_of("S4");
  auto s2 = node_of(s4, "(0 1)");
  auto r = analyze(interval(s4, s2, s4.top()));
  EXPECT_FALSE(r.is_top_boolean);
  EXPECT_FALSE(is_top_boolean(s4, s2, s4.top()));
}

TEST(Lattice, TopAndBottomIntervals) {
  // [1, Q8]: the centre is the unique atom, so the bottom interval is [1, Z2].
  auto q8 = lattice_of("Q8");
  auto p = analyze(interval(q8, q8.bottom(), q8.top()));
  EXPECT_EQ(p.atoms.size(), 1u);
  EXPECT_EQ(q8.node(p.bottom_interval.second).order(), 2u);
  EXPECT_TRUE(p.is_bottom_boolean);
  EXPECT_EQ(p.coatoms.size(), 3u);
  EXPECT_EQ(q8.node(p.top_interval.first).order(), 2u);  // meet of the three Z4
  EXPECT_FALSE(p.is_top_boolean);
}

TEST(Lattice, ComplementCheck) {
  auto l = lattice_of("Z30");
  auto iv = interval(l, l.bottom(), l.top());
  auto z2 = node_of_order(l, 2), z15 = node_of_order(l, 15), z6 = node_of_order(l, 6);
  auto r = complement_check(iv, z2, z15);
  EXPECT_EQ(r.complement_of_a, z15);
  EXPECT_TRUE(r.join_is_top);
  EXPECT_TRUE(r.implication_holds);
  EXPECT_TRUE(r.atom_clause_holds);
  auto s = complement_check(iv, z2, z6);
  EXPECT_FALSE(s.join_is_top);
  EXPECT_TRUE(s.implication_holds);

  auto v4 = lattice_of("Z2xZ2");
  EXPECT_THROW(complement_check(interval(v4, 0, v4.top()), 1, 2), DomainError);
}

TEST(Lattice, HCyclic) {
  auto s4 = lattice_of("S4");
  auto s2 = node_of(s4, "(0 1)");
  auto w = is_h_cyclic(interval(s4, s2, s4.top()));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(s4.group().element(*w).order(), 4u);
  auto both = generated_subgroup(s4.group(), {s4.group().index_of(parse_cycles("(0 1)", 4)), *w});
  EXPECT_EQ(both.order(), 24u);

  auto top = is_h_cyclic(interval(s4, s4.top(), s4.top()));
  ASSERT_TRUE(top.has_value());
  EXPECT_EQ(*top, 0u);

  auto v4 = lattice_of("Z2xZ2");
  EXPECT_FALSE(is_h_cyclic(interval(v4, v4.bottom(), v4.top())).has_value());
}

TEST(Lattice, HCyclicAgreesWithExhaustiveScan) {
  for (const char* name : {"S3", "D4", "A4", "Q8", "Z2xZ4"}) {
    auto l = lattice_of(name);
    const auto& g = l.group();
    for (std::size_t h = 0; h < l.size(); ++h) {
      bool any = false;
      auto gens = l.generators(h);
      for (std::size_t x = 0; x < g.order() && !any; ++x) {
        auto seed = gens;
        seed.push_back(x);
        std::vector<bipro::Permutation> perms;
        for (auto s : seed) perms.push_back(g.element(s));
        any = oracle::word_closure(g.degree(), perms).size() == g.order();
      }
      EXPECT_EQ(is_h_cyclic(interval(l, h, l.top())).has_value(), any) << name << " " << h;
    }
  }
}

TEST(Lattice, ChainLengths) {
  auto z6 = lattice_of("Z6");
  EXPECT_EQ(boolean_chain_length(z6, ChainMode::top).length, 1u);
  EXPECT_EQ(boolean_chain_length(z6, ChainMode::bottom).length, 1u);
  auto z1 = lattice_of("Z1");
  EXPECT_EQ(boolean_chain_length(z1, ChainMode::top).length, 0u);
  auto s3 = lattice_of("S3");
  auto c = boolean_chain_length(s3, ChainMode::top);
  EXPECT_EQ(c.length, 2u);
  ASSERT_EQ(c.chain.size(), 3u);
  for (std::size_t k = 0; k + 1 < c.chain.size(); ++k) EXPECT_TRUE(is_top_boolean(s3, c.chain[k], c.chain[k + 1]));
  auto q8 = lattice_of("Q8");
  EXPECT_EQ(boolean_chain_length(q8, ChainMode::bottom).length, 1u);
}

TEST(Lattice, MinimalGeneratingSize) {
  EXPECT_EQ(minimal_generating_size(*parse_group("Z6")), 1u);
  EXPECT_EQ(minimal_generating_size(*parse_group("S3")), 2u);
  EXPECT_EQ(minimal_generating_size(*parse_group("Z2xZ2")), 2u);
  EXPECT_EQ(minimal_generating_size(*parse_group("Z2xZ2xZ2")), 3u);
  EXPECT_EQ(minimal_generating_size(*parse_group("Z1")), 0u);
}

TEST(Lattice, SubgroupCap) {
  EXPECT_THROW(SubgroupLattice::build(parse_group("S4"), 10), CapacityError);
}
