#include <gtest/gtest.h>

#include "bipro/catalogue.hpp"
#include "bipro/characters.hpp"
#include "oracles.hpp"

using namespace bipro;

namespace {

/// Row of the table equal to the oracle character, or ct.size().
std::size_t matching_row(const CharacterTable& ct, const oracle::MatrixRep& rep) {
  const auto& g = *ct.group;
  for (std::size_t i = 0; i < ct.size(); ++i) {
    bool same = true;
    for (std::size_t x = 0; x < g.order() && same; ++x) same = std::abs(ct.value(i, x) - rep.character(x)) < 1e-9;
    if (same) return i;
  }
  return ct.size();
}

SubgroupHandle subgroup(const Group& g, const char* gens) {
  std::vector<std::size_t> idx;
  for (const auto& p : parse_permutation_list(gens, g.degree())) idx.push_back(g.index_of(p));
  return generated_subgroup(g, std::span<const std::size_t>(idx));
}

std::vector<int> sorted_degrees(const CharacterTable& ct) {
  auto d = ct.degrees;
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

TEST(ClassAlgebra, StructureConstants) {
  auto z1 = parse_group("Z1");
  auto a = class_structure_constants(*z1);
  EXPECT_EQ(a(0, 0, 0), 1);

  // transpositions * transpositions hits the identity 3 times
  auto s3 = parse_group("S3");
  auto c = class_structure_constants(*s3);
  const auto t = s3->class_of(s3->index_of(parse_cycles("(0 1)", 3)));
  EXPECT_EQ(c(t, t, 0), 3);

  auto z2 = parse_group("Z2");
  EXPECT_EQ(class_structure_constants(*z2)(1, 1, 0), 1);
}

TEST(CharacterTable, SmallGroups) {
  auto z2 = character_table(parse_group("Z2"));
  ASSERT_EQ(z2.size(), 2u);
  EXPECT_NEAR(std::abs(z2.chi[0][1] - 1.0), 0, 1e-12);
  EXPECT_NEAR(std::abs(z2.chi[1][1] + 1.0), 0, 1e-12);

  auto z1 = character_table(parse_group("Z1"));
  ASSERT_EQ(z1.size(), 1u);
  EXPECT_NEAR(std::abs(z1.chi[0][0] - 1.0), 0, 1e-12);
}

TEST(CharacterTable, S3MatchesMatrixOracle) {
  auto g = parse_group("S3");
  auto ct = character_table(g);
  EXPECT_EQ(sorted_degrees(ct), (std::vector<int>{1, 1, 2}));
  auto rep = oracle::s3_standard(*g);
  ASSERT_TRUE(rep.consistent);
  auto row = matching_row(ct, rep);
  ASSERT_LT(row, ct.size());
  EXPECT_NEAR(std::abs(ct.value(row, g->index_of(parse_cycles("(0 1)", 3)))), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(ct.value(row, g->index_of(parse_cycles("(0 1 2)", 3))) + 1.0), 0.0, 1e-9);
}

TEST(CharacterTable, Q8MatchesQuaternionOracle) {
  auto g = parse_group("Q8");
  auto ct = character_table(g);
  EXPECT_EQ(sorted_degrees(ct), (std::vector<int>{1, 1, 1, 1, 2}));
  auto rep = oracle::q8_quaternion(*g);
  ASSERT_TRUE(rep.consistent);
  EXPECT_LT(matching_row(ct, rep), ct.size());
}

TEST(CharacterTable, Orthogonality) {
  for (const char* name : {"S4", "D5", "A4", "Z3xS3", "Q8", "A5", "Z2xD4"}) {
    auto ct = character_table(parse_group(name));
    EXPECT_LT(ct.orthogonality_residual, 1e-8) << name;
    long sum = 0;
    for (int d : ct.degrees) sum += static_cast<long>(d) * d;
    EXPECT_EQ(sum, static_cast<long>(ct.group->order())) << name;
    EXPECT_EQ(ct.size(), ct.group->num_classes()) << name;
  }
}

TEST(CharacterTable, SeedIndependentUpToRounding) {
  auto g = parse_group("S4");
  auto a = character_table(g, {}, 1), b = character_table(g, {}, 99);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t c = 0; c < a.chi[i].size(); ++c) EXPECT_NEAR(std::abs(a.chi[i][c] - b.chi[i][c]), 0, 1e-9);
}

TEST(Characters, FixedDimensions) {
  auto g = parse_group("S3");
  auto ct = character_table(g);
  auto std_row = matching_row(ct, oracle::s3_standard(*g));
  for (std::size_t i = 0; i < ct.size(); ++i) EXPECT_EQ(fixed_dim(ct, i, trivial_subgroup(*g)), ct.degrees[i]);
  EXPECT_EQ(fixed_dim(ct, std_row, subgroup(*g, "(0 1)")), 1);
  EXPECT_EQ(fixed_dim(ct, std_row, subgroup(*g, "(0 1 2)")), 0);
}

TEST(Characters, PointwiseStabilizer) {
  auto g = parse_group("S3");
  auto ct = character_table(g);
  auto std_row = matching_row(ct, oracle::s3_standard(*g));
  auto t = subgroup(*g, "(0 1)");
  EXPECT_EQ(pointwise_stabilizer(ct, std_row, t), t);
  EXPECT_EQ(pointwise_stabilizer(ct, 0, t), whole_group(*g));
  EXPECT_EQ(pointwise_stabilizer(ct, std_row, whole_group(*g)), whole_group(*g));

  // matrix oracle: elements fixing the +1 eigenvector of rho((0 1)) pointwise
  auto rep = oracle::s3_standard(*g);
  auto x = g->index_of(parse_cycles("(0 1)", 3));
  Eigen::ComplexEigenSolver<oracle::Mat> es(rep.rho[x]);
  Eigen::Vector2cd v;
  for (int k = 0; k < 2; ++k)
    if (std::abs(es.eigenvalues()[k] - 1.0) < 1e-9) v = es.eigenvectors().col(k);
  std::size_t count = 0;
  for (std::size_t y = 0; y < g->order(); ++y)
    if ((rep.rho[y] * v - v).norm() < 1e-9) ++count;
  EXPECT_EQ(count, pointwise_stabilizer(ct, std_row, t).order());
}

TEST(Characters, LinearPrimitivity) {
  auto s3 = parse_group("S3");
  auto ct3 = character_table(s3);
  auto w = is_linearly_primitive(ct3, subgroup(*s3, "(0 1)"));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(ct3.degrees[*w], 2);

  auto q8 = parse_group("Q8");
  auto ctq = character_table(q8);
  auto v = is_linearly_primitive(ctq, trivial_subgroup(*q8));
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(ctq.degrees[*v], 2);

  auto v4 = parse_group("Z2xZ2");
  EXPECT_FALSE(is_linearly_primitive(character_table(v4), trivial_subgroup(*v4)).has_value());
}

TEST(Characters, FaithfulComponents) {
  EXPECT_EQ(min_faithful_components(character_table(parse_group("Q8"))).count, 1u);
  EXPECT_EQ(min_faithful_components(character_table(parse_group("Z2xZ2"))).count, 2u);
  EXPECT_EQ(min_faithful_components(character_table(parse_group("Z1"))).count, 0u);
  EXPECT_EQ(min_faithful_components(character_table(parse_group("Z2xZ2xZ2"))).count, 3u);
}

TEST(Characters, KernelOfSign) {
  auto g = parse_group("S3");
  auto ct = character_table(g);
  for (std::size_t i = 0; i < ct.size(); ++i)
    if (ct.degrees[i] == 1 && i != 0) {
      EXPECT_EQ(kernel(ct, i).order(), 3u);
    }
  EXPECT_EQ(kernel(ct, 0), whole_group(*g));
}

TEST(Fusion, MultiplicitiesAndDimensions) {
  for (const char* name : {"S3", "Q8", "S4", "A4", "D5"}) {
    auto ct = character_table(parse_group(name));
    auto ft = fusion_coeffs(ct);
    for (std::size_t i = 0; i < ft.n; ++i)
      for (std::size_t j = 0; j < ft.n; ++j) {
        long dim = 0;
        for (std::size_t k = 0; k < ft.n; ++k) {
          EXPECT_GE(ft(i, j, k), 0);
          EXPECT_EQ(ft(i, j, k), ft(j, i, k));
          dim += static_cast<long>(ft(i, j, k)) * ct.degrees[k];
        }
        EXPECT_EQ(dim, static_cast<long>(ct.degrees[i]) * ct.degrees[j]) << name;
      }
  }
}

TEST(Fusion, Reachability) {
  auto q8 = character_table(parse_group("Q8"));
  auto fq = fusion_coeffs(q8);
  std::size_t two = 0;
  for (std::size_t i = 0; i < q8.size(); ++i)
    if (q8.degrees[i] == 2) two = i;
  EXPECT_EQ(tensor_reachability(fq, two).size(), 5u);
  EXPECT_EQ(tensor_reachability(fq, 0), (std::vector<std::size_t>{0}));

  auto v4 = character_table(parse_group("Z2xZ2"));
  auto fv = fusion_coeffs(v4);
  for (std::size_t i = 1; i < 4; ++i) {
    auto r = tensor_reachability(fv, i);
    std::sort(r.begin(), r.end());
    EXPECT_EQ(r, (std::vector<std::size_t>{0, i}));
  }
}
