#include <gtest/gtest.h>

#include "bipro/catalogue.hpp"
#include "bipro/io.hpp"
#include "bipro/verify.hpp"

using namespace bipro;

namespace {

VerifyContext context(const char* name, Config cfg = {}) { return VerifyContext::make(parse_group(name), cfg); }

const Report* find(const std::vector<Report>& rs, const std::string& low, const std::string& high) {
  for (const auto& r : rs)
    if (r.low == low && r.high == high) return &r;
  return nullptr;
}
const Report* find(std::vector<Report>&&, const std::string&, const std::string&) = delete;

void expect_no_failures(const std::vector<Report>& rs) {
  for (const auto& r : rs)
    EXPECT_NE(r.verdict, Verdict::fail) << r.suite << " " << r.group << " [" << r.low << "," << r.high << "] "
                                        << r.detail << " " << r.witness.dump();
}

}  // namespace

TEST(Verify, AllSuitesPassOnSmallGroups) {
  for (const char* name : {"Z1", "Z2", "Z6", "Z2xZ2", "S3", "Q8", "D4"}) {
    auto cx = context(name);
    auto rs = run_suites(cx);
    expect_no_failures(rs);
    EXPECT_EQ(exit_code(rs), 0) << name;
  }
}

TEST(Verify, S4FullPipeline) {
  auto cx = context("S4");
  auto rs = run_suites(cx);
  expect_no_failures(rs);
  EXPECT_EQ(exit_code(rs), 0);
}

TEST(Verify, OreCounterexampleSkipped) {
  auto cx = context("S4");
  auto rs = verify_ore(cx);
  const auto* r = find(rs, "<(0 1)>", "S4");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->verdict, Verdict::skip);
  EXPECT_EQ(r->witness["top_boolean"], false);
  EXPECT_EQ(r->witness["h_cyclic"], "(0 1 2 3)");
  const auto* top = find(rs, "S4", "S4");
  ASSERT_NE(top, nullptr);
  EXPECT_EQ(top->verdict, Verdict::pass);
}

TEST(Verify, OreCyclicAllPass) {
  auto cx = context("Z12");
  for (const auto& r : verify_ore(cx)) EXPECT_EQ(r.verdict, Verdict::pass);
}

TEST(Verify, DualOre) {
  auto s3 = context("S3");
  auto rs = verify_dual_ore(s3);
  const auto* r = find(rs, "<(0 1)>", "S3");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->verdict, Verdict::pass);
  EXPECT_EQ(r->witness["degree"], 2);

  auto v4 = context("Z2xZ2");
  const auto v4_reports = verify_dual_ore(v4);
  const auto* s = find(v4_reports, "1", "Z2xZ2");
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->verdict, Verdict::skip);
}

TEST(Verify, WCyclicEquivalences) {
  auto q8 = context("Q8");
  const auto q8_reports = verify_wcyclic(q8);
  const auto* r = find(q8_reports, "1", "Q8");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->verdict, Verdict::pass);
  EXPECT_EQ(r->witness["linearly_primitive"], true);

  auto v4 = context("Z2xZ2");
  const auto v4_wcyclic = verify_wcyclic(v4);
  const auto* s = find(v4_wcyclic, "1", "Z2xZ2");
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->verdict, Verdict::pass);
  EXPECT_EQ(s->witness["linearly_primitive"], false);
  EXPECT_EQ(s->witness["h_cyclic"], false);
}

TEST(Verify, BoundAnchors) {
  auto s3 = verify_bounds(context("S3"));
  ASSERT_EQ(s3.size(), 1u);
  EXPECT_EQ(s3[0].verdict, Verdict::pass);
  EXPECT_EQ(s3[0].constants.at("minimal_generating_size"), 2.0);
  EXPECT_EQ(s3[0].constants.at("top_chain_length"), 2.0);

  auto q8 = verify_bounds(context("Q8"));
  ASSERT_EQ(q8.size(), 1u);
  EXPECT_EQ(q8[0].verdict, Verdict::pass);
  EXPECT_EQ(q8[0].constants.at("min_faithful_components"), 1.0);
  EXPECT_EQ(q8[0].constants.at("bottom_chain_length"), 1.0);

  auto z7 = verify_bounds(context("Z7"));
  EXPECT_EQ(z7[0].constants.at("minimal_generating_size"), 1.0);
  EXPECT_EQ(z7[0].constants.at("top_chain_length"), 1.0);
}

TEST(Verify, FusionConstants) {
  auto rs = verify_fusion(context("Z2"));
  ASSERT_FALSE(rs.empty());
  for (const auto& r : rs) EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_TRUE(rs[0].constants.count("fusion_ratio_min"));
  EXPECT_TRUE(rs[0].constants.count("pairing_constant"));
}

TEST(Verify, IntegrityErrorsFailTheRun) {
  Report ok;
  ok.verdict = Verdict::pass;
  Report bad;
  bad.verdict = Verdict::fail;
  Report broken = bad;
  broken.integrity_error = true;
  EXPECT_EQ(exit_code({}), 0);
  EXPECT_EQ(exit_code({ok}), 0);
  EXPECT_EQ(exit_code({ok, bad}), 1);
  EXPECT_EQ(exit_code({bad, broken, ok}), 2);
}

TEST(Verify, UnknownSuite) {
  auto cx = context("Z2");
  EXPECT_THROW(run_suite(cx, "nope"), DomainError);
}

TEST(Verify, Deterministic) {
  Config cfg;
  cfg.seed = 42;
  auto a = dump(reports_json(run_suites(context("D4", cfg))));
  auto b = dump(reports_json(run_suites(context("D4", cfg))));
  EXPECT_EQ(a, b);
  cfg.jobs = 3;
  auto c = dump(reports_json(run_suites(context("D4", cfg))));
  EXPECT_EQ(a, c);
}

TEST(Verify, SeedChangesNothingStructural) {
  Config cfg;
  cfg.seed = 7;
  auto rs = run_suites(context("A4", cfg));
  expect_no_failures(rs);
}

TEST(Io, StableNumbers) {
  EXPECT_EQ(dump(Json::array()), "[]\n");
  EXPECT_EQ(stable_number(-0.0).dump(), "0.0");
  EXPECT_EQ(stable_number(0.1 + 0.2).dump(), "0.3");
  EXPECT_EQ(stable_number(1.0 / 3.0).dump(), "0.333333333333");
  EXPECT_TRUE(stable_number(std::nan("")).is_null());
  Json j{{"b", 1.0000000000001}, {"a", -0.0}};
  EXPECT_EQ(dump(j), "{\n  \"a\": 0.0,\n  \"b\": 1.0\n}\n");
}

TEST(Io, LatticeExports) {
  auto l = SubgroupLattice::build(parse_group("Z6"));
  auto dot = lattice_dot(l);
  EXPECT_EQ(std::count(dot.begin(), dot.end(), '['), 4);
  std::size_t edges = 0;
  for (std::size_t pos = 0; (pos = dot.find("->", pos)) != std::string::npos; ++pos) ++edges;
  EXPECT_EQ(edges, 4u);
  auto j = lattice_json(l);
  EXPECT_EQ(j["subgroups"].size(), 4u);
  EXPECT_EQ(j["covers"].size(), 4u);
  EXPECT_EQ(j["profile"]["boolean_rank"], 2);
}

TEST(Io, CharacterTableJson) {
  auto j = character_table_json(character_table(parse_group("S3")));
  EXPECT_EQ(j["classes"].size(), 3u);
  EXPECT_EQ(j["degrees"], Json({1, 1, 2}));
  EXPECT_EQ(j["classes"][1]["representative"], "(0 1)");
  EXPECT_EQ(j["characters"][2][0][0], 2.0);
  EXPECT_TRUE(j.contains("seed"));
  EXPECT_TRUE(j["tolerances"].contains("eigen"));
}

TEST(Io, ReportSchema) {
  Report r;
  r.suite = "ore";
  r.group = "Z2";
  auto j = report_json(r);
  for (const char* key :
       {"suite", "group", "interval", "verdict", "witness", "constants", "residual_max", "seed", "ms"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j["interval"].contains("low"));
  EXPECT_THROW(parse_format("xml"), ParseError);
}
