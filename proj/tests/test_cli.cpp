#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "bipro/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = bipro::cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, IntervalCounterexample) {
  auto r = run({"interval", "S4", "(0 1)"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "[S2,S4] not top Boolean; H-cyclic witness (0 1 2 3)");
  EXPECT_NE(r.out.find("linearly primitive"), std::string::npos);
}

TEST(Cli, IntervalJson) {
  auto r = run({"interval", "S4", "(0 1)", "--json"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["h_cyclic_witness"], "(0 1 2 3)");
  EXPECT_EQ(j["profile"]["top_boolean"], false);
}

TEST(Cli, LatticeTrivialGroup) {
  auto r = run({"lattice", "Z1", "--json"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["subgroups"].size(), 1u);
  EXPECT_EQ(j["covers"].size(), 0u);
}

TEST(Cli, LatticeDot) {
  auto r = run({"lattice", "Z6", "--format", "dot"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("digraph", 0), 0u);
  auto bad = run({"chartable", "Z6", "--format", "dot"});
  EXPECT_EQ(bad.code, 64);
}

TEST(Cli, ChartableAndFusion) {
  auto r = run({"chartable", "S3", "--json"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["degrees"], nlohmann::json({1, 1, 2}));
  auto f = run({"fusion", "S3"});
  ASSERT_EQ(f.code, 0);
  EXPECT_NE(f.out.find("chi2 x chi2 = chi0 + chi1 + chi2"), std::string::npos);
}

TEST(Cli, Chain) {
  auto r = run({"chain", "S3", "--mode", "top", "--json"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["length"], 2);
  EXPECT_EQ(run({"chain", "S3", "--mode", "sideways"}).code, 64);
}

TEST(Cli, TwoBoxDemo) {
  auto r = run({"twobox", "S3", "--demo", "--json"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["models"].size(), 2u);
  EXPECT_EQ(j["models"][0]["biprojection_ok"], true);
  EXPECT_EQ(run({"twobox", "S3"}).code, 64);
}

TEST(Cli, Verify) {
  auto r = run({"verify", "S3", "--json"});
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j.empty());
  auto one = run({"verify", "S3", "--suite", "ore", "--json"});
  for (const auto& rep : nlohmann::json::parse(one.out)) EXPECT_EQ(rep["suite"], "ore");
  EXPECT_EQ(run({"verify", "S3", "--suite", "nope"}).code, 64);
  EXPECT_EQ(run({"verify"}).code, 64);
}

TEST(Cli, VerifyByteIdentical) {
  auto a = run({"verify", "D4", "--json", "--seed", "5"});
  auto b = run({"verify", "D4", "--json", "--seed", "5"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, Catalogue) {
  auto r = run({"catalogue", "--list"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(static_cast<std::size_t>(std::count(r.out.begin(), r.out.end(), '\n')),
            bipro::default_catalogue().size());
}

TEST(Cli, ErrorCodes) {
  EXPECT_EQ(run({"lattice", "Nope"}).code, 64);
  EXPECT_EQ(run({"lattice", "S5", "--max-order", "50"}).code, 65);
  EXPECT_EQ(run({"lattice", "S4", "--max-subgroups", "5"}).code, 65);
  EXPECT_EQ(run({"frobnicate"}).code, 64);
  EXPECT_EQ(run({}).code, 64);
  EXPECT_EQ(run({"lattice", "S3", "--tol-eigen", "-1"}).code, 64);
  EXPECT_EQ(run({"interval", "S3", "(0 1 2 3)"}).code, 64);
}

TEST(Cli, EnvironmentOverrides) {
  ::setenv("BIPRO_FORMAT", "json", 1);
  auto r = run({"chartable", "Z2"});
  ::unsetenv("BIPRO_FORMAT");
  ASSERT_EQ(r.code, 0);
  EXPECT_NO_THROW(nlohmann::json::parse(r.out));
  ::setenv("BIPRO_MAX_ORDER", "10", 1);
  auto capped = run({"lattice", "S4"});
  ::unsetenv("BIPRO_MAX_ORDER");
  EXPECT_EQ(capped.code, 65);
}
