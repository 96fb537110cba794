#include <gtest/gtest.h>

#include <sstream>

#include "kanset/cli.hpp"

using kanset::Json;
using kanset::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json report() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(KANSET_SAMPLES_DIR) + "/" + name; }

}  // namespace

TEST(Cli, ValidateBuiltin) {
  auto r = run({"validate", "builtin:delta-2"});
  EXPECT_EQ(r.code, 0);
  auto j = r.report();
  EXPECT_EQ(j["schema"], "kanset.report/1");
  EXPECT_TRUE(j["result"]["valid"].get<bool>());
  EXPECT_EQ(j["inputs"][0]["ref"], "builtin:delta-2");
  EXPECT_FALSE(j.contains("wall_time"));
}

TEST(Cli, EveryBuiltinValidates) {
  for (const auto& [name, b] : kanset::cli::builtins()) {
    auto r = run({"validate", "builtin:" + name});
    EXPECT_EQ(r.code, 0) << name << r.err;
  }
}

TEST(Cli, BrokenIdentityFourExitsTwo) {
  auto r = run({"validate", sample("broken-identity-4.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("d_i s_i = id"), std::string::npos);
  EXPECT_FALSE(r.report()["result"]["valid"].get<bool>());
}

TEST(Cli, InputErrorsExitOne) {
  EXPECT_EQ(run({"validate", sample("does-not-exist.json")}).code, 1);
  EXPECT_EQ(run({"validate", sample("malformed.json")}).code, 1);
  EXPECT_EQ(run({"validate", "builtin:no-such-thing"}).code, 1);
  EXPECT_EQ(run({"analyze", "frobnicate", "builtin:point"}).code, 1);
  EXPECT_EQ(run({"analyze", "homology", "builtin:point", "--coeff", "Q"}).code, 1);
  EXPECT_EQ(run({"--bogus"}).code, 1);
  auto r = run({"validate", sample("does-not-exist.json")});
  EXPECT_EQ(r.report()["error"]["kind"], "input");
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, BudgetExitsThreeWithDimension) {
  auto r = run({"build", "em-space", "--group", "Z/2", "--n", "2", "--cap", "4", "--level-budget", "5"});
  EXPECT_EQ(r.code, 3);
  auto j = r.report();
  EXPECT_EQ(j["error"]["kind"], "budget");
  EXPECT_TRUE(j["error"]["dimension"].is_number_integer());
}

TEST(Cli, NonKanHomotopyGroupExitsFour) {
  auto r = run({"analyze", "homotopy-group", "builtin:boundary-2", "--basepoint", "(0)", "--dim", "1"});
  EXPECT_EQ(r.code, 4);
  auto j = r.report();
  EXPECT_FALSE(j["result"]["kan_passed"].get<bool>());
  EXPECT_FALSE(j["warnings"].empty());
  // a cap that cannot hold the question is also a degradation
  EXPECT_EQ(run({"analyze", "homotopy-group", "builtin:point", "--dim", "3"}).code, 4);
}

TEST(Cli, HelpListsBuiltins) {
  auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const auto& [name, b] : kanset::cli::builtins()) EXPECT_NE(r.out.find(name), std::string::npos) << name;
}

TEST(Cli, HomologyOfTwoSphere) {
  auto r = run({"analyze", "homology", "builtin:boundary-3", "--coeff", "Z", "--dim", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.report()["result"], Json::parse(R"({"free_rank":1,"torsion":[]})"));
  auto all = run({"analyze", "homology", "builtin:boundary-3", "--coeff", "Z/6"}).report();
  EXPECT_EQ(all["result"]["degrees"][1]["free_rank"], 0);
  EXPECT_EQ(all["result"]["degrees"][2]["torsion"], Json::parse("[6]"));
  EXPECT_TRUE(all["result"]["degrees"][3]["truncated"].get<bool>());
}

TEST(Cli, KanCounterexample) {
  auto j = run({"analyze", "kan", "builtin:horn-2-1", "--up-to", "1"}).report();
  EXPECT_FALSE(j["result"]["passed"].get<bool>());
  EXPECT_TRUE(j["result"]["counterexample"].is_object());
  EXPECT_TRUE(run({"analyze", "kan", "builtin:em-z2-1", "--up-to", "2"}).report()["result"]["passed"].get<bool>());
}

TEST(Cli, CompareSimSpec) {
  auto r = run({"analyze", "compare-sim-spec", "builtin:boundary-2", "--coeff", "Z/2", "--n", "1"});
  EXPECT_EQ(r.code, 0);
  auto res = r.report()["result"];
  EXPECT_TRUE(res["isomorphic"].get<bool>());
  EXPECT_EQ(res["h_spec"], res["h_sim"]);
  EXPECT_EQ(res["h_sim"]["torsion"], Json::parse("[2]"));
}

TEST(Cli, BuildProductWithPoint) {
  auto a = run({"build", "product", "builtin:point", "builtin:delta-1"}).report();
  auto b = run({"build", "standard-simplex", "--dim", "1", "--cap", "2"}).report();
  EXPECT_EQ(a["result"]["complex"]["level_sizes"], b["result"]["complex"]["level_sizes"]);
}

TEST(Cli, BuildEmSpaceMatchesLibrary) {
  auto j = run({"build", "em-space", "--group", "Z/2", "--n", "1", "--cap", "3"}).report();
  auto E = kanset::em_space(kanset::FinAbGroup::cyclic(2), 1, 3).complex;
  EXPECT_EQ(j["result"]["complex"]["level_sizes"], kanset::cli::level_sizes(*E));
  EXPECT_EQ(j["result"]["complex"]["level_sizes"][2], 4);
}

TEST(Cli, CompleteNonKanSkeleton) {
  auto r = run({"build", "complete", sample("horn-2-1-skeleton.json"), "--cap", "3"});
  EXPECT_EQ(r.code, 0);
  auto j = r.report();
  EXPECT_FALSE(j["result"]["skeleton_check"]["passed"].get<bool>());
  EXPECT_FALSE(j["warnings"].empty());
}

TEST(Cli, BuildRoundTripsThroughFile) {
  const std::string path = testing::TempDir() + "/cone.json";
  auto b = run({"build", "cone", "builtin:boundary-2", "-o", path});
  ASSERT_EQ(b.code, 0);
  auto v = run({"validate", path});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.report()["result"]["complex"]["digest"], b.report()["result"]["complex"]["digest"]);
}

TEST(Cli, TimingOnlyWhenAsked) {
  auto j = run({"analyze", "minimal", "builtin:em-z2-1", "--timing"}).report();
  EXPECT_TRUE(j.contains("wall_time"));
  EXPECT_TRUE(j["result"]["passed"].get<bool>());
}

TEST(Cli, DeterministicAcrossThreads) {
  for (std::vector<std::string> cmd :
       {std::vector<std::string>{"analyze", "kan", "builtin:em-z3-1"},
        std::vector<std::string>{"analyze", "homotopy-group", "builtin:em-z2z2-1", "--dim", "1"},
        std::vector<std::string>{"analyze", "compare-sim-spec", "builtin:boundary-3", "--coeff", "Z/2", "--n", "2"},
        std::vector<std::string>{"analyze", "matrix-lemma", "builtin:em-z2-1", "--count", "10"}}) {
    auto one = run(cmd);
    auto again = run(cmd);
    cmd.insert(cmd.end(), {"--threads", "4"});
    auto many = run(cmd);
    EXPECT_EQ(one.out, again.out);
    EXPECT_EQ(one.out, many.out);
  }
}

TEST(Cli, ExtraAnalyses) {
  EXPECT_TRUE(run({"analyze", "key-lemma", "builtin:em-z3-1"}).report()["result"]["passed"].get<bool>());
  EXPECT_TRUE(run({"analyze", "acyclicity", "builtin:boundary-3"}).report()["result"]["passed"].get<bool>());
  EXPECT_TRUE(run({"analyze", "additivity", "builtin:boundary-2", "builtin:delta-2"}).report()["result"]["passed"].get<bool>());
  EXPECT_TRUE(run({"analyze", "adjunction", "builtin:delta-1", "builtin:em-skeleton-z2-1"})
                  .report()["result"]["bijection"]
                  .get<bool>());
  auto ex = run({"analyze", "exactness", "builtin:em-z2-1", "--cap", "3"}).report();
  EXPECT_TRUE(ex["result"]["passed"].get<bool>());
  auto h = run({"analyze", "hurewicz", "builtin:em-z4-1", "--n", "1"});
  EXPECT_EQ(h.code, 0);
  EXPECT_TRUE(h.report()["result"]["passed"].get<bool>());
  auto s = run({"analyze", "spec-cohomology", "builtin:sphere-2", "--coeff", "Z/2", "--n", "2"}).report();
  EXPECT_EQ(s["result"]["h_spec"]["torsion"], Json::parse("[2]"));
}
