#include "orbitdh/cli.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace orbitdh::cli {
namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

Json invoke_json(std::vector<std::string> args) {
  const auto r = invoke(std::move(args));
  EXPECT_EQ(r.code, 0) << r.err;
  return Json::parse(r.out);
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(CliTest, DensityExample) {
  const auto j = invoke_json({"density", "--type", "A2", "--lambda", "1,1", "--mu", "0,0", "--out", "json"});
  EXPECT_EQ(j["schema"], "orbitdh/1");
  EXPECT_EQ(j["result"], (Json{{"num", "1"}, {"den", "1"}}));
  EXPECT_EQ(j["hull_position"], "interior");
}

TEST(CliTest, PartitionExample) {
  const auto j = invoke_json({"partition", "--type", "A2", "--x", "1,1", "--out", "json"});
  EXPECT_EQ(j["result"], "2");
  const auto csv = invoke({"partition", "--type", "A2", "--x", "1,1", "--out", "csv"});
  EXPECT_EQ(csv.out, "result\n2\n");
}

TEST(CliTest, ConvergeRejectsSU2Factor) {
  const auto r = invoke({"converge", "--type", "A1", "--lambda", "3", "--mu", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("A1"), std::string::npos) << r.err;
}

TEST(CliTest, ValidationErrorsExitWithTwo) {
  EXPECT_EQ(invoke({"density", "--type", "A2", "--lambda", "1,1", "--mu", "0,0", "--bogus"}).code, 2);
  EXPECT_EQ(invoke({"density", "--type", "A2", "--lambda", "1,x", "--mu", "0,0"}).code, 2);
  EXPECT_EQ(invoke({"density", "--type", "A2", "--lambda", "1/0,1", "--mu", "0,0"}).code, 2);
  EXPECT_EQ(invoke({"density", "--type", "A2", "--lambda", "1,1,1", "--mu", "0,0"}).code, 2);
  EXPECT_EQ(invoke({"density", "--type", "Q7", "--lambda", "1,1", "--mu", "0,0"}).code, 2);
  EXPECT_EQ(invoke({"density", "--type", "A2", "--lambda", "1,0", "--mu", "0,0"}).code, 2);
  EXPECT_EQ(invoke({"density", "--type", "A2", "--lambda", "1,1", "--mu", "0,0", "--out", "xml"}).code, 2);
  EXPECT_EQ(invoke({"density", "--type", "A2", "--lambda", "1,1"}).code, 2);
  EXPECT_EQ(invoke({"partition", "--type", "A2", "--x", "1/2,1"}).code, 2);
  EXPECT_EQ(invoke({"pfaffian-check", "--type", "A2", "--lambda", "0,1"}).code, 2);
  EXPECT_EQ(invoke({"sample-orbit", "--type", "B2", "--lambda", "1,1"}).code, 2);
  EXPECT_EQ(invoke({"grid", "--type", "A3", "--lambda", "1,1,1"}).code, 2);
  EXPECT_EQ(invoke({"converge", "--type", "A2", "--lambda", "2,1", "--mu", "2,1"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
}

TEST(CliTest, HelpExitsWithZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sample-orbit"), std::string::npos);
}

TEST(CliTest, EverySubcommandEmitsParseableJson) {
  const std::vector<std::vector<std::string>> cases = {
      {"roots", "--type", "G2"},
      {"weyl", "--type", "B2"},
      {"partition", "--type", "B2", "--x", "2,3"},
      {"volume", "--type", "A2", "--x", "3/2,1"},
      {"density", "--type", "G2", "--lambda", "1,2", "--mu", "1/2,0"},
      {"multiplicity", "--type", "B2", "--lambda", "2,1", "--mu", "0,1"},
      {"support", "--type", "A2", "--lambda", "1,1"},
      {"converge", "--type", "A2", "--lambda", "1,1", "--mu", "0,0", "--k-max", "6"},
      {"grid", "--type", "A2", "--lambda", "1,1", "--grid-resolution", "5"},
      {"sample-orbit", "--type", "A1", "--lambda", "1", "--samples", "2000", "--bins", "10", "--seed", "3"},
      {"pfaffian-check", "--type", "A3", "--lambda", "1,2,1"},
  };
  for (const auto& args : cases) {
    const auto j = invoke_json(args);
    EXPECT_EQ(j["schema"], "orbitdh/1") << args[0];
    EXPECT_EQ(j["command"], args[0]);
    EXPECT_EQ(Json::parse(j.dump()), j);
  }
}

TEST(CliTest, ResultsAgreeWithLibrary) {
  const auto vol = invoke_json({"volume", "--type", "A2", "--x", "3/2,1"});
  EXPECT_EQ(vol["result"], (Json{{"num", "1"}, {"den", "1"}}));  // min(b1, b2)
  const auto mult = invoke_json({"multiplicity", "--type", "A2", "--lambda", "1,1", "--mu", "0,0"});
  EXPECT_EQ(mult["result"], "2");
  EXPECT_EQ(mult["freudenthal"], "2");
  const auto weyl = invoke_json({"weyl", "--type", "G2"});
  EXPECT_EQ(weyl["order"], 12);
  EXPECT_EQ(weyl["longest_length"], 6);
  const auto support = invoke_json({"support", "--type", "A2", "--lambda", "1,1"});
  EXPECT_EQ(support["weights"].size(), 7u);
  EXPECT_EQ(support["dimension"], "8");
  const auto pf = invoke_json({"pfaffian-check", "--type", "B2", "--lambda", "2,3"});
  EXPECT_TRUE(pf["all_match"].get<bool>());
  EXPECT_EQ(pf["elements"].size(), 8u);
  const auto conv = invoke_json({"converge", "--type", "A2", "--lambda", "1,1", "--mu", "0,0", "--k-list", "1,2,4,8"});
  EXPECT_EQ(conv["rows"].size(), 4u);
  EXPECT_EQ(conv["rows"][3]["multiplicity"], "9");
  EXPECT_NEAR(conv["fitted_slope"].get<double>(), -1.0, 1e-9);
}

TEST(CliTest, GridCsvHasResolutionSquaredRows) {
  for (std::size_t res : {1u, 4u, 7u}) {
    const auto r = invoke({"grid", "--type", "B2", "--lambda", "1,1", "--grid-resolution", std::to_string(res),
                           "--out", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(count_lines(r.out), res * res + 1);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "mu1,mu2,density");
  }
  const auto j = invoke_json({"grid", "--type", "A2", "--lambda", "1,1", "--grid-resolution", "4"});
  EXPECT_EQ(j["points"].size(), 16u);
}

TEST(CliTest, DeterministicOutput) {
  const std::vector<std::string> grid = {"grid", "--type", "G2", "--lambda", "1,1", "--grid-resolution", "9"};
  const auto a = invoke(grid);
  const auto b = invoke(grid);
  EXPECT_EQ(a.out, b.out);
  auto threaded = grid;
  threaded.insert(threaded.end(), {"--threads", "3"});
  EXPECT_EQ(invoke(threaded).out, a.out);

  const std::vector<std::string> sample = {"sample-orbit", "--type", "A2", "--lambda", "1,1", "--samples", "5000",
                                           "--bins",       "8",      "--seed", "17", "--threads", "1"};
  const auto s1 = invoke(sample);
  auto sample4 = sample;
  sample4.back() = "4";
  EXPECT_EQ(s1.code, 0);
  EXPECT_EQ(invoke(sample4).out, s1.out);
  EXPECT_EQ(invoke(sample).out, s1.out);
}

TEST(CliTest, SampleOrbitCsv) {
  const auto r = invoke({"sample-orbit", "--type", "A2", "--lambda", "2,1", "--samples", "1000", "--bins", "6",
                         "--out", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 37u);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "c1,c2,count,frequency");
}

}  // namespace
}  // namespace orbitdh::cli
