#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rfib");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = rfib::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) v.push_back(line);
  return v;
}

}  // namespace

TEST(Cli, GrowthReport) {
  const auto r = run({"growth", "--k", "3", "--p", "1/2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["rate"].get<double>(), 1.20556943, 1e-8);
  EXPECT_NEAR(j["p_c"]["decimal"].get<double>(), 0.25, 1e-15);
  EXPECT_EQ(j["regime"], "supercritical");
  EXPECT_EQ(j["k"], 3);
  EXPECT_TRUE(j["alpha_k"].contains("lo"));
  EXPECT_LT(j["rate_error_bound"].get<double>(), 1e-12);
}

TEST(Cli, GrowthLargeLambda) {
  const auto r = run({"growth", "--lambda", "2", "--p", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["rate"].get<double>(), 1 + std::sqrt(2.0), 1e-14);
  EXPECT_EQ(j["regime"], "large_lambda");
  EXPECT_EQ(run({"growth", "--lambda", "2", "--p", "0"}).code, 2);
}

TEST(Cli, ExpectBruteSmallCase) {
  const auto r = run({"expect", "--k", "3", "--p", "1/2", "--a", "1", "--b", "1", "--n", "4", "--method", "brute"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], "n,exact,decimal,ratio");
  EXPECT_EQ(l[3].substr(0, 9), "4,\"3/2\",1");
}

TEST(Cli, ExpectMethodsAgree) {
  const std::vector<std::string> base = {"expect", "--k", "5", "--p", "1/3", "--a", "1", "--b", "lambda", "--n", "12"};
  std::vector<std::string> outputs;
  for (const char* m : {"brute", "reduced", "decomp"}) {
    auto args = base;
    args.push_back("--method");
    args.push_back(m);
    const auto r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    outputs.push_back(r.out);
  }
  EXPECT_EQ(outputs[0], outputs[1]);
  EXPECT_EQ(outputs[0], outputs[2]);
}

TEST(Cli, ExpectWithLambda) {
  const auto brute = run({"expect", "--lambda", "5/2", "--p", "3/5", "--a", "4", "--b", "1", "--n", "10", "--method", "brute"});
  const auto decomp = run({"expect", "--lambda", "5/2", "--p", "3/5", "--a", "4", "--b", "1", "--n", "10", "--method", "decomp"});
  ASSERT_EQ(brute.code, 0) << brute.err;
  EXPECT_EQ(brute.out, decomp.out);
  EXPECT_EQ(run({"expect", "--lambda", "3", "--p", "1/2", "--n", "5", "--method", "reduced"}).code, 2);
}

TEST(Cli, TriangleRows) {
  const auto r = run({"triangle", "--k", "4", "--rows", "17"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 18u);
  EXPECT_EQ(l[0], "n,m0,m1,m2,m3,m4");
  EXPECT_EQ(l[9], "8,1,5,4");
  EXPECT_EQ(l[13], "12,1,9,30,22");
  EXPECT_EQ(l[17], "16,1,13,72,200,140");
}

TEST(Cli, LeftBranchCsv) {
  const auto r = run({"leftbranch", "--k", "3", "--a", "1", "--b", "1", "--n", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 7u);
  EXPECT_EQ(l[0], "n,ell,ell_exact,R");
  EXPECT_EQ(l[3].substr(0, 2), "3,");
}

TEST(Cli, SimulateIsReproducible) {
  const std::vector<std::string> args = {"simulate", "--k", "3", "--p", "1/2", "--n", "20", "--paths", "5000", "--seed", "9"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["paths"], 5000);
  EXPECT_TRUE(j["jensen"]["gap_nonnegative"].get<bool>());
}

TEST(Cli, VerifyPasses) {
  const auto r = run({"verify", "--k", "3", "4", "--p", "1/2", "--n", "10"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("passed"), std::string::npos);
}

TEST(Cli, ScanCsv) {
  const auto r = run({"scan", "--k", "3", "--p-grid", "0:1:1/10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 12u);
  EXPECT_EQ(l[0], "p,p_c,regime,rate");
  EXPECT_NE(l[3].find("subcritical"), std::string::npos);   // p = 1/5
  EXPECT_NE(l[11].find("supercritical"), std::string::npos);  // p = 1
}

TEST(Cli, OutputFile) {
  const std::string path = ::testing::TempDir() + "rfib_cli_triangle.csv";
  const auto r = run({"--output", path, "triangle", "--k", "3", "--rows", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "n,m0,m1");
  std::remove(path.c_str());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"growth", "--k", "3"}).code, 2);
  EXPECT_EQ(run({"growth", "--k", "3", "--p", "3/2"}).code, 2);
  EXPECT_EQ(run({"growth", "--k", "2", "--p", "1/2"}).code, 2);
  EXPECT_EQ(run({"growth", "--k", "3", "--p", "abc"}).code, 2);
  EXPECT_EQ(run({"expect", "--k", "4", "--p", "1/2", "--n", "5", "--method", "magic"}).code, 2);
  EXPECT_EQ(run({"expect", "--k", "4", "--p", "1/2", "--a", "0", "--b", "0", "--n", "5"}).code, 2);
  EXPECT_EQ(run({"scan", "--k", "3", "--p-grid", "1:0:1/10"}).code, 2);
  EXPECT_EQ(run({"simulate", "--k", "3", "--paths", "0"}).code, 2);
}

TEST(Cli, ResourceErrorsExitOne) {
  const auto r = run({"expect", "--k", "4", "--p", "1/2", "--n", "40", "--method", "brute"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("budget"), std::string::npos);
}
