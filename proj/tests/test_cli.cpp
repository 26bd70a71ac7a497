#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
  int code;
  std::string out;
};

// stdout only; stderr is discarded
Run cli(const std::string& args) {
  std::string cmd = std::string(SIEGEL_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return {-1, {}};
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
  int st = pclose(f);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

using json = nlohmann::ordered_json;

}  // namespace

TEST(Cli, C4Example) {
  auto r = cli("c4 --matrix '[[2,0,0,0],[0,2,0,0],[0,0,6,0],[0,0,0,6]]'");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["case"], "chi_trivial_singleton");
  EXPECT_EQ(j["C4"]["coeff"], "-1536");
}

TEST(Cli, MassAtThree) {
  auto r = cli("mass --p 3");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["mass_prime"], "1/288");
  EXPECT_EQ(j["automorphisms"], 288);
}

TEST(Cli, FpolyMethodsAgree) {
  auto a = json::parse(cli("fpoly --matrix '[[2,0],[0,18]]' --p 3 --method closed").out);
  auto b = json::parse(cli("fpoly --matrix '[[2,0],[0,18]]' --p 3 --method series").out);
  EXPECT_EQ(a["F"], b["F"]);
}

TEST(Cli, VerifySuite) {
  auto r = cli("verify --suite thm41");
  EXPECT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["pass"], true);
}

TEST(Cli, TripleCsvIsDeterministic) {
  auto a = cli("--format csv triple 1 1 1"), b = cli("--format csv triple 1 1 1");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "B2,diff,p,degZ_coeff,status");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli("c4 --matrix '[[1,0],[0,2]]'").code, 2);
  EXPECT_EQ(cli("c4 --matrix 'oops'").code, 2);
  EXPECT_EQ(cli("verify --suite nosuch").code, 2);
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("gk --matrix '[[2,0],[0,2]]' --p 4").code, 2);
  EXPECT_EQ(cli("--format xml mass --p 3").code, 2);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, Unsupported) {
  // the ternary companion at 2 is not constructed
  EXPECT_EQ(cli("thm12 --matrix '[[2,0,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,2]]'").code, 3);
  EXPECT_EQ(cli("gk --matrix '[[2,0],[0,6]]' --p 2").code, 3);
}

TEST(Cli, ConfigFillsUnsetOptions) {
  auto path = std::filesystem::temp_directory_path() / "siegel_cli_test_config.json";
  {
    std::ofstream out(path);
    out << R"({"format": "csv", "max_ops": 1000})";
  }
  auto r = cli("--config " + path.string() + " mass --p 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 10), "key,value\n");
  // command line wins
  r = cli("--config " + path.string() + " --format json mass --p 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_NO_THROW(json::parse(r.out));
  // the tiny budget reaches the brute-force search
  EXPECT_EQ(cli("--config " + path.string() + " gk --brute --matrix '[[2,0],[0,162]]' --p 3").code, 3);
  std::filesystem::remove(path);
  EXPECT_EQ(cli("--config /nonexistent/x.json mass --p 3").code, 2);
}

TEST(Cli, TwoAdicReduction) {
  auto r = cli("fpoly --matrix '[[2,0,0,0],[0,2,0,0],[0,0,6,0],[0,0,0,6]]' --p 2 --method reduction");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["F(1/p^2)"], "8");
}
