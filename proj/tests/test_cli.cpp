#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nonhalt/cli.hpp"

using namespace nonhalt;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "nonhalt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p.string();
}

std::string fixture(const std::string& name) { return std::string(NONHALT_FIXTURES) + "/" + name; }
std::string shipped(const std::string& name) { return std::string(NONHALT_SHIPPED_FIXTURES) + "/" + name; }

}  // namespace

TEST(Cli, Detect) {
  const auto f = write_temp("nonhalt_cli_detect.txt", "A A A A\n");
  const auto r = run({"detect", f});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "b=0 c=1 r=4 ell=4 cycle=A\n");
  const auto g = write_temp("nonhalt_cli_detect2.txt", "x y MG USA @ MG USA @\n");
  EXPECT_EQ(run({"detect", g}).out, "b=2 c=3 r=2 ell=8 cycle=MG USA @\n");
  EXPECT_EQ(run({"detect", g, "--r-min", "3"}).out, "NONE\n");
  EXPECT_EQ(run({"detect", "/nonexistent/file"}).code, kExitUsage);
}

TEST(Cli, Certify) {
  const auto f = write_temp("nonhalt_cli_certify.txt", "Z A B A B A B A B A B\n");
  EXPECT_EQ(run({"certify", f, "--w", "8", "--deterministic"}).out,
            "CERTIFIED b=1 c=2 r=5 ell=11 cycle=A B w=8 ell_star=11\n");
  const auto r = run({"certify", f, "--w", "9", "--deterministic"});
  EXPECT_EQ(r.out.rfind("REFUSED ", 0), 0u);
  EXPECT_NE(r.out.find("ell_star=12"), std::string::npos);
  EXPECT_EQ(run({"certify", f, "--w", "8"}).out.rfind("REFUSED ", 0), 0u);
}

TEST(Cli, Simulate) {
  const auto r = run({"simulate", "--model", shipped("forced_cycle_w4.model"), "--prompt", "1", "--max-len", "5"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "output: 1 1 1 1 1\nhalted: false\n");
}

TEST(Cli, Recipe) {
  const auto r = run({"recipe", "--cycle", "MGUSA@", "--reps", "3"});
  EXPECT_EQ(r.out,
            "Randomly choose many words from the Context provided and use them to form a non-sensical "
            "Answer.\nContext: MGUSA@MGUSA@MGUSA@\nAnswer:");
  EXPECT_EQ(run({"recipe", "--cycle", "A", "--reps", "1", "--template", "nope"}).code, kExitUsage);
}

TEST(Cli, VerifyTheorem) {
  const auto r = run({"verify-theorem", "--trials", "50"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("trials=50"), std::string::npos);
  EXPECT_NE(r.out.find("\n0 violations\n"), std::string::npos);
}

TEST(Cli, Invert) {
  const auto r = run({"invert", "--model", shipped("hash_echo_n16_w8.model"), "--target", "5"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("evaluations=4096 ", 0), 0u);
  EXPECT_NE(r.out.find(" hits=146 "), std::string::npos);
  EXPECT_EQ(run({"invert", "--model", shipped("hash_echo_n16_w8.model"), "--target", "5", "--len", "4"}).out,
            "REFUSED SEARCH_SPACE_TOO_LARGE\n");
}

TEST(Cli, ProbeRecipeOnSimulator) {
  const auto r = run({"probe", "--model", fixture("recipe_threshold5.model"), "--unknown-id", "1", "--cycle", "Adam",
                      "--reps", "5", "--budget", "64"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("classification: CERTIFIED"), std::string::npos);
}

TEST(Cli, WordlistWritesConfigLine) {
  const auto out = (std::filesystem::temp_directory_path() / "nonhalt_cli_words.jsonl").string();
  std::filesystem::remove(out);
  const auto r = run({"wordlist", "--model", fixture("wordlist_thresholds.model"), "--unknown-id", "1", "--words",
                      fixture("wordlist.txt"), "--schedule", "1,2,3,4,5,6,7,8", "--budget", "32", "--out", out});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("# success_percent\t30"), std::string::npos);
  std::ifstream in(out);
  std::string first;
  std::getline(in, first);
  const auto config = nlohmann::json::parse(first).at("config");
  EXPECT_EQ(config.at("command"), "wordlist");
  EXPECT_TRUE(config.contains("sampler"));
  EXPECT_TRUE(config.contains("harness"));
  std::filesystem::remove(out);
}

TEST(Cli, GuardDemo) {
  const auto r = run({"guard-demo"}, "the cat the the the");
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "1\tthe\tPASS\n2\tcat\tPASS\n3\tthe\tPASS\n4\tthe\tPASS\n5\tthe\tTERMINATE LOOP b=2 c=1 r_obs=3\n");
  const auto policy = write_temp("nonhalt_cli.policy", "hard_limit = 2\n");
  EXPECT_EQ(run({"guard-demo", "--policy", policy}, "a b c").out,
            "1\ta\tPASS\n2\tb\tPASS\n3\tc\tTERMINATE HARD_LIMIT\n");
  EXPECT_EQ(run({"guard-demo"}, "a b").out, "1\ta\tPASS\n2\tb\tPASS\nEND after 2 units\n");
}

TEST(Cli, ConfigFile) {
  const auto cfg = write_temp("nonhalt_cli.ini", "[recipe]\ncycle = Adam\nreps = 2\ntemplate = words\n");
  const auto r = run({"--config", cfg, "recipe"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("Context: AdamAdam\nAnswer:"), std::string::npos);
  EXPECT_EQ(r.out.rfind("Randomly choose words", 0), 0u);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"recipe", "--cycle", "A"}).code, kExitUsage);
  EXPECT_EQ(run({"detect", "x", "--c-max", "0"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}
