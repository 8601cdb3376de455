#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <random>

#include "json.hpp"
#include "support.hpp"

#ifndef CARTIER_CLI_PATH
#error "CARTIER_CLI_PATH must point at the built cartier_cli"
#endif

using namespace cartier;
using namespace cartier::testing;
using json = nlohmann::ordered_json;

namespace {

struct Run {
  int status;
  std::string out;
};

// Runs the CLI with stderr folded into a separate capture.
Run cli(const std::string& args, bool capture_stderr = false) {
  std::string cmd = std::string(CARTIER_CLI_PATH) + " " + args + (capture_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int st = pclose(pipe);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

json cli_json(const std::string& args, int want_status = 0) {
  auto r = cli(args + " --json");
  EXPECT_EQ(r.status, want_status) << args;
  return json::parse(r.out);
}

}  // namespace

TEST(Cli, TauExample) {
  auto j = cli_json("tau --p 3 --vars x --twist x --f x --t 1/2");
  EXPECT_EQ(j["result"]["generators"], json::array({"x"}));
  EXPECT_EQ(j["certified"], true);
  EXPECT_EQ(j["stabilized_at_e"], 1);
}

TEST(Cli, JsonKeyOrder) {
  auto j = cli_json("tau --p 3 --vars x --f x --t 1");
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"p", "vars", "query", "result", "certified",
                                            "stabilized_at_e", "timings_ms"}));
  EXPECT_EQ(j["p"], 3);
  EXPECT_EQ(j["vars"], json::array({"x"}));
  EXPECT_TRUE(j["timings_ms"].empty());
}

TEST(Cli, JumpsExample) {
  auto j = cli_json("jumps --p 3 --vars x,y --f x^2*y --range 0..1 --max-denominator 12");
  EXPECT_EQ(j["result"]["jumps"], json::array({"1/2", "1"}));
}

TEST(Cli, ReproCuspCover) {
  auto r = cli("repro ex621");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("f^! R not F-pure: PASS\n"), std::string::npos) << r.out;
}

TEST(Cli, EveryReproPasses) {
  for (const char* t : {"ex712", "cor79", "prop38", "thm75", "lemma62"}) {
    auto j = cli_json(std::string("repro ") + t);
    EXPECT_EQ(j["result"]["passed"], true) << t;
    EXPECT_EQ(j["result"]["counts"]["fail"], 0) << t;
  }
}

TEST(Cli, ZeroIdealHasNoGenerators) {
  auto j = cli_json("tau --p 3 --vars x --twist 0 --f x --t 1/2");
  EXPECT_EQ(j["result"]["generators"], json::array());
}

TEST(Cli, Deterministic) {
  auto a = cli("vfilt --p 3 --vars x,y --f x^2+y^3 --range 0..1 --max-denominator 6 --json");
  auto b = cli("vfilt --p 3 --vars x,y --f x^2+y^3 --range 0..1 --max-denominator 6 --json");
  EXPECT_EQ(a.out, b.out);
  auto c = cli("check prop32 --seed 5 --cases 3 --json");
  auto d = cli("check prop32 --seed 5 --cases 3 --json");
  EXPECT_EQ(c.out, d.out);
  EXPECT_NE(c.out, cli("check prop32 --seed 6 --cases 3 --json").out);
}

TEST(Cli, ThreadsDoNotChangeOutput) {
  auto a = cli("jumps --p 3 --vars x,y --f x^2+y^3 --range 0..1 --max-denominator 12 --json");
  auto b = cli("jumps --p 3 --vars x,y --f x^2+y^3 --range 0..1 --max-denominator 12 --threads 3 --json");
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, Timings) {
  auto j = cli_json("tau --p 3 --vars x --f x --t 1 --timings");
  EXPECT_TRUE(j["timings_ms"].contains("tau"));
  auto human = cli("tau --p 3 --vars x --f x --t 1 --timings");
  EXPECT_NE(human.out.find("phase"), std::string::npos);
}

TEST(Cli, HumanOutputIsAligned) {
  auto r = cli("tau --p 3 --vars x --twist x --f x --t 1/2");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("tau              <x>\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("stabilized at e  1\n"), std::string::npos) << r.out;
}

TEST(Cli, VfiltAndGr) {
  auto v = cli_json("vfilt --p 3 --vars x --twist x --f x --range 0..2 --max-denominator 6");
  EXPECT_EQ(v["result"]["axioms_ok"], true);
  EXPECT_EQ(v["result"]["jumps"].size(), 2u);
  EXPECT_EQ(v["result"]["jumps"][0]["t"], "1/2");
  auto a = cli_json("gr --p 3 --vars x --twist x --f x --range 0..1 --max-denominator 6 --convention a");
  auto b = cli_json("gr --p 3 --vars x --twist x --f x --range 0..1 --max-denominator 6 --convention b");
  ASSERT_EQ(a["result"]["pieces"].size(), 1u);
  EXPECT_EQ(a["result"]["pieces"][0]["crystal_zero"], false);
  EXPECT_EQ(a["result"]["pieces"][0]["twist"], json::array({json::array({"x^2"})}));
  EXPECT_EQ(b["result"]["pieces"][0]["crystal_zero"], true);
}

TEST(Cli, FptAndRankTwo) {
  auto j = cli_json("fpt --p 5 --vars x,y --f x^2+y^3");
  EXPECT_EQ(j["result"]["fpt"], "4/5");
  auto r = cli_json("tau --p 3 --vars x --twist \"0,1;1,0\" --f x --t 1");
  EXPECT_EQ(r["result"]["rank"], 2);
  EXPECT_EQ(r["result"]["generators"].size(), 2u);
}

TEST(Cli, CheckSuite) {
  auto j = cli_json("check skoda --seed 3 --cases 4");
  EXPECT_EQ(j["result"]["passed"], true);
  EXPECT_EQ(j["result"]["items"].size(), 4u);
  EXPECT_EQ(j["query"]["seed"], 3);
}

TEST(Cli, ExitCodes) {
  auto bad_var = cli("tau --p 3 --vars x,y --f x^2*z --t 1", true);
  EXPECT_EQ(bad_var.status, 3);
  auto err = json::parse(bad_var.out);
  EXPECT_EQ(err["error"], "invalid_input");
  EXPECT_EQ(err["column"], 5);
  EXPECT_EQ(cli("tau --p 3 --vars x --f x --t 0.5").status, 3);
  EXPECT_EQ(cli("tau --p 4 --vars x --f x --t 1").status, 3);
  EXPECT_EQ(cli("vfilt --p 3 --vars x --twist x^2 --f x").status, 3);
  EXPECT_EQ(cli("tau --p 3 --vars x,y --rels x --twist x^2 --f x --c y --t 1/2").status, 3);
  EXPECT_EQ(cli("tau --p 2 --vars x --f x --t 1/83").status, 4);
  EXPECT_EQ(cli("check nope").status, 3);
  EXPECT_EQ(cli("repro ex999").status, 3);
  EXPECT_EQ(cli("").status, 3);
  EXPECT_EQ(cli("tau --help").status, 0);
}

TEST(Cli, EmitParseRoundTrip) {
  std::mt19937_64 rng(91);
  for (std::uint32_t p : {2u, 3u, 7u}) {
    Ring R(p, {"x", "y", "z"});
    for (int k = 0; k < 100; ++k) {
      auto f = random_poly(rng, R, 5, 6);
      EXPECT_EQ(P(R, f.to_string()), f) << f.to_string();
    }
  }
  // And through the CLI echo.
  auto j = cli_json("tau --p 5 --vars x,y --f \"3*x*y + x^2*y - 7\" --t 1/2");
  Ring R5(5, {"x", "y"});
  EXPECT_EQ(P(R5, j["query"]["f"].get<std::string>()), P(R5, "3*x*y + x^2*y - 7"));
}
