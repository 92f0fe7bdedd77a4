#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "bjb/bjb.hpp"

namespace {

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + BJB_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string run_stderr(const std::string& args) {
  const std::string cmd = std::string(BJB_CLI_PATH) + " " + args + " 2>&1 >/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  pclose(pipe);
  return out;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::string verify_args =
    "verify --family st:s=2,t=2,alpha=0.6 --lambda=-1 --b=0 --delta=1 --eps=0.1 --N=300 --k=1";

}  // namespace

TEST(Cli, VerifyWorkedExamplePasses) {
  const CliResult r = run(verify_args);
  EXPECT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_GE(ls.size(), 3u);
  EXPECT_EQ(ls[0], "# blockjacobi-bounds v1");
  EXPECT_EQ(ls[1], "index,measured,envelope,ratio,verdict");
  EXPECT_EQ(ls.size(), 2u + 270u);
  for (std::size_t i = 2; i < ls.size(); ++i) EXPECT_EQ(ls[i].substr(ls[i].rfind(',') + 1), "pass");
}

TEST(Cli, ExamplePhase) {
  const CliResult r = run("example --family st:s=3,t=3 --table=phase");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "ess_empty\n");
  EXPECT_EQ(run("example --family st:s=1,t=1 --table=phase").out, "ess_full_line\n");
  EXPECT_EQ(run("example --family st:s=1,t=4 --table=phase").out, "gap_unbounded\n");
}

TEST(Cli, BoundsFamilyFreeGammaIsExact) {
  const CliResult r = run("bounds --lambda=-1 --b=0 --delta=1 --eps=0.1");
  EXPECT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  std::istringstream row(ls[2]);
  std::vector<std::string> f;
  for (std::string x; std::getline(row, x, ',');) f.push_back(x);
  ASSERT_EQ(f.size(), 8u);
  EXPECT_EQ(std::stod(f[5]), bjb::gamma_rate({bjb::Complex(-1.0), 0.0, 1.0, 0.1}));
  EXPECT_EQ(std::stod(f[6]), 0.9);
}

TEST(Cli, BoundsEnvelopeTableAndJson) {
  const CliResult r = run("bounds --family st:s=2,t=2,alpha=0.6 --lambda=-1 --N 5 --k 1");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("lambda_re,lambda_im,index,partial_sum,envelope"), std::string::npos);
  const CliResult j = run("bounds --lambda=-2:-1:0.5 --b=0 --format json");
  EXPECT_EQ(j.status, 0);
  const auto doc = nlohmann::json::parse(j.out);
  ASSERT_EQ(doc.size(), 3u);
  EXPECT_DOUBLE_EQ(doc[2]["params"]["lambda_re"].get<double>(), -1.0);
}

TEST(Cli, GreenComplexLambda) {
  const CliResult r = run("green --family scalar-free --lambda=-3 --N 60 --k 1");
  EXPECT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 62u);
  EXPECT_NEAR(std::stod(ls[2].substr(ls[2].rfind(',') + 1)), (3.0 - std::sqrt(5.0)) / 2.0, 1e-12);
  EXPECT_EQ(run("green --family scalar-free --lambda=-2-1i --N 30").status, 0);
  EXPECT_EQ(run("green --family scalar-free --lambda=2i --N 30").status, 0);
  EXPECT_EQ(run("green --family scalar-free --lambda=-2x --N 30").status, 1);
}

TEST(Cli, EigsWithPerturbation) {
  const CliResult r = run("eigs --family st:s=1,t=4,alpha=0.6,b1shift=-10 --N 100 --tau 0.01");
  EXPECT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_GE(ls.size(), 3u);
  EXPECT_EQ(ls[1], "index,value,last_block_norm,boundary_suspect,dist_perturbed");
  EXPECT_GT(std::stod(ls[2].substr(ls[2].rfind(',') + 1)), 0.0);
}

TEST(Cli, ExampleTables) {
  const CliResult r = run("example --family st:s=2,t=2,alpha=0.6 --table=all --N 30 --format json");
  EXPECT_EQ(r.status, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["phase"], "gap_unbounded");
  EXPECT_EQ(doc["transfer"].size(), 29u);
  EXPECT_EQ(doc["levinson"].size(), 21u);
  EXPECT_DOUBLE_EQ(doc["jc"]["lower_bound"].get<double>(), 0.0);
  EXPECT_EQ(run("example --family st:s=2,t=2 --table=bogus").status, 1);
  EXPECT_EQ(run("example --family scalar-free --table=phase").status, 1);
}

TEST(Cli, VerifyModes) {
  EXPECT_EQ(run("verify --family st:s=2,t=2,alpha=0.6,b1shift=-10 --b 0 --N 120 --mode eigenvector").status, 0);
  EXPECT_EQ(run("verify --family diagonal-test --lambda=-1 --N 100 --mode commuting").status, 0);
  EXPECT_EQ(run("verify --family st:s=2,t=2,alpha=0.6 --lambda=-1 --N 100 --mode corollary").status, 0);
  EXPECT_EQ(run("verify --family st:s=1,t=4,alpha=0.6 --lambda=-1 --N 100 --mode commuting").status, 1);
  EXPECT_EQ(run("verify --family st:s=2,t=2,alpha=0.6 --N 100 --mode eigenvector").status, 1);
}

TEST(Cli, VerificationFailureExitsTwo) {
  // calibrating C deep in the tail, where the true decay has outrun the
  // envelope, makes the low indices fail
  const CliResult r = run("verify --family st:s=2,t=2,alpha=0.6 --lambda=-1 --b=0 --N=300 --calib=200:200");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find(",fail"), std::string::npos);
}

TEST(Cli, InputErrorsExitOne) {
  const std::vector<std::string> bad{
      "verify --family nosuch --lambda=-1 --b=0 --N 50",
      "verify --family st:s=2,t=2 --lambda=-1 --b=0 --N 10",
      "verify --family st:s=2,t=2 --lambda=1 --b=0 --N 50",
      "verify --family st:s=2,t=2 --lambda=-1 --b=0 --N 50 --eps 1.5",
      "verify --family st:s=2,t=2 --lambda=-1 --b=0 --N 50 --delta 0",
      "verify --family st:s=2,t=2 --lambda=-1 --b=0 --N 50 --calib 5",
      "verify --family /nonexistent.json --lambda=-1 --b=0 --N 50",
      "verify --family scalar-free:x=1 --lambda=-3 --N 50",
      "bounds --lambda=-1",
      "green --lambda=-1 --N 10",
      "verify --family st:s=2,t=2 --lambda=-1:0:-0.5 --b=0 --N 50",
      "--bogus",
      "",
  };
  for (const auto& args : bad) EXPECT_EQ(run(args).status, 1) << args;
  const std::string msg = run_stderr("verify --family nosuch --lambda=-1 --b=0 --N 50");
  EXPECT_EQ(std::count(msg.begin(), msg.end(), '\n'), 1) << msg;
  EXPECT_NE(msg.find("unknown family"), std::string::npos) << msg;
}

TEST(Cli, FamilyFile) {
  const std::string fam = std::string(BJB_SAMPLES_DIR) + "/families/two_by_two.json";
  const CliResult r = run("verify --family " + fam + " --lambda=-1 --N 40 --calib 1:10");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(run("verify --family " + fam + " --lambda=-1 --N 41").status, 1);  // table has 40 blocks
}

TEST(Cli, DeterministicFilesAcrossThreadCounts) {
  const std::string dir = ::testing::TempDir();
  const std::string args = "verify --family st:s=1,t=4,alpha=0.6 --lambda=-3:-0.5:0.25 --b=0 --N 80";
  ASSERT_EQ(run(args + " --out " + dir + "det1", "BJB_THREADS=1").status, 0);
  ASSERT_EQ(run(args + " --out " + dir + "det4", "BJB_THREADS=4").status, 0);
  ASSERT_EQ(run(args + " --out " + dir + "det4b", "BJB_THREADS=4").status, 0);
  for (int i = 0; i < 11; ++i) {
    const std::string a = slurp(dir + "det1_" + std::to_string(i) + ".csv");
    ASSERT_FALSE(a.empty()) << i;
    EXPECT_EQ(a, slurp(dir + "det4_" + std::to_string(i) + ".csv")) << i;
    EXPECT_EQ(a, slurp(dir + "det4b_" + std::to_string(i) + ".csv")) << i;
  }
  ASSERT_EQ(run(args + " --format json --out " + dir + "sum1", "BJB_THREADS=1").status, 0);
  ASSERT_EQ(run(args + " --format json --out " + dir + "sum3", "BJB_THREADS=3").status, 0);
  const std::string s1 = slurp(dir + "sum1.json");
  EXPECT_EQ(s1, slurp(dir + "sum3.json"));
  const auto doc = nlohmann::json::parse(s1);
  ASSERT_EQ(doc.size(), 11u);
  EXPECT_DOUBLE_EQ(doc[0]["params"]["lambda_re"].get<double>(), -3.0);
  EXPECT_DOUBLE_EQ(doc[10]["params"]["lambda_re"].get<double>(), -0.5);
  EXPECT_EQ(run(args, "BJB_THREADS=zero").status, 1);
}
