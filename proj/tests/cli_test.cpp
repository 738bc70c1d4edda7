// cli_test.cpp

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the installed binary end to end on the fixtures under samples/.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

const std::string kCli = ALPHARED_CLI_PATH;
const fs::path kSamples = ALPHARED_SAMPLES_DIR;

struct Proc {
  int status = -1;
  std::string out;
};

Proc run(const std::string &args) {
  const std::string cmd = "'" + kCli + "' " + args + " 2>/dev/null";
  Proc r;
  FILE *pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string q(const fs::path &p) { return "'" + p.string() + "'"; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("alphared_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

TEST_F(CliTest, ReducePairMergesIntermediateSymbols) {
  const fs::path out = dir_ / "out";
  const Proc r = run("reduce --pair " + q(kSamples / "pair/t1.fst") + " " +
                    q(kSamples / "pair/t2.fst") + " --out-dir " + q(out) +
                    " --report " + q(dir_ / "report.tsv"));
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(slurp(out / "t1.fst"), "0 1 a p\n0 1 b p\n1\n");
  EXPECT_EQ(slurp(out / "t2.fst"), "0 1 p z\n1\n");
  EXPECT_EQ(slurp(out / "cascade.lst"), "t1.fst\nt2.fst\n");
  const std::string report = slurp(dir_ / "report.tsv");
  EXPECT_NE(report.find("\n2\t2\t2\t2\t1\t2\t1\t1\t1\n"), std::string::npos) << report;
  EXPECT_NE(r.out.find("arcs 2 -> 1"), std::string::npos) << r.out;
}

TEST_F(CliTest, ReduceLeavesAnAllSingletonCascadeAlone) {
  const fs::path out = dir_ / "out";
  ASSERT_EQ(run("reduce --cascade " + q(kSamples / "identity/cascade.lst") + " --out-dir " +
                q(out)).status,
            0);
  for (const char *name : {"t1.fst", "t2.fst"})
    EXPECT_EQ(slurp(out / name), slurp(kSamples / "identity" / name)) << name;
}

TEST_F(CliTest, ReduceMissingManifestIsAUsageError) {
  EXPECT_EQ(run("reduce --cascade " + q(dir_ / "nope.lst") + " --out-dir " + q(dir_)).status, 2);
  EXPECT_EQ(run("reduce --out-dir " + q(dir_)).status, 2);
}

TEST_F(CliTest, ApplyIdentityAndAmbiguous) {
  Proc r = run("apply --cascade " + q(kSamples / "identity/cascade.lst") + " --input 'a b'");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "a b\n");
  r = run("apply --cascade " + q(kSamples / "ambiguous/cascade.lst") + " --input a");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "x\ny\n");
  r = run("apply --cascade " + q(kSamples / "ambiguous/cascade.lst") + " --input b");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, ApplyRejectsReservedTokens) {
  EXPECT_EQ(run("apply --cascade " + q(kSamples / "identity/cascade.lst") +
                " --input '<eps>'").status,
            2);
}

TEST_F(CliTest, VerifyAgainstItselfAndTheReduction) {
  const fs::path cascade = kSamples / "four_stage/cascade.lst";
  Proc r = run("verify --before " + q(cascade) + " --after " + q(cascade) + " --max-len 3");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out.rfind("equal: ", 0), 0u) << r.out;

  const fs::path out = dir_ / "out";
  ASSERT_EQ(run("reduce --cascade " + q(cascade) + " --out-dir " + q(out)).status, 0);
  r = run("verify --before " + q(cascade) + " --after " + q(out / "cascade.lst") +
          " --max-len 3 --probe");
  EXPECT_EQ(r.status, 0) << r.out;
}

TEST_F(CliTest, VerifyReportsAWitnessOnMismatch) {
  const fs::path out = dir_ / "out";
  ASSERT_EQ(run("reduce --cascade " + q(kSamples / "pair/cascade.lst") + " --out-dir " +
                q(out)).status,
            0);
  // Corrupt the reduced T2 so that p now maps to w.
  std::ofstream(out / "t2.fst") << "0 1 p w\n1\n";
  const Proc r = run("verify --before " + q(kSamples / "pair/cascade.lst") + " --after " +
                    q(out / "cascade.lst") + " --max-len 2");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("mismatch: input \"a\""), std::string::npos) << r.out;
}

TEST_F(CliTest, StatsRow) {
  std::ofstream(dir_ / "id.fst") << "0 1 a a\n1\n";
  const Proc r = run("stats --fst " + q(dir_ / "id.fst"));
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("\n1\t2\t1\t1\t1\t2\t1\t1\t1\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, GenIsDeterministic) {
  const std::string args = "gen --seed 9 --stages 3 --epsilon-prob 0.1 --out-dir ";
  ASSERT_EQ(run(args + q(dir_ / "a")).status, 0);
  ASSERT_EQ(run(args + q(dir_ / "b")).status, 0);
  for (const char *name : {"stage1.fst", "stage2.fst", "stage3.fst", "cascade.lst"})
    EXPECT_EQ(slurp(dir_ / "a" / name), slurp(dir_ / "b" / name)) << name;
  EXPECT_FALSE(slurp(dir_ / "a/stage1.fst").empty());
}

TEST_F(CliTest, GenRejectsBadParameters) {
  EXPECT_EQ(run("gen --seed 1 --stages 1 --out-dir " + q(dir_)).status, 2);
  EXPECT_EQ(run("gen --seed 1 --redundancy 2 --out-dir " + q(dir_)).status, 2);
  EXPECT_EQ(run("gen --out-dir " + q(dir_)).status, 2);
}

}  // namespace
