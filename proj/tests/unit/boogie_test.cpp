// Copyright 2026 The bcc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bcc/boogie.hpp"

#include <gtest/gtest.h>
#include <signal.h>
#include <stdlib.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "support.hpp"

namespace bcc {
namespace {

using testing::ReadFile;
using testing::SourcePath;

const std::string kFixtureDir = SourcePath("fixtures/boogie-3.4.3");
const std::string kFake = SourcePath("tests/fake_boogie.sh");

struct FixtureCase {
  std::string name;
  int exit_code;
  std::string kind;
  std::size_t diagnostics;
};

std::vector<FixtureCase> LoadExpected() {
  std::vector<FixtureCase> out;
  std::istringstream in(ReadFile(kFixtureDir + "/expected.tsv"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    FixtureCase c;
    fields >> c.name >> c.exit_code >> c.kind >> c.diagnostics;
    out.push_back(c);
  }
  return out;
}

TEST(ClassifyOutput, FixturesMatchExpectedTable) {
  auto cases = LoadExpected();
  ASSERT_GE(cases.size(), 10u);
  for (const FixtureCase& c : cases) {
    std::string out = ReadFile(kFixtureDir + "/" + c.name + ".stdout");
    BoogieResult r = ClassifyOutput(c.exit_code, out, "");
    EXPECT_EQ(BoogieKindName(r.kind), c.kind) << c.name;
    EXPECT_EQ(r.diagnostics.size(), c.diagnostics) << c.name;
    BoogieResult again = ClassifyOutput(c.exit_code, out, "");
    EXPECT_EQ(again.kind, r.kind);
    EXPECT_EQ(again.diagnostics, r.diagnostics);
  }
}

TEST(ClassifyOutput, EveryFixtureIsListed) {
  auto cases = LoadExpected();
  std::set<std::string> listed;
  for (const auto& c : cases) listed.insert(c.name);
  for (const auto& e : std::filesystem::directory_iterator(kFixtureDir)) {
    if (e.path().extension() == ".stdout") {
      EXPECT_TRUE(listed.count(e.path().stem().string())) << e.path();
    }
  }
}

TEST(ClassifyOutput, DiagnosticPositions) {
  BoogieResult f = ClassifyOutput(1, ReadFile(kFixtureDir + "/failure.stdout"), "");
  ASSERT_EQ(f.kind, BoogieKind::kFailure);
  EXPECT_EQ(f.diagnostics[0], (Diagnostic{3, 3, "this assertion could not be proved"}));
  BoogieResult n = ClassifyOutput(1, ReadFile(kFixtureDir + "/name_error.stdout"), "");
  ASSERT_EQ(n.kind, BoogieKind::kNameError);
  EXPECT_EQ(n.diagnostics[0].message, "undeclared identifier: y");
}

TEST(ClassifyOutput, SummaryWinsOverDiagnostics) {
  EXPECT_EQ(ClassifyOutput(0, "finished with 1 verified, 0 errors", "").kind,
            BoogieKind::kCrash);  // no "Boogie program verifier" prefix
  EXPECT_EQ(ClassifyOutput(
                0, "Boogie program verifier finished with 3 verified, 0 errors\n", "")
                .kind,
            BoogieKind::kSuccess);
  EXPECT_EQ(ClassifyOutput(0, "x\r\nBoogie program verifier finished with 1 "
                              "verified, 0 errors\r\n", "").kind,
            BoogieKind::kSuccess);
}

TEST(ClassifyOutput, FailureNeedsAnAssertionDiagnostic) {
  EXPECT_EQ(ClassifyOutput(1, "Boogie program verifier finished with 0 verified, 1 error\n", "")
                .kind,
            BoogieKind::kCrash);
}

TEST(ClassifyOutput, StderrIsScanned) {
  EXPECT_EQ(ClassifyOutput(1, "", "f.bpl(1,1): Error: undeclared identifier: q\n").kind,
            BoogieKind::kNameError);
}

TEST(ClassifyOutput, EmptyOutputNonzeroExitIsCrash) {
  EXPECT_EQ(ClassifyOutput(1, "", "").kind, BoogieKind::kCrash);
  EXPECT_EQ(ClassifyOutput(0, "", "").kind, BoogieKind::kCrash);
}

TEST(ClassifyOutput, TotalOnArbitraryText) {
  std::mt19937_64 rng(5);
  const std::string alphabet = "Boogie program verifier finished with 0123456789(),: Error\n\r\t";
  for (int i = 0; i < 2000; ++i) {
    std::string s(rng() % 200, ' ');
    for (char& ch : s) ch = alphabet[rng() % alphabet.size()];
    BoogieResult r = ClassifyOutput(static_cast<int>(rng() % 3), s, s);
    EXPECT_NE(std::find(std::begin(kAllBoogieKinds), std::end(kAllBoogieKinds), r.kind),
              std::end(kAllBoogieKinds));
  }
}

TEST(PatternTable, RejectsMalformedTables) {
  EXPECT_THROW(PatternTable::Parse("summary x\n"), std::invalid_argument);
  EXPECT_THROW(PatternTable::Parse("diagnostic\tx\n"), std::invalid_argument);
  EXPECT_THROW(PatternTable::Parse("summary\t(\ndiagnostic\tx\n"), std::invalid_argument);
  EXPECT_THROW(PatternTable::Parse("summary\tx\ndiagnostic\tx\nbogus\ty\n"),
               std::invalid_argument);
  EXPECT_NO_THROW(PatternTable::Parse("# c\nsummary\tx\ndiagnostic\ty\n"));
  EXPECT_THROW(PatternTable::Builtin("0.0.1"), std::invalid_argument);
  EXPECT_EQ(PatternTable::BuiltinVersions(), std::vector<std::string>{"3.4.3"});
}

TEST(BoogieKind, NamesRoundtrip) {
  for (BoogieKind k : kAllBoogieKinds) {
    EXPECT_EQ(ParseBoogieKind(BoogieKindName(k)), k);
  }
  EXPECT_FALSE(ParseBoogieKind("success").has_value());
}

TEST(BoogieConfig, Validation) {
  BoogieConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.timeout_s = 0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg.timeout_s = 1;
  cfg.version = "9.9";
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
}

class FakeBoogie : public ::testing::Test {
 protected:
  void SetUp() override {
    cfg_.binary = kFake;
    cfg_.timeout_s = 10;
    dir_ = std::filesystem::temp_directory_path() /
           ("bcc-test-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
    cfg_.work_dir = dir_.string();
    input_ = (dir_ / "input.bpl").string();
    std::ofstream(input_) << "procedure main() {}\n";
  }
  void TearDown() override {
    ::unsetenv("FAKE_BOOGIE_MODE");
    std::filesystem::remove_all(dir_);
  }
  static bool ProcessGone(pid_t pid) {
    std::ifstream stat("/proc/" + std::to_string(pid) + "/stat");
    if (!stat) return true;
    std::string state;
    stat >> state >> state >> state;  // pid (comm) state
    return state == "Z";
  }
  static bool WaitGone(pid_t pid) {
    for (int i = 0; i < 100 && !ProcessGone(pid); ++i) ::usleep(20000);
    return ProcessGone(pid);
  }

  BoogieConfig cfg_;
  std::filesystem::path dir_;
  std::string input_;
};

TEST_F(FakeBoogie, ClassifiesReplayedFixture) {
  ::setenv("FAKE_BOOGIE_MODE", "fixture", 1);
  ::setenv("FAKE_BOOGIE_FIXTURE", (kFixtureDir + "/failure.stdout").c_str(), 1);
  ::setenv("FAKE_BOOGIE_EXIT", "1", 1);
  BoogieResult r = RunBoogie(input_, cfg_);
  EXPECT_EQ(r.kind, BoogieKind::kFailure);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.stdout_text, ReadFile(kFixtureDir + "/failure.stdout"));
  EXPECT_FALSE(r.killed);
}

TEST_F(FakeBoogie, ArgvAndScratchDirectory) {
  ::setenv("FAKE_BOOGIE_MODE", "args", 1);
  cfg_.flags = {std::string(kInferFlag), "/trace"};
  BoogieResult r = RunBoogie(input_, cfg_);
  EXPECT_EQ(r.kind, BoogieKind::kSuccess);
  std::string abs = std::filesystem::absolute(input_).string();
  EXPECT_NE(r.stdout_text.find("arg " + abs + "\narg /infer:j\narg /trace\n"),
            std::string::npos) << r.stdout_text;
  EXPECT_NE(r.stdout_text.find("cwd " + dir_.string() + "/bcc-"), std::string::npos);
  // Scratch directories are removed afterwards.
  int left = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir_)) {
    left += e.path().filename().string().rfind("bcc-", 0) == 0;
  }
  EXPECT_EQ(left, 0);
}

TEST_F(FakeBoogie, TimeoutKillsProcessTree) {
  ::setenv("FAKE_BOOGIE_MODE", "hang", 1);
  std::string pidfile = (dir_ / "pid").string();
  ::setenv("FAKE_BOOGIE_PIDFILE", pidfile.c_str(), 1);
  cfg_.timeout_s = 0.5;
  auto start = std::chrono::steady_clock::now();
  BoogieResult r = RunBoogie(input_, cfg_);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(r.kind, BoogieKind::kTimeout);
  EXPECT_TRUE(r.killed);
  EXPECT_LT(secs, 5.0);
  pid_t grandchild = std::stoi(ReadFile(pidfile));
  EXPECT_TRUE(WaitGone(grandchild));
}

TEST_F(FakeBoogie, OneMillisecondTimeout) {
  ::setenv("FAKE_BOOGIE_MODE", "hang", 1);
  ::setenv("FAKE_BOOGIE_PIDFILE", (dir_ / "pid").c_str(), 1);
  cfg_.timeout_s = 0.001;
  EXPECT_EQ(RunBoogie(input_, cfg_).kind, BoogieKind::kTimeout);
}

TEST_F(FakeBoogie, OrphanedDescendantIsKilled) {
  ::setenv("FAKE_BOOGIE_MODE", "orphan", 1);
  std::string pidfile = (dir_ / "pid").string();
  ::setenv("FAKE_BOOGIE_PIDFILE", pidfile.c_str(), 1);
  auto start = std::chrono::steady_clock::now();
  BoogieResult r = RunBoogie(input_, cfg_);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(r.kind, BoogieKind::kSuccess);
  EXPECT_LT(secs, 5.0);
  EXPECT_TRUE(WaitGone(std::stoi(ReadFile(pidfile))));
}

TEST_F(FakeBoogie, SignalDeathIsCrash) {
  ::setenv("FAKE_BOOGIE_MODE", "segv", 1);
  BoogieResult r = RunBoogie(input_, cfg_);
  EXPECT_EQ(r.kind, BoogieKind::kCrash);
  EXPECT_EQ(r.exit_code, 128 + SIGSEGV);
}

TEST_F(FakeBoogie, VerifyProgramWritesEmittedSource) {
  ::setenv("FAKE_BOOGIE_MODE", "args", 1);
  Program p = testing::LoadCorpus("success");
  BoogieResult r = VerifyProgram(p, cfg_);
  EXPECT_EQ(r.kind, BoogieKind::kSuccess);
  EXPECT_NE(r.stdout_text.find(".bpl\n"), std::string::npos);
}

TEST_F(FakeBoogie, MissingInputOrBinary) {
  EXPECT_THROW(RunBoogie((dir_ / "nope.bpl").string(), cfg_), std::invalid_argument);
  cfg_.binary = (dir_ / "no-such-boogie").string();
  EXPECT_THROW(RunBoogie(input_, cfg_), std::runtime_error);
}

TEST(ResolveBoogieBinary, ExplicitEnvAndPath) {
  EXPECT_EQ(ResolveBoogieBinary(kFake), kFake);
  EXPECT_FALSE(ResolveBoogieBinary("/nonexistent/boogie").has_value());
  ::setenv("BCC_BOOGIE", kFake.c_str(), 1);
  EXPECT_EQ(ResolveBoogieBinary(""), kFake);
  ::unsetenv("BCC_BOOGIE");
  EXPECT_EQ(ResolveBoogieBinary("sh").value_or("").rfind("/"), ResolveBoogieBinary("sh")->size() - 3);
}

}  // namespace
}  // namespace bcc
