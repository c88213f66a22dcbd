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

#include "bcc/consistency.hpp"

#include <gtest/gtest.h>
#include <stdlib.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bcc/generator.hpp"
#include "bcc/syntax.hpp"
#include "support.hpp"

namespace bcc {
namespace {

using testing::LoadCorpus;
using testing::ReadFile;
using testing::SourcePath;

struct Cell {
  ExecKind p;
  BoogieKind b;
  std::string mark;
};

std::vector<Cell> LoadMatrix() {
  std::istringstream in(ReadFile(SourcePath("tests/data/verdict_matrix.tsv")));
  std::string line;
  std::vector<BoogieKind> cols;
  std::vector<Cell> cells;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream f(line);
    std::string head;
    f >> head;
    std::string tok;
    if (head == "exec") {
      while (f >> tok) cols.push_back(*ParseBoogieKind(tok));
      continue;
    }
    ExecKind p = *ParseExecKind(head);
    for (BoogieKind b : cols) {
      f >> tok;
      cells.push_back({p, b, tok});
    }
  }
  return cells;
}

TEST(Check, MatchesGoldenMatrix) {
  auto cells = LoadMatrix();
  ASSERT_EQ(cells.size(), 30u);
  for (const Cell& c : cells) {
    Verdict v = Check(c.p, c.b);
    std::string got = v.kind == VerdictKind::kConsistent ? "ok"
                      : v.kind == VerdictKind::kMismatch ? "no"
                                                         : "?";
    EXPECT_EQ(got, c.mark) << ExecKindName(c.p) << " x " << BoogieKindName(c.b);
  }
}

TEST(Check, MismatchKinds) {
  EXPECT_EQ(Check(ExecKind::kFailure, BoogieKind::kSuccess).ToString(),
            "MISMATCH:SOUNDNESS");
  EXPECT_EQ(Check(ExecKind::kSuccess, BoogieKind::kFailure).ToString(),
            "MISMATCH:COMPLETENESS");
  EXPECT_EQ(Check(ExecKind::kLoop, BoogieKind::kFailure).ToString(),
            "MISMATCH:COMPLETENESS");
  EXPECT_EQ(Check(ExecKind::kLoop, BoogieKind::kSuccess).ToString(), "CONSISTENT");
  EXPECT_EQ(Check(ExecKind::kTimeout, BoogieKind::kSuccess).ToString(), "UNKNOWN");
  EXPECT_EQ(Check(ExecKind::kTimeout, BoogieKind::kNameError).ToString(),
            "MISMATCH:FRONTEND");
  EXPECT_EQ(Check(ExecKind::kNameError, BoogieKind::kTypeError).ToString(),
            "MISMATCH:FRONTEND");
}

TEST(Check, Extensions) {
  for (ExecKind p : kAllExecKinds) {
    Verdict crash = Check(p, BoogieKind::kCrash);
    EXPECT_EQ(crash.kind, VerdictKind::kUnknown);
    EXPECT_TRUE(crash.triage);
    EXPECT_EQ(Check(p, BoogieKind::kParseError).ToString(), "MISMATCH:FRONTEND");
  }
  for (BoogieKind b : {BoogieKind::kSuccess, BoogieKind::kFailure, BoogieKind::kTimeout}) {
    EXPECT_EQ(Check(ExecKind::kDivError, b).ToString(), "UNKNOWN");
  }
}

TEST(Check, TotalAndCharacterised) {
  for (ExecKind p : kAllExecKinds) {
    for (BoogieKind b : kAllBoogieKinds) {
      Verdict v = Check(p, b);
      EXPECT_EQ(v.mismatch.has_value(), v.kind == VerdictKind::kMismatch);
      EXPECT_EQ(v.triage, b == BoogieKind::kCrash);
      const bool soundness = v.mismatch == MismatchKind::kSoundness;
      const bool completeness = v.mismatch == MismatchKind::kCompleteness;
      EXPECT_EQ(soundness, p == ExecKind::kFailure && b == BoogieKind::kSuccess);
      EXPECT_EQ(completeness, (p == ExecKind::kSuccess || p == ExecKind::kLoop) &&
                                  b == BoogieKind::kFailure);
      auto back = Verdict::Parse(v.ToString());
      ASSERT_TRUE(back.has_value());
      EXPECT_EQ(*back, v);
    }
  }
  EXPECT_FALSE(Verdict::Parse("MISMATCH").has_value());
  for (std::string_view name : kAllVerdictNames) {
    EXPECT_EQ(Verdict::Parse(name)->ToString(), name);
  }
}

TEST(DetectConstantGuard, AlwaysAndNeverLoops) {
  EXPECT_EQ(DetectConstantGuard(LoadCorpus("always_loops")),
            (std::vector<ConstantGuard>{{"body[3]", true}}));
  auto never = DetectConstantGuard(LoadCorpus("never_loops"));
  ASSERT_FALSE(never.empty());
  EXPECT_EQ(never[0], (ConstantGuard{"body[2]", false}));
}

TEST(DetectConstantGuard, DeclinesAfterConditionalAssignment) {
  Program p = ParseSexpr(
      "(main (let (g = true : bool) ())"
      " (do (if (< 0 1) (do (:= g false) ()) ())"
      " (do (while g ()) ())))");
  EXPECT_TRUE(DetectConstantGuard(p).empty());
}

TEST(DetectConstantGuard, FoldsExpressionsAndForgetsLoopTargets) {
  Program p = ParseSexpr(
      "(main (let (x = 2 : int) (let (b = true : bool) ()))"
      " (do (:= x (* x 3))"
      " (do (while (> x 5) (do (:= b false) (do (while b ()) ())))"
      " (do (while b ()) ()))))");
  auto g = DetectConstantGuard(p);
  EXPECT_EQ(g, (std::vector<ConstantGuard>{{"body[1]", true}, {"body[1].body[1]", false}}));
}

// Splits "body[1].then[0].body[2]" into (field, index) steps.
std::vector<std::pair<std::string, std::size_t>> ParsePath(const std::string& loc) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::stringstream ss(loc);
  std::string part;
  while (std::getline(ss, part, '.')) {
    std::size_t lb = part.find('[');
    out.emplace_back(part.substr(0, lb), std::stoul(part.substr(lb + 1)));
  }
  return out;
}

// Inserts `probe` immediately before the statement at `path[k..]`.
Body InsertAt(const Body& body, const std::vector<std::pair<std::string, std::size_t>>& path,
              std::size_t k, const StmtPtr& probe) {
  std::vector<StmtPtr> stmts(body.begin(), body.end());
  std::size_t i = path[k].second;
  if (k + 1 == path.size()) {
    stmts.insert(stmts.begin() + static_cast<long>(i), probe);
    return Body(std::move(stmts));
  }
  const std::string& field = path[k + 1].first;
  const Stmt& s = *stmts[i];
  if (const auto* c = s.as<Stmt::If>()) {
    stmts[i] = field == "then"
                   ? IfStmt(c->cond, InsertAt(c->then_body, path, k + 1, probe), c->else_body)
                   : IfStmt(c->cond, c->then_body, InsertAt(c->else_body, path, k + 1, probe));
  } else {
    const auto* w = s.as<Stmt::While>();
    stmts[i] = WhileStmt(w->cond, InsertAt(w->body, path, k + 1, probe));
  }
  return Body(std::move(stmts));
}

const Stmt& StmtAt(const Program& p, const std::string& loc) {
  auto path = ParsePath(loc);
  const Body* body = &p.body;
  const Stmt* s = nullptr;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k > 0) {
      if (const auto* c = s->as<Stmt::If>()) {
        body = path[k].first == "then" ? &c->then_body : &c->else_body;
      } else {
        body = &s->as<Stmt::While>()->body;
      }
    }
    s = (*body)[path[k].second].get();
  }
  return *s;
}

TEST(DetectConstantGuard, SoundAgainstExecution) {
  BatchSpec spec;
  spec.count = 4000;
  spec.config.kind = GenKind::kTyped;
  spec.config.max_depth = 5;
  spec.config.seed = 77;
  const VarName flag("probe_flag");
  int reports = 0;
  int reached = 0;
  for (const GeneratedProgram& g : GenBatch(spec, 4)) {
    for (const ConstantGuard& guard : DetectConstantGuard(g.program)) {
      ++reports;
      const ExprPtr cond = StmtAt(g.program, guard.location).as<Stmt::While>()->cond;
      // If the guard disagrees with the report, set the flag.
      StmtPtr bad = AssignStmt(flag, IntLit(1));
      StmtPtr good = AssignStmt(flag, IntLit(2));
      StmtPtr probe = guard.value ? IfStmt(cond, Body{good}, Body{bad})
                                  : IfStmt(cond, Body{bad}, Body{good});
      Program q;
      q.locals = g.program.locals;
      q.locals.push_back({flag, TypeTag::kInt, Literal::Int(0)});
      q.body = InsertAt(g.program.body, ParsePath(guard.location), 0, probe);
      ASSERT_FALSE(CheckTypes(q).has_value());
      bool contradicted = false;
      bool hit = false;
      ExecConfig cfg;
      cfg.step_budget = 5000;
      cfg.observer = [&](uint64_t, const MachineTerm& t, const Decomposition&) {
        const Literal& v = t.env().Lookup(flag)->value;
        contradicted |= v == Literal::Int(1);
        hit |= v == Literal::Int(2);
      };
      Execute(q, cfg);
      ASSERT_FALSE(contradicted) << EmitSexpr(g.program) << " at " << guard.location;
      reached += hit;
    }
  }
  EXPECT_GT(reports, 200);
  EXPECT_GT(reached, 100);
}

class FakeVerifier : public ::testing::Test {
 protected:
  void SetUp() override {
    cfg_.binary = SourcePath("tests/fake_boogie.sh");
    cfg_.timeout_s = 10;
  }
  void TearDown() override { ::unsetenv("FAKE_BOOGIE_MODE"); }
  BoogieConfig cfg_;
};

TEST_F(FakeVerifier, RerunAddsInferenceFlag) {
  ::setenv("FAKE_BOOGIE_MODE", "args", 1);
  IncompletenessReport r = ClassifyIncompleteness(LoadCorpus("always_loops"), cfg_);
  EXPECT_NE(r.rerun.stdout_text.find("arg /infer:j\n"), std::string::npos);
  EXPECT_EQ(r.proxy, IncompletenessClass::kAnnotationProxy);
  EXPECT_EQ(r.Final(), IncompletenessClass::kAnnotationProxy);
  cfg_.flags = {"/infer:j"};
  r = ClassifyIncompleteness(LoadCorpus("always_loops"), cfg_);
  EXPECT_EQ(r.rerun.stdout_text.find("arg /infer:j\narg /infer:j"), std::string::npos);
}

TEST_F(FakeVerifier, StillFailingIsReasoningProxy) {
  ::setenv("FAKE_BOOGIE_MODE", "fixture", 1);
  ::setenv("FAKE_BOOGIE_FIXTURE",
           SourcePath("fixtures/boogie-3.4.3/failure.stdout").c_str(), 1);
  ::setenv("FAKE_BOOGIE_EXIT", "1", 1);
  IncompletenessReport r = ClassifyIncompleteness(LoadCorpus("always_loops"), cfg_);
  EXPECT_EQ(r.Final(), IncompletenessClass::kReasoningProxy);
  // A constant-false guard upgrades the class regardless of the rerun.
  r = ClassifyIncompleteness(LoadCorpus("never_loops"), cfg_);
  EXPECT_EQ(r.proxy, IncompletenessClass::kReasoningProxy);
  EXPECT_EQ(r.Final(), IncompletenessClass::kReasoningStatic);
}

TEST_F(FakeVerifier, RerunTimeoutIsIndeterminate) {
  ::setenv("FAKE_BOOGIE_MODE", "hang", 1);
  ::setenv("FAKE_BOOGIE_PIDFILE", "/dev/null", 1);
  cfg_.timeout_s = 0.2;
  IncompletenessReport r = ClassifyIncompleteness(LoadCorpus("always_loops"), cfg_);
  EXPECT_EQ(r.proxy, IncompletenessClass::kIndeterminate);
  EXPECT_EQ(r.Final(), IncompletenessClass::kIndeterminate);
}

TEST(IncompletenessClass, NamesRoundtrip) {
  for (auto c : {IncompletenessClass::kAnnotationProxy, IncompletenessClass::kReasoningProxy,
                 IncompletenessClass::kReasoningStatic, IncompletenessClass::kIndeterminate}) {
    EXPECT_EQ(ParseIncompletenessClass(IncompletenessClassName(c)), c);
  }
}

}  // namespace
}  // namespace bcc
