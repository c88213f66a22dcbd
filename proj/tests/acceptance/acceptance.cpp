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

// Acceptance checks. Prints one PASS / FAIL / SKIP line per criterion and
// exits nonzero if any criterion fails.

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "bcc/boogie.hpp"
#include "bcc/campaign.hpp"
#include "bcc/consistency.hpp"
#include "bcc/executor.hpp"
#include "bcc/generator.hpp"
#include "bcc/judgments.hpp"
#include "bcc/syntax.hpp"
#include "oracles/big_step.hpp"
#include "support.hpp"

namespace {

namespace fs = std::filesystem;
using namespace bcc;
using bcc::testing::LoadCorpus;
using bcc::testing::ReadFile;
using bcc::testing::SourcePath;

enum class Status { kPass, kFail, kSkip };

struct Line {
  Status status;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string Secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

int Threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < Threads(); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) body(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

std::vector<GeneratedProgram> Batch(GenKind kind, int depth, uint64_t count,
                                    uint64_t seed, bool loops = true) {
  BatchSpec spec;
  spec.count = count;
  spec.config.kind = kind;
  spec.config.max_depth = depth;
  spec.config.seed = seed;
  if (!loops) spec.config.op_weights.while_stmt = 0;
  return GenBatch(spec, Threads());
}

Line GoldenCorpus() {
  const std::pair<const char*, ExecKind> expected[] = {
      {"success", ExecKind::kSuccess},       {"failure", ExecKind::kFailure},
      {"name_error", ExecKind::kNameError},  {"type_error", ExecKind::kTypeError},
      {"loop", ExecKind::kLoop},             {"timeout", ExecKind::kTimeout}};
  auto start = Clock::now();
  int ok = 0;
  std::string bad;
  ExecConfig cfg;
  cfg.step_budget = 100000;
  for (const auto& [name, want] : expected) {
    ExecKind got = Execute(LoadCorpus(name), cfg).kind;
    if (got == want) {
      ++ok;
    } else {
      bad += std::string(" ") + name + "->" + std::string(ExecKindName(got));
    }
  }
  double t = Since(start);
  bool pass = ok == 6 && t < 5;
  return {pass ? Status::kPass : Status::kFail,
          std::to_string(ok) + "/6 outcomes match" + bad + " in " + Secs(t) + " (limit 5 s)"};
}

Line ProgressPreservation() {
  auto start = Clock::now();
  auto programs = Batch(GenKind::kTyped, 7, 10000, 2024);
  std::atomic<uint64_t> judgment{0}, stuck{0}, env_violations{0}, residual_violations{0};
  std::atomic<uint64_t> steps{0};
  ParallelFor(programs.size(), [&](std::size_t i) {
    const Program& p = programs[i].program;
    if (CheckTypes(p)) {
      ++judgment;
      return;
    }
    ExecConfig cfg;
    uint64_t local_steps = 0;
    cfg.observer = [&](uint64_t step, const MachineTerm& t, const Decomposition&) {
      ++local_steps;
      for (const Binding& b : t.env().bindings()) {
        if (b.value.type() != b.declared_type) ++env_violations;
      }
      if (step < 32 || step % 1024 == 0) {
        if (CheckTypes(t.ToProgram())) ++residual_violations;
      }
    };
    try {
      Execute(p, cfg);
    } catch (const ProgressViolation&) {
      ++stuck;
    }
    steps += local_steps;
  });
  double t = Since(start);
  bool pass = programs.size() == 10000 && judgment == 0 && stuck == 0 &&
              env_violations == 0 && residual_violations == 0 && t < 300;
  return {pass ? Status::kPass : Status::kFail,
          std::to_string(programs.size()) + " TYPED depth-7 programs, " +
              std::to_string(steps.load()) + " steps: " + std::to_string(judgment.load()) +
              " judgment failures, " + std::to_string(stuck.load()) + " STUCK, " +
              std::to_string(env_violations.load()) + " env type violations, " +
              std::to_string(residual_violations.load()) + " ill-typed residuals; " +
              Secs(t) + " (limit 300 s)"};
}

Line OracleEquivalence() {
  auto start = Clock::now();
  auto programs = Batch(GenKind::kTyped, 7, 1000, 99, /*loops=*/false);
  std::atomic<uint64_t> agree{0};
  ParallelFor(programs.size(), [&](std::size_t i) {
    const Program& p = programs[i].program;
    ExecKind small = Execute(p).kind;
    oracle::BigStepOutcome big = oracle::BigStep(p).Run();
    const bool same = (big == oracle::BigStepOutcome::kSuccess && small == ExecKind::kSuccess) ||
                      (big == oracle::BigStepOutcome::kFailure && small == ExecKind::kFailure) ||
                      (big == oracle::BigStepOutcome::kDivByZero && small == ExecKind::kDivError);
    agree += same;
  });
  double t = Since(start);
  bool pass = programs.size() == 1000 && agree == 1000 && t < 60;
  return {pass ? Status::kPass : Status::kFail,
          std::to_string(agree.load()) + "/" + std::to_string(programs.size()) +
              " loop-free programs agree with the big-step evaluator in " + Secs(t) +
              " (limit 60 s)"};
}

Line DistributionBands() {
  auto start = Clock::now();
  std::vector<GeneratedProgram> programs = Batch(GenKind::kTyped, 5, 10000, 5005);
  for (auto& g : Batch(GenKind::kTyped, 7, 10000, 7007)) programs.push_back(std::move(g));
  std::vector<ExecKind> kinds(programs.size());
  ParallelFor(programs.size(), [&](std::size_t i) { kinds[i] = Execute(programs[i].program).kind; });
  std::map<ExecKind, uint64_t> count;
  for (ExecKind k : kinds) ++count[k];
  const uint64_t n = programs.size();
  auto frac = [&](ExecKind k) { return static_cast<double>(count[k]) / static_cast<double>(n); };
  const double failure = frac(ExecKind::kFailure);
  const double loop = frac(ExecKind::kLoop);
  const double timeout = frac(ExecKind::kTimeout);
  const bool pass = n >= 20000 && failure >= 0.55 && failure <= 0.80 && loop >= 0.20 &&
                    loop <= 0.45 && timeout < 0.03;
  std::string detail = std::to_string(n) + " TYPED programs at depths {5,7}:";
  for (ExecKind k : kAllExecKinds) {
    detail += " " + std::string(ExecKindName(k)) + " " + Percent(count[k], n) + "%";
  }
  detail += " (bands: FAILURE [55,80], LOOP [20,45], TIMEOUT < 3); " + Secs(Since(start));
  return {pass ? Status::kPass : Status::kFail, detail};
}

Line VerdictMatrix() {
  std::istringstream in(ReadFile(SourcePath("tests/data/verdict_matrix.tsv")));
  std::string line;
  std::vector<BoogieKind> cols;
  int cells = 0;
  int ok = 0;
  std::string bad;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream f(line);
    std::string head, tok;
    f >> head;
    if (head == "exec") {
      while (f >> tok) cols.push_back(*ParseBoogieKind(tok));
      continue;
    }
    ExecKind p = *ParseExecKind(head);
    for (BoogieKind b : cols) {
      f >> tok;
      Verdict v = Check(p, b);
      std::string got = v.kind == VerdictKind::kConsistent ? "ok"
                        : v.kind == VerdictKind::kMismatch ? "no"
                                                           : "?";
      ++cells;
      if (got == tok) {
        ++ok;
      } else {
        bad += " " + head + "x" + std::string(BoogieKindName(b));
      }
    }
  }
  return {cells == 30 && ok == 30 ? Status::kPass : Status::kFail,
          std::to_string(ok) + "/" + std::to_string(cells) + " cells match" + bad};
}

Line Determinism() {
  auto start = Clock::now();
  fs::path root = fs::temp_directory_path() / ("bcc-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  auto run = [&](const std::string& name, int workers) {
    CampaignConfig c = CampaignConfig::Parse(
        "seed = 42\nmatrix.kinds = FORMED,NAMED,TYPED\nmatrix.depths = 3,5,7\n"
        "matrix.count = 300\nwrite_programs = false\n");
    c.output_dir = (root / name).string();
    c.gen_workers = c.exec_workers = workers;
    RunCampaign(c);
    return CanonicalLog((root / name / "results.jsonl").string());
  };
  auto a = run("a", 1);
  auto b = run("b", 1);
  auto c = run("c", 8);
  bool identical = a == b;
  auto sa = a;
  auto sc = c;
  std::sort(sa.begin(), sa.end());
  std::sort(sc.begin(), sc.end());
  bool multiset = sa == sc;
  fs::remove_all(root);
  return {identical && multiset && a.size() == 2700 ? Status::kPass : Status::kFail,
          std::to_string(a.size()) + " records; repeat run " +
              (identical ? "byte-identical" : "DIFFERS") + "; 1 vs 8 workers " +
              (multiset ? "same multiset" : "DIFFERENT multiset") + "; " + Secs(Since(start))};
}

std::optional<std::string> Boogie() { return ResolveBoogieBinary(""); }

Line FrontEndAgreement() {
  std::optional<std::string> binary = Boogie();
  if (!binary) return {Status::kSkip, "no Boogie binary (set BCC_BOOGIE or put boogie on PATH)"};
  auto start = Clock::now();
  BoogieConfig cfg;
  cfg.binary = *binary;
  auto programs = Batch(GenKind::kFormed, 5, 1000, 71);
  for (auto& g : Batch(GenKind::kNamed, 5, 1000, 72)) programs.push_back(std::move(g));
  std::atomic<uint64_t> agree{0}, crash{0};
  std::mutex m;
  std::vector<std::string> disagreements;
  ParallelFor(programs.size(), [&](std::size_t i) {
    const Program& p = programs[i].program;
    std::optional<JudgmentError> err = CheckTypes(p);
    BoogieResult r = VerifyProgram(p, cfg);
    if (r.kind == BoogieKind::kCrash) {
      ++crash;
      return;
    }
    bool same;
    if (!err) {
      same = r.kind == BoogieKind::kSuccess || r.kind == BoogieKind::kFailure ||
             r.kind == BoogieKind::kTimeout;
    } else if (err->kind == JudgmentError::Kind::kNameError) {
      same = r.kind == BoogieKind::kNameError;
    } else {
      same = r.kind == BoogieKind::kTypeError;
    }
    if (same) {
      ++agree;
    } else {
      std::lock_guard<std::mutex> lock(m);
      disagreements.push_back(EmitSexpr(p));
    }
  });
  const uint64_t non_crash = programs.size() - crash;
  return {agree == non_crash && non_crash > 0 ? Status::kPass : Status::kFail,
          std::to_string(agree.load()) + "/" + std::to_string(non_crash) +
              " non-CRASH runs agree (" + std::to_string(crash.load()) + " CRASH); " +
              Secs(Since(start))};
}

Line DifferentialDeskRun() {
  std::optional<std::string> binary = Boogie();
  if (!binary) return {Status::kSkip, "no Boogie binary (set BCC_BOOGIE or put boogie on PATH)"};
  auto start = Clock::now();
  BoogieConfig cfg;
  cfg.binary = *binary;
  auto programs = Batch(GenKind::kTyped, 7, 5000, 8080);
  std::atomic<uint64_t> soundness{0}, completeness{0}, reproduced{0};
  ParallelFor(programs.size(), [&](std::size_t i) {
    const Program& p = programs[i].program;
    Verdict v = Check(Execute(p).kind, VerifyProgram(p, cfg).kind);
    if (v.mismatch == MismatchKind::kSoundness) ++soundness;
    if (v.mismatch == MismatchKind::kCompleteness) {
      ++completeness;
      // Reproduce in isolation from the emitted file.
      fs::path dir = fs::temp_directory_path() /
                     ("bcc-acc-" + std::to_string(::getpid()) + "-" + std::to_string(i));
      fs::create_directories(dir);
      std::ofstream(dir / "p.sexpr") << EmitSexpr(p) << "\n";
      Program again = ParseSexpr(ReadFile((dir / "p.sexpr").string()));
      Verdict w = Check(Execute(again).kind, VerifyProgram(again, cfg).kind);
      reproduced += w.mismatch == MismatchKind::kCompleteness;
      fs::remove_all(dir);
    }
  });
  auto fig = [&](const char* name, ExecKind want_exec, IncompletenessClass want) {
    Program p = LoadCorpus(name);
    Verdict v = Check(Execute(p).kind, VerifyProgram(p, cfg).kind);
    bool ok = Execute(p).kind == want_exec && v.mismatch == MismatchKind::kCompleteness;
    IncompletenessClass got = IncompletenessClass::kIndeterminate;
    if (ok) got = ClassifyIncompleteness(p, cfg).Final();
    return std::make_pair(ok && got == want, std::string(name) + ": " + v.ToString() + " / " +
                                                 std::string(IncompletenessClassName(got)));
  };
  auto [a_ok, a_detail] = fig("always_loops", ExecKind::kLoop, IncompletenessClass::kAnnotationProxy);
  auto [b_ok, b_detail] = fig("never_loops", ExecKind::kSuccess, IncompletenessClass::kReasoningStatic);
  const bool pass = soundness == 0 && reproduced == completeness && a_ok && b_ok;
  return {pass ? Status::kPass : Status::kFail,
          std::to_string(programs.size()) + " TYPED depth-7 programs: " +
              std::to_string(soundness.load()) + " SOUNDNESS, " +
              std::to_string(completeness.load()) + " COMPLETENESS (" +
              std::to_string(reproduced.load()) + " reproduced); " + a_detail + "; " +
              b_detail + "; " + Secs(Since(start))};
}

Line LargeScale() {
  return {Status::kSkip,
          "not reproducible at desk scale: the 3-million-program campaign, the 65,347 "
          "completeness failures, the ~19.7% rejected-correct rate, the ~22.7% "
          "infer-resistant fraction and the 40-program manual study; covered by "
          "property-level criteria 4, 5 and 8"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::pair<const char*, std::function<Line()>> criteria[] = {
      {"golden corpus", GoldenCorpus},
      {"progress/preservation", ProgressPreservation},
      {"oracle equivalence", OracleEquivalence},
      {"distribution bands", DistributionBands},
      {"verdict matrix", VerdictMatrix},
      {"determinism", Determinism},
      {"front-end agreement", FrontEndAgreement},
      {"differential desk run", DifferentialDeskRun},
      {"large-scale results", LargeScale},
  };
  bool failed = false;
  int n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    if (!only.empty() && !only.count(n)) continue;
    Line l;
    try {
      l = run();
    } catch (const std::exception& e) {
      l = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = l.status == Status::kPass ? "PASS" : l.status == Status::kFail ? "FAIL" : "SKIP";
    failed |= l.status == Status::kFail;
    std::cout << tag << " " << n << " " << name << ": " << l.detail << std::endl;
  }
  return failed ? 1 : 0;
}
