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

// Campaign orchestration: generation, execution, verification and
// consistency checking over configured batches, with an append-only
// results log and aggregate reports.
//
// Config file: one `key = value` per line, `#` starts a comment.
//
//   output_dir = out             seed = 0            resume = false
//   write_programs = true        lease = 16
//   workers.gen / workers.exec / workers.verify = <n>   (default: cores)
//   exec.step_budget / exec.loop_detection / exec.memory_cap / exec.max_int_bits
//   boogie.enabled / boogie.binary / boogie.timeout_s / boogie.flags
//   boogie.version / boogie.patterns_file / boogie.style / boogie.work_dir
//   boogie.classify_incompleteness
//   gen.<setting>                 defaults for every batch
//   batch.<id>.<setting>          one batch; ids keep file order
//   matrix.kinds = FORMED,NAMED,TYPED  matrix.depths = 3,5,7  matrix.count = n
//                                 adds batches "<kind>-d<depth>"
//
// <setting>: kind, depth, count, seed, allow_div, int_min, int_max,
// large_literal_prob, large_literal_max, vars, reject_factor,
// max_consecutive_rejects, weight.{assign,assert,if,while,literal,variable,
// unary,binary,leaf_factor,top_continue,nested_continue}.

#ifndef BCC_CAMPAIGN_HPP_
#define BCC_CAMPAIGN_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bcc/boogie.hpp"
#include "bcc/consistency.hpp"
#include "bcc/executor.hpp"
#include "bcc/generator.hpp"
#include "bcc/syntax.hpp"

namespace bcc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CampaignBatch {
  std::string id;
  BatchSpec spec;
};

struct CampaignConfig {
  std::vector<CampaignBatch> batches;
  ExecConfig exec;
  std::optional<BoogieConfig> boogie;  // absent: execution only
  EmitStyle style = EmitStyle::kDeclWithInit;
  bool classify_incompleteness = true;
  int gen_workers = 1;
  int exec_workers = 1;
  int verify_workers = 1;
  int lease = 16;
  std::string output_dir = "bcc-out";
  bool resume = false;
  bool write_programs = true;
  // Settings that determine the records, for the resume check.
  std::map<std::string, std::string> identity;

  // Throws ConfigError.
  void Validate() const;
  static CampaignConfig Parse(std::string_view text);
  static CampaignConfig Load(const std::string& path);
};

struct BoogieRecord {
  BoogieKind kind = BoogieKind::kCrash;
  double time = 0;
  int exit_code = 0;
  bool killed = false;
  std::vector<Diagnostic> diagnostics;
  std::string stdout_text;
  std::string stderr_text;
};

struct IncompletenessRecord {
  IncompletenessClass final_class = IncompletenessClass::kIndeterminate;
  IncompletenessClass proxy = IncompletenessClass::kIndeterminate;
  BoogieKind rerun = BoogieKind::kCrash;
  std::vector<ConstantGuard> guards;
};

struct ResultRecord {
  std::string id;  // "<batch>/<index, 6 digits>"
  std::string batch;
  uint64_t index = 0;
  uint64_t seed = 0;
  GenKind kind = GenKind::kTyped;
  int max_depth = 0;
  int depth = 0;
  TermStats stats;
  std::optional<ExecOutcome> exec;
  std::optional<std::string> error;  // harness failure for this program
  std::optional<BoogieRecord> boogie;
  std::optional<Verdict> verdict;
  std::optional<IncompletenessRecord> incompleteness;
  std::string sexpr_file;  // relative to the output directory
  std::string bpl_file;

  std::string ToJsonLine() const;
  // Throws std::invalid_argument.
  static ResultRecord FromJsonLine(std::string_view line);
};

std::string RecordId(std::string_view batch, uint64_t index);

// Parses every complete line; a malformed last line (interrupted write) is
// skipped, any other malformed line throws std::runtime_error.
std::vector<ResultRecord> ReadResultsLog(const std::string& path);
// Log lines sorted by record id.
std::vector<std::string> CanonicalLog(const std::string& path);

struct Summary3 {
  uint64_t min = 0;
  uint64_t median = 0;  // lower middle for even counts
  uint64_t max = 0;
};

// Order of the statistic columns.
inline constexpr std::string_view kStatFields[] = {
    "locals", "statements", "arith", "bool", "comp", "literals", "depth",
    "steps"};

struct BatchReport {
  std::string batch;
  std::optional<GenKind> kind;
  std::optional<int> max_depth;
  uint64_t n = 0;
  std::map<std::string, Summary3> stats;
  std::array<uint64_t, 7> exec_counts{};    // by ExecKind
  uint64_t exec_errors = 0;
  std::array<uint64_t, 7> boogie_counts{};  // by BoogieKind
  uint64_t verified = 0;                    // records with a verifier run
  std::array<std::array<uint64_t, 7>, 7> matrix{};  // [ExecKind][BoogieKind]
  std::map<std::string, uint64_t> verdicts;
  std::map<std::string, uint64_t> incompleteness;
  uint64_t correct = 0;           // SUCCESS or LOOP, verifier ran
  uint64_t correct_verified = 0;  // ... and the verifier said SUCCESS
};

struct AggregateReport {
  std::vector<BatchReport> batches;
  BatchReport total;
};

// Batches appear in `order` first, then the others sorted by id.
AggregateReport Aggregate(const std::vector<ResultRecord>& records,
                          const std::vector<std::string>& order = {});
std::string ReportJson(const AggregateReport& report);
std::string FormatReport(const AggregateReport& report);
// Percentage with one decimal, e.g. "75.0".
std::string Percent(uint64_t part, uint64_t whole);

struct CampaignResult {
  AggregateReport report;
  uint64_t resumed = 0;  // records taken over from an earlier run
  uint64_t produced = 0;
  std::vector<std::string> warnings;
};

// Writes <output_dir>/results.jsonl, campaign.json, report.json and
// report.txt. Throws ConfigError before any phase runs.
CampaignResult RunCampaign(const CampaignConfig& cfg,
                           std::ostream* progress = nullptr);

}  // namespace bcc

#endif  // BCC_CAMPAIGN_HPP_
