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

// Runs the external Boogie verifier and classifies its output.
//
// Classification is driven by a version-keyed pattern table (see
// fixtures/boogie-<version>/patterns.tsv). Order: a summary line decides
// SUCCESS / FAILURE / TIMEOUT; otherwise front-end diagnostics decide
// NAME_ERROR, TYPE_ERROR or PARSE_ERROR; anything else is CRASH.

#ifndef BCC_BOOGIE_HPP_
#define BCC_BOOGIE_HPP_

#include <cstdint>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bcc/ast.hpp"
#include "bcc/syntax.hpp"

namespace bcc {

enum class BoogieKind {
  kSuccess,
  kFailure,
  kTimeout,
  kNameError,
  kTypeError,
  kParseError,
  kCrash,
};

inline constexpr BoogieKind kAllBoogieKinds[] = {
    BoogieKind::kSuccess,   BoogieKind::kFailure,   BoogieKind::kTimeout,
    BoogieKind::kNameError, BoogieKind::kTypeError, BoogieKind::kParseError,
    BoogieKind::kCrash};

std::string_view BoogieKindName(BoogieKind kind);
std::optional<BoogieKind> ParseBoogieKind(std::string_view name);

struct Diagnostic {
  int line = 0;
  int column = 0;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct BoogieResult {
  BoogieKind kind = BoogieKind::kCrash;
  std::vector<Diagnostic> diagnostics;
  double wall_time = 0;  // seconds
  int exit_code = 0;     // 128 + signal when killed by a signal
  bool killed = false;   // wall-clock timeout enforced
  std::string stdout_text;
  std::string stderr_text;
};

class PatternTable {
 public:
  // Parses the tab-separated table format; throws std::invalid_argument.
  static PatternTable Parse(std::string_view text);
  // Table compiled into the library for `version`; throws if unknown.
  static const PatternTable& Builtin(std::string_view version);
  static std::vector<std::string> BuiltinVersions();

  const std::regex& summary() const { return summary_; }
  const std::regex& diagnostic() const { return diagnostic_; }
  const std::vector<std::regex>& family(std::string_view name) const;

 private:
  std::regex summary_;
  std::regex diagnostic_;
  std::vector<std::regex> assertion_, name_, type_, parse_;
};

inline constexpr std::string_view kDefaultBoogieVersion = "3.4.3";

// Pure and total.
BoogieResult ClassifyOutput(int exit_code, std::string_view stdout_text,
                            std::string_view stderr_text,
                            const PatternTable& table =
                                PatternTable::Builtin(kDefaultBoogieVersion));

struct BoogieConfig {
  std::string binary;        // resolved via ResolveBoogieBinary when empty
  double timeout_s = 60;
  std::vector<std::string> flags;
  std::string work_dir;      // parent of per-run scratch dirs; TMPDIR if empty
  std::string version = std::string(kDefaultBoogieVersion);
  std::string patterns_file; // overrides the builtin table when set
  bool keep_scratch = false;

  // Throws std::invalid_argument.
  void Validate() const;
};

inline constexpr std::string_view kInferFlag = "/infer:j";

class BoogieUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Explicit path, then $BCC_BOOGIE, then `boogie` on $PATH.
std::optional<std::string> ResolveBoogieBinary(const std::string& configured);

// Runs `binary file flags...` in a fresh scratch directory. The whole
// process group is killed on timeout and after the verifier exits. Throws
// BoogieUnavailable when no binary resolves.
BoogieResult RunBoogie(const std::string& file, const BoogieConfig& cfg);

// Emits `program` to a uniquely named file in a scratch directory and runs
// Boogie on it.
BoogieResult VerifyProgram(const Program& program, const BoogieConfig& cfg,
                           EmitStyle style = EmitStyle::kDeclWithInit);

}  // namespace bcc

#endif  // BCC_BOOGIE_HPP_
