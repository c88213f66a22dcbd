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

// Verdicts over (execution outcome, verifier outcome) pairs and the
// sub-classification of completeness mismatches.
//
//                 | SUCCESS FAILURE TIMEOUT NAME_ERR TYPE_ERR
//   SUCCESS       |   ok      no      ?       no       no
//   FAILURE       |   no      ok      ?       no       no
//   LOOP          |   ok      no      ?       no       no
//   TIMEOUT       |   ?       ?       ?       no       no
//   NAME_ERROR    |   no      no      no      ok       no
//   TYPE_ERROR    |   no      no      no      no       ok
//
// Extensions: DIV_ERROR behaves like TIMEOUT; PARSE_ERROR from the
// verifier is a front-end mismatch; CRASH is UNKNOWN with the triage flag.

#ifndef BCC_CONSISTENCY_HPP_
#define BCC_CONSISTENCY_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcc/ast.hpp"
#include "bcc/boogie.hpp"
#include "bcc/executor.hpp"

namespace bcc {

enum class VerdictKind { kConsistent, kMismatch, kUnknown };
enum class MismatchKind { kSoundness, kCompleteness, kFrontend };

struct Verdict {
  VerdictKind kind = VerdictKind::kUnknown;
  std::optional<MismatchKind> mismatch;  // set iff kind == kMismatch
  bool triage = false;                   // verifier crashed

  // "CONSISTENT", "MISMATCH:SOUNDNESS", "UNKNOWN", "UNKNOWN:CRASH", ...
  std::string ToString() const;
  static std::optional<Verdict> Parse(std::string_view text);

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

inline constexpr std::string_view kAllVerdictNames[] = {
    "CONSISTENT",           "MISMATCH:SOUNDNESS", "MISMATCH:COMPLETENESS",
    "MISMATCH:FRONTEND",    "UNKNOWN",            "UNKNOWN:CRASH"};

Verdict Check(ExecKind p, BoogieKind b);

enum class IncompletenessClass {
  kAnnotationProxy,
  kReasoningProxy,
  kReasoningStatic,
  kIndeterminate,  // the rerun timed out or crashed
};

std::string_view IncompletenessClassName(IncompletenessClass c);
std::optional<IncompletenessClass> ParseIncompletenessClass(std::string_view s);

struct ConstantGuard {
  std::string location;  // judgment-style path, e.g. "body[3].body[0]"
  bool value;

  friend bool operator==(const ConstantGuard&, const ConstantGuard&) = default;
};

// Constant propagation along straight-line code. Initial values and
// assignments whose right-hand side folds to a literal are tracked;
// variables assigned under an if or in a loop body are forgotten. A guard
// is reported with its value on arrival at the loop, before any iteration.
// Loop bodies are analysed with the variables they assign forgotten, so
// reports inside them hold on every arrival. Precondition: well-typed.
std::vector<ConstantGuard> DetectConstantGuard(const Program& program);

struct IncompletenessReport {
  IncompletenessClass proxy = IncompletenessClass::kIndeterminate;
  BoogieResult rerun;
  std::vector<ConstantGuard> guards;

  // REASONING_STATIC when some loop is guarded by constant false,
  // otherwise the proxy class.
  IncompletenessClass Final() const;
};

// Reruns the verifier with invariant inference enabled and runs the
// static detector. Precondition: Check() gave MISMATCH:COMPLETENESS.
IncompletenessReport ClassifyIncompleteness(
    const Program& program, const BoogieConfig& cfg,
    EmitStyle style = EmitStyle::kDeclWithInit);

}  // namespace bcc

#endif  // BCC_CONSISTENCY_HPP_
