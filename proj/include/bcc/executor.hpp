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

// Runs a program to a final outcome: front-end judgments, then small steps
// under a step budget with repeated-term loop detection.

#ifndef BCC_EXECUTOR_HPP_
#define BCC_EXECUTOR_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bcc/ast.hpp"
#include "bcc/judgments.hpp"
#include "bcc/semantics.hpp"

namespace bcc {

enum class ExecKind {
  kSuccess,
  kFailure,
  kLoop,
  kTimeout,
  kNameError,
  kTypeError,
  kDivError,
};

inline constexpr ExecKind kAllExecKinds[] = {
    ExecKind::kSuccess,   ExecKind::kFailure,   ExecKind::kLoop,
    ExecKind::kTimeout,   ExecKind::kNameError, ExecKind::kTypeError,
    ExecKind::kDivError};

// "SUCCESS", "FAILURE", ...
std::string_view ExecKindName(ExecKind kind);
std::optional<ExecKind> ParseExecKind(std::string_view name);
// 0=SUCCESS 1=FAILURE 2=LOOP 3=TIMEOUT 4=NAME_ERROR 5=TYPE_ERROR 6=DIV_ERROR
int ExitCode(ExecKind kind);

struct LoopWitness {
  uint64_t first;       // step index of the first occurrence
  uint64_t recurrence;  // step index at which it reappeared

  friend bool operator==(const LoopWitness&, const LoopWitness&) = default;
};

struct ExecOutcome {
  ExecKind kind = ExecKind::kSuccess;
  // Applied reduction rules, expression-level steps included.
  uint64_t steps_taken = 0;
  std::optional<LoopWitness> loop;
  std::optional<JudgmentError> judgment_error;
  // TIMEOUT caused by ExecConfig::max_int_bits rather than the step budget.
  bool int_size_limit_hit = false;
};

// Called before each step with the step index (0-based), the term and its
// decomposition.
using StepObserver = std::function<void(uint64_t, const MachineTerm&,
                                        const Decomposition&)>;

struct ExecConfig {
  uint64_t step_budget = 100000;
  bool loop_detection = true;
  // Terms retained for loop detection; later terms are still compared
  // against the retained ones but not recorded.
  std::size_t detection_memory_cap = 1000000;
  // A multiplication whose operands total more bits than this ends the run
  // as TIMEOUT; repeated squaring otherwise exhausts memory long before the
  // step budget.
  std::size_t max_int_bits = 1 << 16;
  StepObserver observer;
};

// A judgment-passing program reached a state where no rule applies.
class ProgressViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Throws std::invalid_argument if cfg.step_budget == 0.
ExecOutcome Execute(const Program& program, const ExecConfig& cfg = {});

}  // namespace bcc

#endif  // BCC_EXECUTOR_HPP_
