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

#include "bcc/executor.hpp"

#include <unordered_map>
#include <utility>
#include <vector>

namespace bcc {

std::string_view ExecKindName(ExecKind kind) {
  switch (kind) {
    case ExecKind::kSuccess:
      return "SUCCESS";
    case ExecKind::kFailure:
      return "FAILURE";
    case ExecKind::kLoop:
      return "LOOP";
    case ExecKind::kTimeout:
      return "TIMEOUT";
    case ExecKind::kNameError:
      return "NAME_ERROR";
    case ExecKind::kTypeError:
      return "TYPE_ERROR";
    case ExecKind::kDivError:
      return "DIV_ERROR";
  }
  return "?";
}

std::optional<ExecKind> ParseExecKind(std::string_view name) {
  for (ExecKind k : kAllExecKinds) {
    if (ExecKindName(k) == name) return k;
  }
  return std::nullopt;
}

int ExitCode(ExecKind kind) { return static_cast<int>(kind); }

namespace {

// Remembered terms keyed by digest; equality is confirmed on every hit.
class SeenTerms {
 public:
  explicit SeenTerms(std::size_t cap) : cap_(cap) {}

  // Index of an earlier equal term, if any; otherwise records `term` at
  // `index` while under the cap.
  std::optional<uint64_t> FindOrInsert(const MachineTerm& term,
                                       uint64_t index) {
    auto [lo, hi] = seen_.equal_range(term.hash());
    for (auto it = lo; it != hi; ++it) {
      if (it->second.term == term) return it->second.index;
    }
    if (seen_.size() < cap_) seen_.emplace(term.hash(), Entry{term, index});
    return std::nullopt;
  }

 private:
  struct Entry {
    MachineTerm term;
    uint64_t index;
  };

  std::size_t cap_;
  std::unordered_multimap<uint64_t, Entry> seen_;
};

std::size_t Bits(const Literal& v) {
  if (v.as_int() == 0) return 0;
  return boost::multiprecision::msb(abs(v.as_int())) + 1;
}

bool ExceedsIntLimit(const Decomposition& d, const ExecConfig& cfg) {
  const auto* b = std::get<ExprPtr>(d.redex.term)->as<Expr::Binary>();
  if (b->op != BinOp::kMul) return false;
  return Bits(b->lhs->literal()) + Bits(b->rhs->literal()) > cfg.max_int_bits;
}

}  // namespace

ExecOutcome Execute(const Program& program, const ExecConfig& cfg) {
  if (cfg.step_budget == 0) {
    throw std::invalid_argument("Execute: step_budget must be >= 1");
  }
  ExecOutcome out;
  if (std::optional<JudgmentError> err = CheckTypes(program)) {
    out.kind = err->kind == JudgmentError::Kind::kNameError
                   ? ExecKind::kNameError
                   : ExecKind::kTypeError;
    out.judgment_error = std::move(err);
    return out;
  }

  SeenTerms seen(cfg.loop_detection ? cfg.detection_memory_cap : 0);
  MachineTerm term = MachineTerm::Load(program);
  for (uint64_t step = 0;; ++step) {
    if (term.state() == MachineTerm::State::kSuccess ||
        term.state() == MachineTerm::State::kFailure) {
      out.kind = term.state() == MachineTerm::State::kSuccess
                     ? ExecKind::kSuccess
                     : ExecKind::kFailure;
      out.steps_taken = step;
      return out;
    }
    if (cfg.loop_detection) {
      if (std::optional<uint64_t> first = seen.FindOrInsert(term, step)) {
        out.kind = ExecKind::kLoop;
        out.steps_taken = step;
        out.loop = LoopWitness{*first, step};
        return out;
      }
    }
    if (step == cfg.step_budget) {
      out.kind = ExecKind::kTimeout;
      out.steps_taken = step;
      return out;
    }
    DecomposeResult d = Decompose(term);
    if (const auto* stuck = std::get_if<Stuck>(&d)) {
      throw ProgressViolation("stuck at step " + std::to_string(step) + ": " +
                              stuck->reason);
    }
    const Decomposition& dec = std::get<Decomposition>(d);
    if (dec.redex.rule == Rule::kBinaryEval && ExceedsIntLimit(dec, cfg)) {
      out.kind = ExecKind::kTimeout;
      out.steps_taken = step;
      out.int_size_limit_hit = true;
      return out;
    }
    if (cfg.observer) cfg.observer(step, term, dec);
    StepResult r = Apply(term, dec);
    if (std::holds_alternative<DivByZero>(r)) {
      out.kind = ExecKind::kDivError;
      out.steps_taken = step + 1;
      return out;
    }
    if (const auto* s = std::get_if<Stuck>(&r)) {
      throw ProgressViolation("stuck at step " + std::to_string(step) + ": " +
                              s->reason);
    }
    term = std::move(std::get<Stepped>(r).term);
  }
}

}  // namespace bcc
