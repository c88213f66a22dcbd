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

// Small-step reduction of BPL0 driven by evaluation contexts.
//
//   E ::= hole | (u E) | (b E e) | (b l E) | (:= v E) | (assert E)
//       | (if E B1 B2) | (do E B) | (main L E)
//
// Rules:
//   E[(b l1 l2)]                    -> E[[[b l1 l2]]]     Binary Evaluation
//   E[(u l)]                        -> E[[[u l]]]         Unary Evaluation
//   (main L ())                     -> success            Success
//   E[(assert false)]               -> failure            Failure
//   E[(do (assert true) B)]         -> E[B]               Assert True
//   (main L E[v])                   -> (main L E[L{v}])   Local Substitution
//   (main L E[(do (:= v l) B)])     -> (main L{v<-l} E[B])  Local Assignment
//   E[(do (if true B1 B2) B3)]      -> E[(do B1 . B3)]    If-Then
//   E[(do (if false B1 B2) B3)]     -> E[(do B2 . B3)]    If-Else
//   E[(do (while e B1) B2)]         -> E[(do (if e B1 . (while e B1) ()) B2)]
//                                                         Loop
//
// Operands evaluate left to right and the hole position is unique, so at
// most one rule applies to any term. `/` is Euclidean division (the
// SMT-LIB `div`): the remainder is always in [0, |divisor|).

#ifndef BCC_SEMANTICS_HPP_
#define BCC_SEMANTICS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bcc/ast.hpp"

namespace bcc {

enum class Rule {
  kBinaryEval,
  kUnaryEval,
  kSuccess,
  kFailure,
  kAssertTrue,
  kLocalSubstitution,
  kLocalAssignment,
  kIfThen,
  kIfElse,
  kLoop,
};

inline constexpr Rule kAllRules[] = {
    Rule::kBinaryEval,        Rule::kUnaryEval,       Rule::kSuccess,
    Rule::kFailure,           Rule::kAssertTrue,      Rule::kLocalSubstitution,
    Rule::kLocalAssignment,   Rule::kIfThen,          Rule::kIfElse,
    Rule::kLoop};

std::string_view RuleName(Rule rule);

struct Binding {
  VarName name;
  TypeTag declared_type;
  Literal value;

  friend bool operator==(const Binding&, const Binding&) = default;
};

// Current variable values, in declaration order.
class RuntimeEnv {
 public:
  RuntimeEnv() = default;
  explicit RuntimeEnv(std::vector<Binding> bindings);
  static RuntimeEnv FromLocals(const LocalEnv& locals);

  // First binding of `name`, or null.
  const Binding* Lookup(const VarName& name) const;
  // L{v <- l}. Precondition: Lookup(name) != nullptr.
  RuntimeEnv With(const VarName& name, Literal value) const;

  const std::vector<Binding>& bindings() const { return bindings_; }
  uint64_t hash() const { return hash_; }

  friend bool operator==(const RuntimeEnv& a, const RuntimeEnv& b) {
    return a.hash_ == b.hash_ && a.bindings_ == b.bindings_;
  }

 private:
  std::vector<Binding> bindings_;
  uint64_t hash_ = 0;
};

// Persistent (do s B) list for the body under reduction; tails are shared
// between successive machine terms.
class Residual {
 public:
  Residual() = default;

  static Residual Cons(StmtPtr head, Residual tail);
  // body . tail
  static Residual Prepend(const Body& body, Residual tail);
  static Residual FromBody(const Body& body) { return Prepend(body, {}); }

  bool empty() const { return cell_ == nullptr; }
  // Precondition: !empty().
  const StmtPtr& head() const { return cell_->head; }
  Residual tail() const { return Residual(cell_ ? cell_->tail : nullptr); }
  std::size_t size() const { return cell_ ? cell_->size : 0; }
  uint64_t hash() const;

  Body ToBody() const;

  friend bool operator==(const Residual& a, const Residual& b);

 private:
  struct Cell {
    StmtPtr head;
    std::shared_ptr<const Cell> tail;
    uint64_t hash;
    std::size_t size;
  };

  explicit Residual(std::shared_ptr<const Cell> cell) : cell_(std::move(cell)) {}

  std::shared_ptr<const Cell> cell_;
};

class MachineTerm {
 public:
  enum class State { kRunning, kSuccess, kFailure };

  // (main L B) with every local at its initial value.
  static MachineTerm Load(const Program& program);
  static MachineTerm Success();
  static MachineTerm Failure();

  MachineTerm(std::shared_ptr<const RuntimeEnv> env, Residual body);

  State state() const { return state_; }
  bool is_terminal() const { return state_ != State::kRunning; }
  // Preconditions for env()/body(): !is_terminal().
  const RuntimeEnv& env() const { return *env_; }
  const std::shared_ptr<const RuntimeEnv>& env_ptr() const { return env_; }
  const Residual& body() const { return body_; }
  uint64_t hash() const { return hash_; }

  // The residual program: locals at their current values plus the body
  // left to reduce. Precondition: !is_terminal().
  Program ToProgram() const;

  friend bool operator==(const MachineTerm& a, const MachineTerm& b);

 private:
  explicit MachineTerm(State state);

  State state_ = State::kRunning;
  std::shared_ptr<const RuntimeEnv> env_;
  Residual body_;
  uint64_t hash_ = 0;
};

enum class Frame {
  kMainBody,      // (main L E)
  kDoHead,        // (do E B)
  kAssignRhs,     // (:= v E)
  kAssertArg,     // (assert E)
  kIfCondition,   // (if E B1 B2)
  kUnaryOperand,  // (u E)
  kBinopLeft,     // (b E e)
  kBinopRight,    // (b l E)
};

std::string_view FrameName(Frame frame);

// Path from the term root to the hole.
struct EvalContext {
  std::vector<Frame> frames;

  friend bool operator==(const EvalContext&, const EvalContext&) = default;
};

struct Redex {
  Rule rule;
  // Sub-term at the hole: nothing for Success (the whole term), the
  // (assert false) statement for Failure, an expression for the
  // expression-level rules, and the (do s B) body otherwise.
  std::variant<std::monostate, ExprPtr, StmtPtr, Residual> term;
};

struct Decomposition {
  EvalContext context;
  Redex redex;
};

struct Terminal {};
struct Stuck {
  std::string reason;
};
struct DivByZero {};

using DecomposeResult = std::variant<Decomposition, Terminal, Stuck>;

DecomposeResult Decompose(const MachineTerm& term);

// [[b l1 l2]]. Precondition: operands match b's typing class (throws
// std::invalid_argument otherwise).
std::variant<Literal, DivByZero> EvalBinOp(BinOp op, const Literal& lhs,
                                           const Literal& rhs);
// [[u l]]. Same precondition.
Literal EvalUnOp(UnOp op, const Literal& operand);

// Euclidean quotient. Precondition: divisor != 0.
BigInt EuclideanDiv(const BigInt& dividend, const BigInt& divisor);

// Replaces the expression at the hole of `context` with `replacement`.
// Precondition: `context` reaches an expression of `term`.
MachineTerm Plug(const MachineTerm& term, const EvalContext& context,
                 ExprPtr replacement);

struct Stepped {
  MachineTerm term;
  Rule rule;
};

using StepResult = std::variant<Stepped, Terminal, Stuck, DivByZero>;

// Applies the rule selected by `d` (which must come from Decompose(term)).
StepResult Apply(const MachineTerm& term, const Decomposition& d);
StepResult Step(const MachineTerm& term);

// "<step>\t<rule>\t<redex s-expression>"
std::string FormatTraceLine(uint64_t step, const MachineTerm& term,
                            const Redex& redex);

}  // namespace bcc

#endif  // BCC_SEMANTICS_HPP_
