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

// Name resolution and type checking for BPL0.
//
// Expression rules:
//   Comp      L |- e1:int, L |- e2:int  =>  L |- ({<,>,=,<=,>=} e1 e2):bool
//   Bin int   L |- e1:int, L |- e2:int  =>  L |- ({+,-,*,/} e1 e2):int
//   Bin bool  L |- e1:bool, L |- e2:bool => L |- ({and,or,=>,<=>} e1 e2):bool
//   Un int    L |- e:int   =>  L |- (- e):int
//   Un bool   L |- e:bool  =>  L |- (not e):bool
//   Vars      (v:t) in L   =>  L |- v:t
// Statement rules Assign / Assert / If / While, Env. (literal matches the
// declared type, v not already in L) and Main.

#ifndef BCC_JUDGMENTS_HPP_
#define BCC_JUDGMENTS_HPP_

#include <map>
#include <optional>
#include <string>
#include <variant>

#include "bcc/ast.hpp"

namespace bcc {

struct JudgmentError {
  enum class Kind { kNameError, kTypeError };

  Kind kind;
  // Dotted path from the program root, e.g. "body[2].then[0].cond.lhs".
  std::string location;
  std::string detail;

  std::string ToString() const;
  friend bool operator==(const JudgmentError&, const JudgmentError&) = default;
};

class TypingContext {
 public:
  TypingContext() = default;

  // Fails with NAME_ERROR on the first duplicate declaration.
  static std::variant<TypingContext, JudgmentError> FromLocals(
      const LocalEnv& locals);

  // Adds `name`; returns false if it is already declared.
  bool Declare(const VarName& name, TypeTag type);
  std::optional<TypeTag> Lookup(const VarName& name) const;
  std::size_t size() const { return types_.size(); }

 private:
  std::map<VarName, TypeTag> types_;
};

using TypeResult = std::variant<TypeTag, JudgmentError>;

// Total: reports NAME_ERROR / TYPE_ERROR instead of aborting. `location`
// prefixes the paths in reported errors.
TypeResult TypeOf(const Expr& expr, const TypingContext& ctx,
                  const std::string& location = "expr");

// nullopt means the judgment derives. Errors are reported in program
// order, declarations first.
std::optional<JudgmentError> CheckNames(const Program& program);

// Whole-program name check first (as Boogie resolves before it type
// checks), then the first type error in program order.
std::optional<JudgmentError> CheckTypes(const Program& program);

}  // namespace bcc

#endif  // BCC_JUDGMENTS_HPP_
