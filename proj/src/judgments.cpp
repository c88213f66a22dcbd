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

#include "bcc/judgments.hpp"

#include <set>

#include "bcc/syntax.hpp"

namespace bcc {

std::string JudgmentError::ToString() const {
  return std::string(kind == Kind::kNameError ? "name-error" : "type-error") +
         " at " + location + ": " + detail;
}

std::variant<TypingContext, JudgmentError> TypingContext::FromLocals(
    const LocalEnv& locals) {
  TypingContext ctx;
  for (std::size_t i = 0; i < locals.size(); ++i) {
    if (!ctx.Declare(locals[i].name, locals[i].declared_type)) {
      return JudgmentError{JudgmentError::Kind::kNameError,
                           "locals[" + std::to_string(i) + "]",
                           "duplicate declaration of " + locals[i].name.str()};
    }
  }
  return ctx;
}

bool TypingContext::Declare(const VarName& name, TypeTag type) {
  return types_.emplace(name, type).second;
}

std::optional<TypeTag> TypingContext::Lookup(const VarName& name) const {
  auto it = types_.find(name);
  if (it == types_.end()) return std::nullopt;
  return it->second;
}

namespace {

JudgmentError TypeError(const std::string& location, std::string detail) {
  return {JudgmentError::Kind::kTypeError, location, std::move(detail)};
}

JudgmentError Undeclared(const std::string& location, const VarName& name) {
  return {JudgmentError::Kind::kNameError, location,
          "undeclared variable " + name.str()};
}

std::string Expected(TypeTag want, TypeTag got) {
  return "expected " + std::string(TypeName(want)) + ", found " +
         std::string(TypeName(got));
}

// --- name resolution -------------------------------------------------------

class NameChecker {
 public:
  explicit NameChecker(const std::set<VarName>& declared)
      : declared_(declared) {}

  std::optional<JudgmentError> CheckExpr(const bcc::Expr& e,
                                    const std::string& at) const {
    if (const auto* v = e.as<Expr::Var>()) {
      if (!declared_.count(v->name)) return Undeclared(at, v->name);
    } else if (const auto* u = e.as<Expr::Unary>()) {
      return CheckExpr(*u->operand, at + ".operand");
    } else if (const auto* b = e.as<Expr::Binary>()) {
      if (auto err = CheckExpr(*b->lhs, at + ".lhs")) return err;
      return CheckExpr(*b->rhs, at + ".rhs");
    }
    return std::nullopt;
  }

  std::optional<JudgmentError> CheckBody(const bcc::Body& body,
                                    const std::string& at) const {
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (auto err = CheckStmt(*body[i], at + "[" + std::to_string(i) + "]")) {
        return err;
      }
    }
    return std::nullopt;
  }

  std::optional<JudgmentError> CheckStmt(const bcc::Stmt& s,
                                    const std::string& at) const {
    if (const auto* a = s.as<Stmt::Assign>()) {
      if (!declared_.count(a->target)) return Undeclared(at, a->target);
      return CheckExpr(*a->value, at + ".rhs");
    }
    if (const auto* a = s.as<Stmt::Assert>()) return CheckExpr(*a->cond, at + ".cond");
    if (const auto* i = s.as<Stmt::If>()) {
      if (auto err = CheckExpr(*i->cond, at + ".cond")) return err;
      if (auto err = CheckBody(i->then_body, at + ".then")) return err;
      return CheckBody(i->else_body, at + ".else");
    }
    const auto* w = s.as<Stmt::While>();
    if (auto err = CheckExpr(*w->cond, at + ".cond")) return err;
    return CheckBody(w->body, at + ".body");
  }

 private:
  const std::set<VarName>& declared_;
};

// --- typing ----------------------------------------------------------------

class TypeChecker {
 public:
  explicit TypeChecker(const TypingContext& ctx) : ctx_(ctx) {}

  std::optional<JudgmentError> Require(const Expr& e, TypeTag want,
                                       const std::string& at) const {
    TypeResult r = TypeOf(e, ctx_, at);
    if (const auto* err = std::get_if<JudgmentError>(&r)) return *err;
    TypeTag got = std::get<TypeTag>(r);
    if (got != want) return TypeError(at, Expected(want, got));
    return std::nullopt;
  }

  std::optional<JudgmentError> CheckBody(const bcc::Body& body,
                                    const std::string& at) const {
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (auto err = CheckStmt(*body[i], at + "[" + std::to_string(i) + "]")) {
        return err;
      }
    }
    return std::nullopt;
  }

  std::optional<JudgmentError> CheckStmt(const bcc::Stmt& s,
                                    const std::string& at) const {
    if (const auto* a = s.as<Stmt::Assign>()) {
      std::optional<TypeTag> target = ctx_.Lookup(a->target);
      if (!target) return Undeclared(at, a->target);
      return Require(*a->value, *target, at + ".rhs");
    }
    if (const auto* a = s.as<Stmt::Assert>()) {
      return Require(*a->cond, TypeTag::kBool, at + ".cond");
    }
    if (const auto* i = s.as<Stmt::If>()) {
      if (auto err = Require(*i->cond, TypeTag::kBool, at + ".cond")) return err;
      if (auto err = CheckBody(i->then_body, at + ".then")) return err;
      return CheckBody(i->else_body, at + ".else");
    }
    const auto* w = s.as<Stmt::While>();
    if (auto err = Require(*w->cond, TypeTag::kBool, at + ".cond")) return err;
    return CheckBody(w->body, at + ".body");
  }

 private:
  const TypingContext& ctx_;
};

TypeTag OperandType(BinOp op) {
  return ClassOf(op) == OpClass::kBool ? TypeTag::kBool : TypeTag::kInt;
}

TypeTag ResultType(BinOp op) {
  return ClassOf(op) == OpClass::kArith ? TypeTag::kInt : TypeTag::kBool;
}

}  // namespace

TypeResult TypeOf(const Expr& expr, const TypingContext& ctx,
                  const std::string& location) {
  if (const auto* lit = expr.as<Expr::Lit>()) return lit->value.type();
  if (const auto* v = expr.as<Expr::Var>()) {
    if (std::optional<TypeTag> t = ctx.Lookup(v->name)) return *t;
    return Undeclared(location, v->name);
  }
  if (const auto* u = expr.as<Expr::Unary>()) {
    const TypeTag want = u->op == UnOp::kNeg ? TypeTag::kInt : TypeTag::kBool;
    TypeResult r = TypeOf(*u->operand, ctx, location + ".operand");
    if (std::holds_alternative<JudgmentError>(r)) return r;
    if (std::get<TypeTag>(r) != want) {
      return TypeError(location, "operand of " +
                                     std::string(SexprToken(u->op)) + ": " +
                                     Expected(want, std::get<TypeTag>(r)));
    }
    return want;
  }
  const auto* b = expr.as<Expr::Binary>();
  const TypeTag want = OperandType(b->op);
  TypeResult lhs = TypeOf(*b->lhs, ctx, location + ".lhs");
  if (std::holds_alternative<JudgmentError>(lhs)) return lhs;
  TypeResult rhs = TypeOf(*b->rhs, ctx, location + ".rhs");
  if (std::holds_alternative<JudgmentError>(rhs)) return rhs;
  if (std::get<TypeTag>(lhs) != want || std::get<TypeTag>(rhs) != want) {
    return TypeError(location,
                     "operands of " + std::string(SexprToken(b->op)) +
                         ": expected " + std::string(TypeName(want)) + " and " +
                         std::string(TypeName(want)) + ", found " +
                         std::string(TypeName(std::get<TypeTag>(lhs))) +
                         " and " +
                         std::string(TypeName(std::get<TypeTag>(rhs))));
  }
  return ResultType(b->op);
}

std::optional<JudgmentError> CheckNames(const Program& program) {
  std::set<VarName> declared;
  for (std::size_t i = 0; i < program.locals.size(); ++i) {
    if (!declared.insert(program.locals[i].name).second) {
      return JudgmentError{
          JudgmentError::Kind::kNameError, "locals[" + std::to_string(i) + "]",
          "duplicate declaration of " + program.locals[i].name.str()};
    }
  }
  return NameChecker(declared).CheckBody(program.body, "body");
}

std::optional<JudgmentError> CheckTypes(const Program& program) {
  if (auto err = CheckNames(program)) return err;
  TypingContext ctx;
  for (std::size_t i = 0; i < program.locals.size(); ++i) {
    const LocalDecl& d = program.locals[i];
    if (d.init.type() != d.declared_type) {
      return TypeError("locals[" + std::to_string(i) + "]",
                       "initializer of " + d.name.str() + ": " +
                           Expected(d.declared_type, d.init.type()));
    }
    ctx.Declare(d.name, d.declared_type);
  }
  return TypeChecker(ctx).CheckBody(program.body, "body");
}

}  // namespace bcc
