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

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "bcc/semantics.hpp"

namespace bcc {

std::string Verdict::ToString() const {
  switch (kind) {
    case VerdictKind::kConsistent:
      return "CONSISTENT";
    case VerdictKind::kUnknown:
      return triage ? "UNKNOWN:CRASH" : "UNKNOWN";
    case VerdictKind::kMismatch:
      break;
  }
  switch (*mismatch) {
    case MismatchKind::kSoundness:
      return "MISMATCH:SOUNDNESS";
    case MismatchKind::kCompleteness:
      return "MISMATCH:COMPLETENESS";
    case MismatchKind::kFrontend:
      return "MISMATCH:FRONTEND";
  }
  return "MISMATCH";
}

std::optional<Verdict> Verdict::Parse(std::string_view text) {
  if (text == "CONSISTENT") return Verdict{VerdictKind::kConsistent, {}, false};
  if (text == "UNKNOWN") return Verdict{VerdictKind::kUnknown, {}, false};
  if (text == "UNKNOWN:CRASH") return Verdict{VerdictKind::kUnknown, {}, true};
  if (text == "MISMATCH:SOUNDNESS") {
    return Verdict{VerdictKind::kMismatch, MismatchKind::kSoundness, false};
  }
  if (text == "MISMATCH:COMPLETENESS") {
    return Verdict{VerdictKind::kMismatch, MismatchKind::kCompleteness, false};
  }
  if (text == "MISMATCH:FRONTEND") {
    return Verdict{VerdictKind::kMismatch, MismatchKind::kFrontend, false};
  }
  return std::nullopt;
}

namespace {

Verdict Ok() { return {VerdictKind::kConsistent, std::nullopt, false}; }
Verdict Unknown() { return {VerdictKind::kUnknown, std::nullopt, false}; }
Verdict Mismatch(MismatchKind k) { return {VerdictKind::kMismatch, k, false}; }

bool IsFrontend(BoogieKind b) {
  return b == BoogieKind::kNameError || b == BoogieKind::kTypeError ||
         b == BoogieKind::kParseError;
}

}  // namespace

Verdict Check(ExecKind p, BoogieKind b) {
  if (b == BoogieKind::kCrash) return {VerdictKind::kUnknown, std::nullopt, true};
  if (p == ExecKind::kNameError || p == ExecKind::kTypeError) {
    const bool same = (p == ExecKind::kNameError && b == BoogieKind::kNameError) ||
                      (p == ExecKind::kTypeError && b == BoogieKind::kTypeError);
    return same ? Ok() : Mismatch(MismatchKind::kFrontend);
  }
  if (IsFrontend(b)) return Mismatch(MismatchKind::kFrontend);
  if (p == ExecKind::kTimeout || p == ExecKind::kDivError ||
      b == BoogieKind::kTimeout) {
    return Unknown();
  }
  if (b == BoogieKind::kSuccess) {
    return p == ExecKind::kFailure ? Mismatch(MismatchKind::kSoundness) : Ok();
  }
  // b == FAILURE
  return p == ExecKind::kFailure ? Ok() : Mismatch(MismatchKind::kCompleteness);
}

std::string_view IncompletenessClassName(IncompletenessClass c) {
  switch (c) {
    case IncompletenessClass::kAnnotationProxy:
      return "ANNOTATION_PROXY";
    case IncompletenessClass::kReasoningProxy:
      return "REASONING_PROXY";
    case IncompletenessClass::kReasoningStatic:
      return "REASONING_STATIC";
    case IncompletenessClass::kIndeterminate:
      return "INDETERMINATE";
  }
  return "?";
}

std::optional<IncompletenessClass> ParseIncompletenessClass(std::string_view s) {
  for (IncompletenessClass c :
       {IncompletenessClass::kAnnotationProxy, IncompletenessClass::kReasoningProxy,
        IncompletenessClass::kReasoningStatic, IncompletenessClass::kIndeterminate}) {
    if (IncompletenessClassName(c) == s) return c;
  }
  return std::nullopt;
}

namespace {

using ConstEnv = std::map<VarName, Literal>;

std::optional<Literal> Fold(const Expr& e, const ConstEnv& env) {
  if (const auto* l = e.as<Expr::Lit>()) return l->value;
  if (const auto* v = e.as<Expr::Var>()) {
    auto it = env.find(v->name);
    if (it == env.end()) return std::nullopt;
    return it->second;
  }
  if (const auto* u = e.as<Expr::Unary>()) {
    std::optional<Literal> x = Fold(*u->operand, env);
    if (!x) return std::nullopt;
    try {
      return EvalUnOp(u->op, *x);
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
  }
  const auto* b = e.as<Expr::Binary>();
  std::optional<Literal> lhs = Fold(*b->lhs, env);
  if (!lhs) return std::nullopt;
  std::optional<Literal> rhs = Fold(*b->rhs, env);
  if (!rhs) return std::nullopt;
  std::variant<Literal, DivByZero> r = DivByZero{};
  try {
    r = EvalBinOp(b->op, *lhs, *rhs);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  if (const auto* lit = std::get_if<Literal>(&r)) return *lit;
  return std::nullopt;
}

void AssignedIn(const Body& body, std::set<VarName>* out) {
  for (const StmtPtr& s : body) {
    if (const auto* a = s->as<Stmt::Assign>()) {
      out->insert(a->target);
    } else if (const auto* i = s->as<Stmt::If>()) {
      AssignedIn(i->then_body, out);
      AssignedIn(i->else_body, out);
    } else if (const auto* w = s->as<Stmt::While>()) {
      AssignedIn(w->body, out);
    }
  }
}

void Forget(const Body& body, ConstEnv* env) {
  std::set<VarName> assigned;
  AssignedIn(body, &assigned);
  for (const VarName& v : assigned) env->erase(v);
}

void Scan(const Body& body, const std::string& at, ConstEnv env,
          std::vector<ConstantGuard>* out) {
  for (std::size_t i = 0; i < body.size(); ++i) {
    const Stmt& s = *body[i];
    const std::string here = at + "[" + std::to_string(i) + "]";
    if (const auto* a = s.as<Stmt::Assign>()) {
      std::optional<Literal> v = Fold(*a->value, env);
      if (v) {
        env.insert_or_assign(a->target, *v);
      } else {
        env.erase(a->target);
      }
    } else if (const auto* c = s.as<Stmt::If>()) {
      Scan(c->then_body, here + ".then", env, out);
      Scan(c->else_body, here + ".else", env, out);
      Forget(c->then_body, &env);
      Forget(c->else_body, &env);
    } else if (const auto* w = s.as<Stmt::While>()) {
      std::optional<Literal> g = Fold(*w->cond, env);
      if (g && g->is_bool()) {
        out->push_back({here, g->as_bool()});
      }
      Forget(w->body, &env);
      Scan(w->body, here + ".body", env, out);
    }
  }
}

}  // namespace

std::vector<ConstantGuard> DetectConstantGuard(const Program& program) {
  ConstEnv env;
  for (const LocalDecl& d : program.locals) env.insert_or_assign(d.name, d.init);
  std::vector<ConstantGuard> out;
  Scan(program.body, "body", std::move(env), &out);
  return out;
}

IncompletenessClass IncompletenessReport::Final() const {
  for (const ConstantGuard& g : guards) {
    if (!g.value) return IncompletenessClass::kReasoningStatic;
  }
  return proxy;
}

IncompletenessReport ClassifyIncompleteness(const Program& program,
                                            const BoogieConfig& cfg,
                                            EmitStyle style) {
  IncompletenessReport report;
  report.guards = DetectConstantGuard(program);
  BoogieConfig rerun = cfg;
  if (std::find(rerun.flags.begin(), rerun.flags.end(), kInferFlag) ==
      rerun.flags.end()) {
    rerun.flags.emplace_back(kInferFlag);
  }
  report.rerun = VerifyProgram(program, rerun, style);
  switch (report.rerun.kind) {
    case BoogieKind::kSuccess:
      report.proxy = IncompletenessClass::kAnnotationProxy;
      break;
    case BoogieKind::kFailure:
      report.proxy = IncompletenessClass::kReasoningProxy;
      break;
    default:
      report.proxy = IncompletenessClass::kIndeterminate;
      break;
  }
  return report;
}

}  // namespace bcc
