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

#include "bcc/semantics.hpp"

#include <stdexcept>
#include <utility>

#include "bcc/syntax.hpp"

namespace bcc {

std::string_view RuleName(Rule rule) {
  switch (rule) {
    case Rule::kBinaryEval:
      return "binary-evaluation";
    case Rule::kUnaryEval:
      return "unary-evaluation";
    case Rule::kSuccess:
      return "success";
    case Rule::kFailure:
      return "failure";
    case Rule::kAssertTrue:
      return "assert-true";
    case Rule::kLocalSubstitution:
      return "local-substitution";
    case Rule::kLocalAssignment:
      return "local-assignment";
    case Rule::kIfThen:
      return "if-then";
    case Rule::kIfElse:
      return "if-else";
    case Rule::kLoop:
      return "loop";
  }
  return "?";
}

std::string_view FrameName(Frame frame) {
  switch (frame) {
    case Frame::kMainBody:
      return "main-body";
    case Frame::kDoHead:
      return "do-head";
    case Frame::kAssignRhs:
      return "assign-rhs";
    case Frame::kAssertArg:
      return "assert-arg";
    case Frame::kIfCondition:
      return "if-condition";
    case Frame::kUnaryOperand:
      return "unary-operand";
    case Frame::kBinopLeft:
      return "binop-left";
    case Frame::kBinopRight:
      return "binop-right";
  }
  return "?";
}

// --- RuntimeEnv --------------------------------------------------------------

namespace {

uint64_t HashBindings(const std::vector<Binding>& bindings) {
  uint64_t h = 0x6a09e667f3bcc908ULL;
  for (const Binding& b : bindings) {
    h = HashCombine(h, b.name.Hash());
    h = HashCombine(h, static_cast<uint64_t>(b.declared_type));
    h = HashCombine(h, b.value.Hash());
  }
  return h;
}

}  // namespace

RuntimeEnv::RuntimeEnv(std::vector<Binding> bindings)
    : bindings_(std::move(bindings)), hash_(HashBindings(bindings_)) {}

RuntimeEnv RuntimeEnv::FromLocals(const LocalEnv& locals) {
  std::vector<Binding> bindings;
  bindings.reserve(locals.size());
  for (const LocalDecl& d : locals) {
    bindings.push_back({d.name, d.declared_type, d.init});
  }
  return RuntimeEnv(std::move(bindings));
}

const Binding* RuntimeEnv::Lookup(const VarName& name) const {
  for (const Binding& b : bindings_) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

RuntimeEnv RuntimeEnv::With(const VarName& name, Literal value) const {
  std::vector<Binding> bindings = bindings_;
  for (Binding& b : bindings) {
    if (b.name == name) {
      b.value = std::move(value);
      break;
    }
  }
  return RuntimeEnv(std::move(bindings));
}

// --- Residual ----------------------------------------------------------------

namespace {
constexpr uint64_t kEmptyResidualHash = 0xbb67ae8584caa73bULL;
}  // namespace

Residual Residual::Cons(StmtPtr head, Residual tail) {
  if (head == nullptr) throw std::invalid_argument("Residual::Cons: null stmt");
  const uint64_t h = HashCombine(tail.hash(), head->hash());
  const std::size_t n = tail.size() + 1;
  return Residual(std::make_shared<const Cell>(
      Cell{std::move(head), std::move(tail.cell_), h, n}));
}

Residual Residual::Prepend(const Body& body, Residual tail) {
  Residual out = std::move(tail);
  for (auto it = body.stmts().rbegin(); it != body.stmts().rend(); ++it) {
    out = Cons(*it, std::move(out));
  }
  return out;
}

uint64_t Residual::hash() const {
  return cell_ ? cell_->hash : kEmptyResidualHash;
}

Body Residual::ToBody() const {
  std::vector<StmtPtr> stmts;
  stmts.reserve(size());
  for (const Cell* c = cell_.get(); c != nullptr; c = c->tail.get()) {
    stmts.push_back(c->head);
  }
  return Body(std::move(stmts));
}

bool operator==(const Residual& a, const Residual& b) {
  const Residual::Cell* x = a.cell_.get();
  const Residual::Cell* y = b.cell_.get();
  while (x != nullptr && y != nullptr) {
    if (x == y) return true;
    if (x->hash != y->hash || x->size != y->size) return false;
    if (!SameStmt(x->head, y->head)) return false;
    x = x->tail.get();
    y = y->tail.get();
  }
  return x == y;
}

// --- MachineTerm -------------------------------------------------------------

MachineTerm::MachineTerm(State state)
    : state_(state),
      hash_(HashCombine(0x3c6ef372fe94f82bULL, static_cast<uint64_t>(state))) {}

MachineTerm::MachineTerm(std::shared_ptr<const RuntimeEnv> env, Residual body)
    : state_(State::kRunning), env_(std::move(env)), body_(std::move(body)) {
  if (env_ == nullptr) throw std::invalid_argument("MachineTerm: null env");
  hash_ = HashCombine(HashCombine(0xa54ff53a5f1d36f1ULL, env_->hash()),
                      body_.hash());
}

MachineTerm MachineTerm::Load(const Program& program) {
  return MachineTerm(
      std::make_shared<const RuntimeEnv>(RuntimeEnv::FromLocals(program.locals)),
      Residual::FromBody(program.body));
}

MachineTerm MachineTerm::Success() { return MachineTerm(State::kSuccess); }
MachineTerm MachineTerm::Failure() { return MachineTerm(State::kFailure); }

Program MachineTerm::ToProgram() const {
  if (is_terminal()) throw std::logic_error("ToProgram on a terminal term");
  Program p;
  for (const Binding& b : env_->bindings()) {
    p.locals.push_back({b.name, b.declared_type, b.value});
  }
  p.body = body_.ToBody();
  return p;
}

bool operator==(const MachineTerm& a, const MachineTerm& b) {
  if (a.state_ != b.state_ || a.hash_ != b.hash_) return false;
  if (a.is_terminal()) return true;
  return (a.env_ == b.env_ || *a.env_ == *b.env_) && a.body_ == b.body_;
}

// --- evaluation --------------------------------------------------------------

BigInt EuclideanDiv(const BigInt& dividend, const BigInt& divisor) {
  if (divisor == 0) throw std::invalid_argument("EuclideanDiv: zero divisor");
  BigInt q = dividend / divisor;  // truncates toward zero
  BigInt r = dividend - q * divisor;
  if (r < 0) {
    if (divisor > 0) {
      q -= 1;
    } else {
      q += 1;
    }
  }
  return q;
}

namespace {

bool OperandsFit(BinOp op, const Literal& lhs, const Literal& rhs) {
  if (ClassOf(op) == OpClass::kBool) return lhs.is_bool() && rhs.is_bool();
  return lhs.is_int() && rhs.is_int();
}

bool OperandFits(UnOp op, const Literal& operand) {
  return op == UnOp::kNeg ? operand.is_int() : operand.is_bool();
}

}  // namespace

std::variant<Literal, DivByZero> EvalBinOp(BinOp op, const Literal& lhs,
                                           const Literal& rhs) {
  if (!OperandsFit(op, lhs, rhs)) {
    throw std::invalid_argument("EvalBinOp: operand type mismatch for " +
                                std::string(SexprToken(op)));
  }
  switch (op) {
    case BinOp::kAdd:
      return Literal::Int(lhs.as_int() + rhs.as_int());
    case BinOp::kSub:
      return Literal::Int(lhs.as_int() - rhs.as_int());
    case BinOp::kMul:
      return Literal::Int(lhs.as_int() * rhs.as_int());
    case BinOp::kDiv:
      if (rhs.as_int() == 0) return DivByZero{};
      return Literal::Int(EuclideanDiv(lhs.as_int(), rhs.as_int()));
    case BinOp::kAnd:
      return Literal::Bool(lhs.as_bool() && rhs.as_bool());
    case BinOp::kOr:
      return Literal::Bool(lhs.as_bool() || rhs.as_bool());
    case BinOp::kImplies:
      return Literal::Bool(!lhs.as_bool() || rhs.as_bool());
    case BinOp::kIffEqBool:
      return Literal::Bool(lhs.as_bool() == rhs.as_bool());
    case BinOp::kLt:
      return Literal::Bool(lhs.as_int() < rhs.as_int());
    case BinOp::kGt:
      return Literal::Bool(lhs.as_int() > rhs.as_int());
    case BinOp::kLe:
      return Literal::Bool(lhs.as_int() <= rhs.as_int());
    case BinOp::kGe:
      return Literal::Bool(lhs.as_int() >= rhs.as_int());
    case BinOp::kEqInt:
      return Literal::Bool(lhs.as_int() == rhs.as_int());
  }
  throw std::logic_error("EvalBinOp: unknown operator");
}

Literal EvalUnOp(UnOp op, const Literal& operand) {
  if (!OperandFits(op, operand)) {
    throw std::invalid_argument("EvalUnOp: operand type mismatch for " +
                                std::string(SexprToken(op)));
  }
  if (op == UnOp::kNeg) return Literal::Int(-operand.as_int());
  return Literal::Bool(!operand.as_bool());
}

// --- decomposition -----------------------------------------------------------

namespace {

DecomposeResult DecomposeExpr(const ExprPtr& e, const RuntimeEnv& env,
                              EvalContext ctx) {
  const Expr* cur = e.get();
  ExprPtr cur_ptr = e;
  for (;;) {
    if (const auto* v = cur->as<Expr::Var>()) {
      if (env.Lookup(v->name) == nullptr) {
        return Stuck{"unbound variable " + v->name.str()};
      }
      return Decomposition{std::move(ctx), {Rule::kLocalSubstitution, cur_ptr}};
    }
    if (const auto* u = cur->as<Expr::Unary>()) {
      if (u->operand->is_literal()) {
        if (!OperandFits(u->op, u->operand->literal())) {
          return Stuck{"ill-typed operand of " + std::string(SexprToken(u->op))};
        }
        return Decomposition{std::move(ctx), {Rule::kUnaryEval, cur_ptr}};
      }
      ctx.frames.push_back(Frame::kUnaryOperand);
      cur_ptr = u->operand;
      cur = cur_ptr.get();
      continue;
    }
    if (const auto* b = cur->as<Expr::Binary>()) {
      if (!b->lhs->is_literal()) {
        ctx.frames.push_back(Frame::kBinopLeft);
        cur_ptr = b->lhs;
        cur = cur_ptr.get();
        continue;
      }
      if (!b->rhs->is_literal()) {
        ctx.frames.push_back(Frame::kBinopRight);
        cur_ptr = b->rhs;
        cur = cur_ptr.get();
        continue;
      }
      if (!OperandsFit(b->op, b->lhs->literal(), b->rhs->literal())) {
        return Stuck{"ill-typed operands of " + std::string(SexprToken(b->op))};
      }
      return Decomposition{std::move(ctx), {Rule::kBinaryEval, cur_ptr}};
    }
    // Literals are values; callers never descend into one.
    return Stuck{"literal in redex position"};
  }
}

}  // namespace

DecomposeResult Decompose(const MachineTerm& term) {
  if (term.is_terminal()) return Terminal{};
  const Residual& body = term.body();
  if (body.empty()) return Decomposition{{}, {Rule::kSuccess, std::monostate{}}};

  const RuntimeEnv& env = term.env();
  const StmtPtr& head = body.head();
  EvalContext ctx{{Frame::kMainBody}};
  auto descend = [&](const ExprPtr& e, Frame frame) {
    ctx.frames.push_back(Frame::kDoHead);
    ctx.frames.push_back(frame);
    return DecomposeExpr(e, env, std::move(ctx));
  };

  if (const auto* a = head->as<Stmt::Assign>()) {
    if (!a->value->is_literal()) return descend(a->value, Frame::kAssignRhs);
    const Binding* binding = env.Lookup(a->target);
    if (binding == nullptr) return Stuck{"unbound variable " + a->target.str()};
    if (binding->declared_type != a->value->literal().type()) {
      return Stuck{"ill-typed assignment to " + a->target.str()};
    }
    return Decomposition{std::move(ctx), {Rule::kLocalAssignment, body}};
  }
  if (const auto* a = head->as<Stmt::Assert>()) {
    if (!a->cond->is_literal()) return descend(a->cond, Frame::kAssertArg);
    const Literal& v = a->cond->literal();
    if (!v.is_bool()) return Stuck{"assert on a non-boolean"};
    if (v.as_bool()) {
      return Decomposition{std::move(ctx), {Rule::kAssertTrue, body}};
    }
    ctx.frames.push_back(Frame::kDoHead);
    return Decomposition{std::move(ctx), {Rule::kFailure, head}};
  }
  if (const auto* i = head->as<Stmt::If>()) {
    if (!i->cond->is_literal()) return descend(i->cond, Frame::kIfCondition);
    const Literal& v = i->cond->literal();
    if (!v.is_bool()) return Stuck{"if on a non-boolean"};
    return Decomposition{std::move(ctx),
                         {v.as_bool() ? Rule::kIfThen : Rule::kIfElse, body}};
  }
  return Decomposition{std::move(ctx), {Rule::kLoop, body}};
}

// --- plugging ----------------------------------------------------------------

namespace {

ExprPtr RebuildExpr(const ExprPtr& e, const std::vector<Frame>& frames,
                    std::size_t i, ExprPtr replacement) {
  if (i == frames.size()) return replacement;
  switch (frames[i]) {
    case Frame::kUnaryOperand: {
      const auto* u = e->as<Expr::Unary>();
      if (u == nullptr) break;
      return UnaryExpr(u->op,
                       RebuildExpr(u->operand, frames, i + 1, replacement));
    }
    case Frame::kBinopLeft: {
      const auto* b = e->as<Expr::Binary>();
      if (b == nullptr) break;
      return BinaryExpr(b->op, RebuildExpr(b->lhs, frames, i + 1, replacement),
                        b->rhs);
    }
    case Frame::kBinopRight: {
      const auto* b = e->as<Expr::Binary>();
      if (b == nullptr) break;
      return BinaryExpr(b->op, b->lhs,
                        RebuildExpr(b->rhs, frames, i + 1, replacement));
    }
    default:
      break;
  }
  throw std::invalid_argument("Plug: context does not match the term");
}

}  // namespace

MachineTerm Plug(const MachineTerm& term, const EvalContext& context,
                 ExprPtr replacement) {
  const std::vector<Frame>& f = context.frames;
  if (term.is_terminal() || term.body().empty() || f.size() < 3 ||
      f[0] != Frame::kMainBody || f[1] != Frame::kDoHead) {
    throw std::invalid_argument("Plug: context does not reach an expression");
  }
  const StmtPtr& head = term.body().head();
  StmtPtr rebuilt;
  switch (f[2]) {
    case Frame::kAssignRhs:
      if (const auto* a = head->as<Stmt::Assign>()) {
        rebuilt = AssignStmt(a->target,
                             RebuildExpr(a->value, f, 3, std::move(replacement)));
      }
      break;
    case Frame::kAssertArg:
      if (const auto* a = head->as<Stmt::Assert>()) {
        rebuilt = AssertStmt(RebuildExpr(a->cond, f, 3, std::move(replacement)));
      }
      break;
    case Frame::kIfCondition:
      if (const auto* i = head->as<Stmt::If>()) {
        rebuilt = IfStmt(RebuildExpr(i->cond, f, 3, std::move(replacement)),
                         i->then_body, i->else_body);
      }
      break;
    default:
      break;
  }
  if (rebuilt == nullptr) {
    throw std::invalid_argument("Plug: context does not match the term");
  }
  return MachineTerm(term.env_ptr(),
                     Residual::Cons(std::move(rebuilt), term.body().tail()));
}

// --- stepping ----------------------------------------------------------------

StepResult Apply(const MachineTerm& term, const Decomposition& d) {
  const Rule rule = d.redex.rule;
  switch (rule) {
    case Rule::kSuccess:
      return Stepped{MachineTerm::Success(), rule};
    case Rule::kFailure:
      return Stepped{MachineTerm::Failure(), rule};
    case Rule::kAssertTrue:
      return Stepped{MachineTerm(term.env_ptr(), term.body().tail()), rule};
    case Rule::kLocalAssignment: {
      const auto* a = term.body().head()->as<Stmt::Assign>();
      auto env = std::make_shared<const RuntimeEnv>(
          term.env().With(a->target, a->value->literal()));
      return Stepped{MachineTerm(std::move(env), term.body().tail()), rule};
    }
    case Rule::kIfThen:
    case Rule::kIfElse: {
      const auto* i = term.body().head()->as<Stmt::If>();
      const Body& chosen = rule == Rule::kIfThen ? i->then_body : i->else_body;
      return Stepped{MachineTerm(term.env_ptr(),
                                 Residual::Prepend(chosen, term.body().tail())),
                     rule};
    }
    case Rule::kLoop: {
      const StmtPtr& loop = term.body().head();
      const auto* w = loop->as<Stmt::While>();
      Body unrolled = w->body;
      unrolled.push_back(loop);
      StmtPtr guarded = IfStmt(w->cond, std::move(unrolled), Body{});
      return Stepped{
          MachineTerm(term.env_ptr(),
                      Residual::Cons(std::move(guarded), term.body().tail())),
          rule};
    }
    case Rule::kLocalSubstitution: {
      const ExprPtr& e = std::get<ExprPtr>(d.redex.term);
      const Binding* b = term.env().Lookup(e->as<Expr::Var>()->name);
      return Stepped{Plug(term, d.context, LitExpr(b->value)), rule};
    }
    case Rule::kUnaryEval: {
      const auto* u = std::get<ExprPtr>(d.redex.term)->as<Expr::Unary>();
      return Stepped{
          Plug(term, d.context, LitExpr(EvalUnOp(u->op, u->operand->literal()))),
          rule};
    }
    case Rule::kBinaryEval: {
      const auto* b = std::get<ExprPtr>(d.redex.term)->as<Expr::Binary>();
      auto v = EvalBinOp(b->op, b->lhs->literal(), b->rhs->literal());
      if (std::holds_alternative<DivByZero>(v)) return DivByZero{};
      return Stepped{
          Plug(term, d.context, LitExpr(std::move(std::get<Literal>(v)))), rule};
    }
  }
  throw std::logic_error("Apply: unknown rule");
}

StepResult Step(const MachineTerm& term) {
  DecomposeResult d = Decompose(term);
  if (std::holds_alternative<Terminal>(d)) return Terminal{};
  if (auto* s = std::get_if<Stuck>(&d)) return std::move(*s);
  return Apply(term, std::get<Decomposition>(d));
}

std::string FormatTraceLine(uint64_t step, const MachineTerm& term,
                            const Redex& redex) {
  std::string out = std::to_string(step);
  out += '\t';
  out += RuleName(redex.rule);
  out += '\t';
  if (const auto* e = std::get_if<ExprPtr>(&redex.term)) {
    out += EmitSexpr(**e);
  } else if (const auto* s = std::get_if<StmtPtr>(&redex.term)) {
    out += EmitSexpr(**s);
  } else if (const auto* r = std::get_if<Residual>(&redex.term)) {
    out += EmitSexpr(r->ToBody());
  } else if (!term.is_terminal()) {
    out += EmitSexpr(term.ToProgram());
  }
  return out;
}

}  // namespace bcc
