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

#include "bcc/ast.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <stdexcept>

namespace bcc {

namespace {

// Boogie keywords plus the reserved words of the s-expression form.
constexpr std::string_view kReservedWords[] = {
    "assert",   "assume",   "axiom",     "bool",      "break",
    "call",     "complete", "const",     "datatype",  "div",
    "else",     "ensures",  "exists",    "extends",   "false",
    "finite",   "forall",   "free",      "function",  "goto",
    "havoc",    "if",       "implementation",         "int",
    "invariant", "lambda",  "modifies",  "mod",       "old",
    "procedure", "real",    "requires",  "return",    "returns",
    "then",     "true",     "type",      "unique",    "var",
    "where",    "while",    "yield",     "par",       "async",
    "pure",     "uses",     "lemma",     "main",      "let",
    "do",       "not",      "and",       "or",        "float",
    "rmode",    "string",   "regex"};

enum Tag : uint64_t {
  kTagInt = 0x11,
  kTagBool,
  kTagVar,
  kTagUnary,
  kTagBinary,
  kTagAssign,
  kTagAssert,
  kTagIf,
  kTagWhile,
  kTagBody,
  kTagDecl,
  kTagProgram,
};

uint64_t Mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t ComputeHash(const Expr::Node& node) {
  return std::visit(
      [](const auto& n) -> uint64_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Lit>) {
          return n.value.Hash();
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          return HashCombine(kTagVar, n.name.Hash());
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return HashCombine(
              HashCombine(kTagUnary, static_cast<uint64_t>(n.op)),
              n.operand->hash());
        } else {
          uint64_t h = HashCombine(kTagBinary, static_cast<uint64_t>(n.op));
          h = HashCombine(h, n.lhs->hash());
          return HashCombine(h, n.rhs->hash());
        }
      },
      node);
}

uint64_t ComputeHash(const Stmt::Node& node) {
  return std::visit(
      [](const auto& n) -> uint64_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          return HashCombine(HashCombine(kTagAssign, n.target.Hash()),
                             n.value->hash());
        } else if constexpr (std::is_same_v<T, Stmt::Assert>) {
          return HashCombine(kTagAssert, n.cond->hash());
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          uint64_t h = HashCombine(kTagIf, n.cond->hash());
          h = HashCombine(h, n.then_body.Hash());
          return HashCombine(h, n.else_body.Hash());
        } else {
          return HashCombine(HashCombine(kTagWhile, n.cond->hash()),
                             n.body.Hash());
        }
      },
      node);
}

template <typename T>
void RequireNonNull(const T& ptr) {
  if (ptr == nullptr) throw std::invalid_argument("null AST child");
}

}  // namespace

uint64_t HashCombine(uint64_t seed, uint64_t value) {
  return Mix(seed ^ (value + 0x9e3779b97f4a7c15ull + (seed << 6) +
                     (seed >> 2)));
}

uint64_t HashString(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return Mix(h);
}

std::string_view TypeName(TypeTag type) {
  return type == TypeTag::kInt ? "int" : "bool";
}

uint64_t Literal::Hash() const {
  if (is_bool()) return HashCombine(kTagBool, as_bool() ? 1 : 0);
  const BigInt& v = as_int();
  if (v >= std::numeric_limits<int64_t>::min() &&
      v <= std::numeric_limits<int64_t>::max()) {
    return HashCombine(kTagInt, static_cast<uint64_t>(v.convert_to<int64_t>()));
  }
  return HashCombine(kTagInt, HashString(v.str()));
}

std::string Literal::ToString() const {
  if (is_bool()) return as_bool() ? "true" : "false";
  return as_int().str();
}

bool IsLegalIdentifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name[0])) return false;
  for (char c : name) {
    if (!alpha(c) && !digit(c) && c != '_') return false;
  }
  if (std::find(std::begin(kReservedWords), std::end(kReservedWords), name) !=
      std::end(kReservedWords)) {
    return false;
  }
  // bvN names Boogie bit-vector types.
  if (name.size() > 2 && name.substr(0, 2) == "bv" &&
      std::all_of(name.begin() + 2, name.end(), digit)) {
    return false;
  }
  return true;
}

VarName::VarName(std::string name) : name_(std::move(name)) {
  if (!IsLegalIdentifier(name_)) {
    throw std::invalid_argument("illegal identifier: '" + name_ + "'");
  }
}

uint64_t VarName::Hash() const { return HashString(name_); }

OpClass ClassOf(BinOp op) {
  switch (op) {
    case BinOp::kAdd:
    case BinOp::kSub:
    case BinOp::kMul:
    case BinOp::kDiv:
      return OpClass::kArith;
    case BinOp::kAnd:
    case BinOp::kOr:
    case BinOp::kImplies:
    case BinOp::kIffEqBool:
      return OpClass::kBool;
    case BinOp::kLt:
    case BinOp::kGt:
    case BinOp::kLe:
    case BinOp::kGe:
    case BinOp::kEqInt:
      return OpClass::kComp;
  }
  return OpClass::kArith;
}

Expr::Expr(Node node) : node_(std::move(node)), hash_(ComputeHash(node_)) {}

ExprPtr LitExpr(Literal value) {
  return std::make_shared<const Expr>(Expr::Lit{std::move(value)});
}
ExprPtr IntLit(long long value) { return LitExpr(Literal::Int(value)); }
ExprPtr IntLit(const BigInt& value) { return LitExpr(Literal::Int(value)); }
ExprPtr BoolLit(bool value) { return LitExpr(Literal::Bool(value)); }
ExprPtr VarExpr(VarName name) {
  return std::make_shared<const Expr>(Expr::Var{std::move(name)});
}
ExprPtr VarExpr(std::string name) {
  return VarExpr(VarName(std::move(name)));
}
ExprPtr UnaryExpr(UnOp op, ExprPtr operand) {
  RequireNonNull(operand);
  return std::make_shared<const Expr>(Expr::Unary{op, std::move(operand)});
}
ExprPtr BinaryExpr(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  RequireNonNull(lhs);
  RequireNonNull(rhs);
  return std::make_shared<const Expr>(
      Expr::Binary{op, std::move(lhs), std::move(rhs)});
}

uint64_t Body::Hash() const {
  uint64_t h = HashCombine(kTagBody, stmts_.size());
  for (const StmtPtr& s : stmts_) h = HashCombine(h, s->hash());
  return h;
}

Body operator+(const Body& a, const Body& b) {
  std::vector<StmtPtr> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return Body(std::move(out));
}

bool operator==(const Body& a, const Body& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!SameStmt(a[i], b[i])) return false;
  }
  return true;
}

Stmt::Stmt(Node node) : node_(std::move(node)), hash_(ComputeHash(node_)) {}

StmtPtr AssignStmt(VarName target, ExprPtr value) {
  RequireNonNull(value);
  return std::make_shared<const Stmt>(
      Stmt::Assign{std::move(target), std::move(value)});
}
StmtPtr AssignStmt(std::string target, ExprPtr value) {
  return AssignStmt(VarName(std::move(target)), std::move(value));
}
StmtPtr AssertStmt(ExprPtr cond) {
  RequireNonNull(cond);
  return std::make_shared<const Stmt>(Stmt::Assert{std::move(cond)});
}
StmtPtr IfStmt(ExprPtr cond, Body then_body, Body else_body) {
  RequireNonNull(cond);
  return std::make_shared<const Stmt>(
      Stmt::If{std::move(cond), std::move(then_body), std::move(else_body)});
}
StmtPtr WhileStmt(ExprPtr cond, Body body) {
  RequireNonNull(cond);
  return std::make_shared<const Stmt>(
      Stmt::While{std::move(cond), std::move(body)});
}

bool SameExpr(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (a == nullptr || b == nullptr) return false;
  return *a == *b;
}

bool SameStmt(const StmtPtr& a, const StmtPtr& b) {
  if (a == b) return true;
  if (a == nullptr || b == nullptr) return false;
  return *a == *b;
}

bool operator==(const Expr& a, const Expr& b) {
  if (&a == &b) return true;
  if (a.hash() != b.hash() || a.node().index() != b.node().index()) {
    return false;
  }
  return std::visit(
      [&b](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, Expr::Lit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return x.op == y.op && SameExpr(x.operand, y.operand);
        } else {
          return x.op == y.op && SameExpr(x.lhs, y.lhs) &&
                 SameExpr(x.rhs, y.rhs);
        }
      },
      a.node());
}

bool operator==(const Stmt& a, const Stmt& b) {
  if (&a == &b) return true;
  if (a.hash() != b.hash() || a.node().index() != b.node().index()) {
    return false;
  }
  return std::visit(
      [&b](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          return x.target == y.target && SameExpr(x.value, y.value);
        } else if constexpr (std::is_same_v<T, Stmt::Assert>) {
          return SameExpr(x.cond, y.cond);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          return SameExpr(x.cond, y.cond) && x.then_body == y.then_body &&
                 x.else_body == y.else_body;
        } else {
          return SameExpr(x.cond, y.cond) && x.body == y.body;
        }
      },
      a.node());
}

bool operator==(const Program& a, const Program& b) {
  return a.locals == b.locals && a.body == b.body;
}

uint64_t StructuralHash(const Program& program) {
  uint64_t h = HashCombine(kTagProgram, program.locals.size());
  for (const LocalDecl& d : program.locals) {
    h = HashCombine(h, kTagDecl);
    h = HashCombine(h, d.name.Hash());
    h = HashCombine(h, static_cast<uint64_t>(d.declared_type));
    h = HashCombine(h, d.init.Hash());
  }
  return HashCombine(h, program.body.Hash());
}

TermStats& TermStats::operator+=(const TermStats& other) {
  n_locals += other.n_locals;
  n_statements += other.n_statements;
  n_arith_exprs += other.n_arith_exprs;
  n_bool_exprs += other.n_bool_exprs;
  n_comp_exprs += other.n_comp_exprs;
  n_literals += other.n_literals;
  return *this;
}

namespace {

void Bump(TermStats& stats, OpClass cls) {
  switch (cls) {
    case OpClass::kArith:
      ++stats.n_arith_exprs;
      break;
    case OpClass::kBool:
      ++stats.n_bool_exprs;
      break;
    case OpClass::kComp:
      ++stats.n_comp_exprs;
      break;
  }
}

}  // namespace

TermStats ComputeTermStats(const Expr& expr) {
  TermStats stats;
  std::visit(
      [&stats](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Lit>) {
          ++stats.n_literals;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          Bump(stats, ClassOf(n.op));
          stats += ComputeTermStats(*n.operand);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          Bump(stats, ClassOf(n.op));
          stats += ComputeTermStats(*n.lhs);
          stats += ComputeTermStats(*n.rhs);
        }
      },
      expr.node());
  return stats;
}

TermStats ComputeTermStats(const Stmt& stmt) {
  TermStats stats;
  stats.n_statements = 1;
  std::visit(
      [&stats](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          stats += ComputeTermStats(*n.value);
        } else if constexpr (std::is_same_v<T, Stmt::Assert>) {
          stats += ComputeTermStats(*n.cond);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          stats += ComputeTermStats(*n.cond);
          stats += ComputeTermStats(n.then_body);
          stats += ComputeTermStats(n.else_body);
        } else {
          stats += ComputeTermStats(*n.cond);
          stats += ComputeTermStats(n.body);
        }
      },
      stmt.node());
  return stats;
}

TermStats ComputeTermStats(const Body& body) {
  TermStats stats;
  for (const StmtPtr& s : body) stats += ComputeTermStats(*s);
  return stats;
}

TermStats ComputeTermStats(const Program& program) {
  TermStats stats;
  stats.n_locals = program.locals.size();
  stats.n_literals = program.locals.size();
  stats += ComputeTermStats(program.body);
  return stats;
}

int Depth(const Expr& expr) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Unary>) {
          return 1 + Depth(*n.operand);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return 1 + std::max(Depth(*n.lhs), Depth(*n.rhs));
        } else {
          return 0;
        }
      },
      expr.node());
}

int Depth(const Stmt& stmt) {
  return 1 + std::visit(
                 [](const auto& n) -> int {
                   using T = std::decay_t<decltype(n)>;
                   if constexpr (std::is_same_v<T, Stmt::Assign>) {
                     return Depth(*n.value);
                   } else if constexpr (std::is_same_v<T, Stmt::Assert>) {
                     return Depth(*n.cond);
                   } else if constexpr (std::is_same_v<T, Stmt::If>) {
                     return std::max({Depth(*n.cond), Depth(n.then_body),
                                      Depth(n.else_body)});
                   } else {
                     return std::max(Depth(*n.cond), Depth(n.body));
                   }
                 },
                 stmt.node());
}

int Depth(const Body& body) {
  // (do s1 (do s2 ... ())): cell i sits at nesting level i.
  int depth = 0;
  for (std::size_t i = body.size(); i-- > 0;) {
    depth = 1 + std::max(Depth(*body[i]), depth);
  }
  return depth;
}

int Depth(const Program& program) {
  return std::max(static_cast<int>(program.locals.size()), Depth(program.body));
}

}  // namespace bcc
