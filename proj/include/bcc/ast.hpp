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

// Abstract syntax of BPL0, the deterministic Boogie subset:
//
//   P ::= (main L B)
//   L ::= () | (let (v = l : t) L)
//   B ::= () | (do s B)
//   s ::= (:= v e) | (if e B B) | (while e B) | (assert e)
//   e ::= l | v | (b e e) | (u e)
//
// All nodes are immutable and reference counted, so subterms are shared
// freely between programs, machine terms and worker threads. Every node
// caches its structural hash at construction.

#ifndef BCC_AST_HPP_
#define BCC_AST_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bcc {

using BigInt = boost::multiprecision::cpp_int;

enum class TypeTag { kInt, kBool };

std::string_view TypeName(TypeTag type);

// An unbounded integer or a boolean.
class Literal {
 public:
  Literal() : value_(BigInt(0)) {}
  static Literal Int(BigInt value) { return Literal(std::move(value)); }
  static Literal Int(long long value) { return Literal(BigInt(value)); }
  static Literal Bool(bool value) { return Literal(value); }

  bool is_int() const { return std::holds_alternative<BigInt>(value_); }
  bool is_bool() const { return std::holds_alternative<bool>(value_); }
  const BigInt& as_int() const { return std::get<BigInt>(value_); }
  bool as_bool() const { return std::get<bool>(value_); }
  TypeTag type() const { return is_int() ? TypeTag::kInt : TypeTag::kBool; }

  uint64_t Hash() const;
  std::string ToString() const;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.value_ == b.value_;
  }

 private:
  explicit Literal(BigInt value) : value_(std::move(value)) {}
  explicit Literal(bool value) : value_(value) {}

  std::variant<BigInt, bool> value_;
};

// True for [A-Za-z][A-Za-z0-9_]* that is neither a Boogie keyword nor a
// reserved word of the s-expression form.
bool IsLegalIdentifier(std::string_view name);

class VarName {
 public:
  // Throws std::invalid_argument unless IsLegalIdentifier(name).
  explicit VarName(std::string name);

  const std::string& str() const { return name_; }
  uint64_t Hash() const;

  friend auto operator<=>(const VarName&, const VarName&) = default;
  friend bool operator==(const VarName&, const VarName&) = default;

 private:
  std::string name_;
};

enum class UnOp { kNot, kNeg };

enum class BinOp {
  // Arithmetic: int x int -> int.
  kAdd,
  kSub,
  kMul,
  kDiv,
  // Boolean: bool x bool -> bool.
  kAnd,
  kOr,
  kImplies,
  kIffEqBool,
  // Comparison: int x int -> bool.
  kLt,
  kGt,
  kLe,
  kGe,
  kEqInt,
};

enum class OpClass { kArith, kBool, kComp };

OpClass ClassOf(BinOp op);
inline OpClass ClassOf(UnOp op) {
  return op == UnOp::kNeg ? OpClass::kArith : OpClass::kBool;
}

inline constexpr BinOp kAllBinOps[] = {
    BinOp::kAdd, BinOp::kSub,     BinOp::kMul,       BinOp::kDiv, BinOp::kAnd,
    BinOp::kOr,  BinOp::kImplies, BinOp::kIffEqBool, BinOp::kLt,  BinOp::kGt,
    BinOp::kLe,  BinOp::kGe,      BinOp::kEqInt};
inline constexpr UnOp kAllUnOps[] = {UnOp::kNot, UnOp::kNeg};

class Expr;
class Stmt;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;

class Expr {
 public:
  struct Lit {
    Literal value;
  };
  struct Var {
    VarName name;
  };
  struct Unary {
    UnOp op;
    ExprPtr operand;
  };
  struct Binary {
    BinOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  using Node = std::variant<Lit, Var, Unary, Binary>;

  explicit Expr(Node node);

  const Node& node() const { return node_; }
  uint64_t hash() const { return hash_; }

  bool is_literal() const { return std::holds_alternative<Lit>(node_); }
  // Precondition: is_literal().
  const Literal& literal() const { return std::get<Lit>(node_).value; }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

 private:
  Node node_;
  uint64_t hash_;
};

ExprPtr LitExpr(Literal value);
ExprPtr IntLit(long long value);
ExprPtr IntLit(const BigInt& value);
ExprPtr BoolLit(bool value);
ExprPtr VarExpr(VarName name);
ExprPtr VarExpr(std::string name);
ExprPtr UnaryExpr(UnOp op, ExprPtr operand);
ExprPtr BinaryExpr(BinOp op, ExprPtr lhs, ExprPtr rhs);

// Ordered statement sequence; the flattened form of the (do s B) list.
class Body {
 public:
  Body() = default;
  Body(std::initializer_list<StmtPtr> stmts) : stmts_(stmts) {}
  explicit Body(std::vector<StmtPtr> stmts) : stmts_(std::move(stmts)) {}

  const std::vector<StmtPtr>& stmts() const { return stmts_; }
  std::size_t size() const { return stmts_.size(); }
  bool empty() const { return stmts_.empty(); }
  const StmtPtr& operator[](std::size_t i) const { return stmts_[i]; }
  auto begin() const { return stmts_.begin(); }
  auto end() const { return stmts_.end(); }
  void push_back(StmtPtr s) { stmts_.push_back(std::move(s)); }

  uint64_t Hash() const;

  // B1 . B2
  friend Body operator+(const Body& a, const Body& b);
  friend bool operator==(const Body& a, const Body& b);

 private:
  std::vector<StmtPtr> stmts_;
};

class Stmt {
 public:
  struct Assign {
    VarName target;
    ExprPtr value;
  };
  struct Assert {
    ExprPtr cond;
  };
  struct If {
    ExprPtr cond;
    Body then_body;
    Body else_body;
  };
  struct While {
    ExprPtr cond;
    Body body;
  };
  using Node = std::variant<Assign, Assert, If, While>;

  explicit Stmt(Node node);

  const Node& node() const { return node_; }
  uint64_t hash() const { return hash_; }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

 private:
  Node node_;
  uint64_t hash_;
};

StmtPtr AssignStmt(VarName target, ExprPtr value);
StmtPtr AssignStmt(std::string target, ExprPtr value);
StmtPtr AssertStmt(ExprPtr cond);
StmtPtr IfStmt(ExprPtr cond, Body then_body, Body else_body);
StmtPtr WhileStmt(ExprPtr cond, Body body);

struct LocalDecl {
  VarName name;
  TypeTag declared_type;
  Literal init;

  friend bool operator==(const LocalDecl&, const LocalDecl&) = default;
};

using LocalEnv = std::vector<LocalDecl>;

struct Program {
  LocalEnv locals;
  Body body;
};

bool operator==(const Expr& a, const Expr& b);
bool operator==(const Stmt& a, const Stmt& b);
bool operator==(const Program& a, const Program& b);
bool SameExpr(const ExprPtr& a, const ExprPtr& b);
bool SameStmt(const StmtPtr& a, const StmtPtr& b);

// 64-bit digest; equal programs hash equal. Stable across runs and builds.
uint64_t StructuralHash(const Program& program);

struct TermStats {
  uint64_t n_locals = 0;
  uint64_t n_statements = 0;
  uint64_t n_arith_exprs = 0;
  uint64_t n_bool_exprs = 0;
  uint64_t n_comp_exprs = 0;
  uint64_t n_literals = 0;

  TermStats& operator+=(const TermStats& other);
  friend TermStats operator+(TermStats a, const TermStats& b) {
    a += b;
    return a;
  }
  friend bool operator==(const TermStats&, const TermStats&) = default;
};

TermStats ComputeTermStats(const Program& program);
TermStats ComputeTermStats(const Body& body);
TermStats ComputeTermStats(const Stmt& stmt);
TermStats ComputeTermStats(const Expr& expr);

// Depth convention: literals and variables are leaves (0); every Unary,
// Binary and statement node adds 1; every (do s B) cell and every
// (let ...) cell adds 1; main adds nothing. So `(main () ())` has depth 0
// and a program whose only statement is `assert true` has depth 2.
int Depth(const Program& program);
int Depth(const Body& body);
int Depth(const Stmt& stmt);
int Depth(const Expr& expr);

// Hash mixing shared by the AST and the semantics.
uint64_t HashCombine(uint64_t seed, uint64_t value);
uint64_t HashString(std::string_view s);

}  // namespace bcc

#endif  // BCC_AST_HPP_
