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

// Concrete syntax: Boogie source emission and the parenthesized prefix
// (s-expression) form, which also has a parser.
//
// S-expression operator tokens:
//   arithmetic  + - * /        comparison  < > <= >= =
//   boolean     and or => <=>  unary       not -   (unary - by arity)
// Empty locals and empty bodies render as `()`. `;` starts a comment.

#ifndef BCC_SYNTAX_HPP_
#define BCC_SYNTAX_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

#include "bcc/ast.hpp"

namespace bcc {

enum class EmitStyle {
  kDeclWithInit,    // var x: int := 0;
  kDeclThenAssign,  // var x: int; ... x := 0;
};

// Parses "decl-with-init" / "decl-then-assign".
EmitStyle ParseEmitStyle(std::string_view name);
std::string_view EmitStyleName(EmitStyle style);

// Boogie program with one parameterless procedure. Two-space indentation,
// LF newlines. Nested operands are parenthesized; DIV renders as `div`.
std::string EmitBoogie(const Program& program,
                       EmitStyle style = EmitStyle::kDeclWithInit,
                       std::string_view proc_name = "main");

std::string EmitSexpr(const Program& program);
std::string EmitSexpr(const Body& body);
std::string EmitSexpr(const Stmt& stmt);
std::string EmitSexpr(const Expr& expr);

// Boogie-syntax rendering of a single expression (as used in statements).
std::string EmitBoogieExpr(const Expr& expr);

std::string_view SexprToken(BinOp op);
std::string_view SexprToken(UnOp op);
std::string_view BoogieToken(BinOp op);

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Throws SyntaxError with the 1-based line/column of the offending token.
Program ParseSexpr(std::string_view text);

}  // namespace bcc

#endif  // BCC_SYNTAX_HPP_
