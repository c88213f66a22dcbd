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

#include "bcc/syntax.hpp"

#include <gtest/gtest.h>

#include <string>

#include "support.hpp"

namespace bcc {
namespace {

using testing::LoadCorpus;
using testing::ReadFile;
using testing::SourcePath;

std::string StripReturns(std::string text) {
  const std::string needle = " returns ()";
  for (auto pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle)) {
    text.erase(pos, needle.size());
  }
  return text;
}

class CorpusEmit : public ::testing::TestWithParam<const char*> {};

TEST_P(CorpusEmit, MatchesPublishedListing) {
  const std::string name = GetParam();
  std::string emitted = EmitBoogie(LoadCorpus(name), EmitStyle::kDeclWithInit, name);
  EXPECT_EQ(StripReturns(emitted),
            ReadFile(SourcePath("tests/corpus/" + name + ".bpl")));
}

INSTANTIATE_TEST_SUITE_P(OutcomeCorpus, CorpusEmit,
                         ::testing::Values("success", "failure", "name_error",
                                           "type_error", "loop", "timeout"));

TEST(EmitBoogie, EmptyProgram) {
  EXPECT_EQ(EmitBoogie(Program{}), "procedure main() returns () { }\n");
}

TEST(EmitBoogie, LoopProgram) {
  std::string text = EmitBoogie(LoadCorpus("loop"));
  EXPECT_NE(text.find("while (true)"), std::string::npos);
  EXPECT_NE(text.find("assert false;"), std::string::npos);
  EXPECT_EQ(text.rfind("procedure main() returns () {\n", 0), 0u);
}

TEST(EmitBoogie, DeclThenAssign) {
  std::string text =
      EmitBoogie(LoadCorpus("failure"), EmitStyle::kDeclThenAssign, "p");
  EXPECT_EQ(text,
            "procedure p() returns () {\n"
            "  var x: int;\n"
            "  x := 3;\n"
            "  assert x < 0;\n"
            "}\n");
}

TEST(EmitBoogie, NestedOperandsParenthesized) {
  ExprPtr e = BinaryExpr(
      BinOp::kIffEqBool,
      UnaryExpr(UnOp::kNot, BinaryExpr(BinOp::kAnd, BoolLit(true), VarExpr("s"))),
      VarExpr("AE"));
  EXPECT_EQ(EmitBoogieExpr(*e), "(!(true && s)) == AE");
  ExprPtr d = BinaryExpr(BinOp::kDiv, IntLit(-7),
                         BinaryExpr(BinOp::kSub, VarExpr("x"), IntLit(2)));
  EXPECT_EQ(EmitBoogieExpr(*d), "(-7) div (x - 2)");
  EXPECT_EQ(EmitBoogieExpr(*BinaryExpr(BinOp::kImplies, BoolLit(true),
                                       BoolLit(false))),
            "true ==> false");
  EXPECT_EQ(EmitBoogieExpr(*UnaryExpr(UnOp::kNeg, IntLit(-5))), "-(-5)");
}

TEST(EmitBoogie, IfElseLayout) {
  Program p{{{VarName("b"), TypeTag::kBool, Literal::Bool(true)}},
            Body{IfStmt(VarExpr("b"), Body{AssertStmt(VarExpr("b"))}, {})}};
  EXPECT_EQ(EmitBoogie(p),
            "procedure main() returns () {\n"
            "  var b: bool := true;\n"
            "  if (b) {\n"
            "    assert b;\n"
            "  } else {\n"
            "  }\n"
            "}\n");
}

TEST(EmitSexpr, EmptyProgram) {
  EXPECT_EQ(EmitSexpr(Program{}), "(main () ())");
}

TEST(EmitSexpr, FailureProgram) {
  std::string text = EmitSexpr(LoadCorpus("failure"));
  EXPECT_NE(text.find("(assert (< x 0))"), std::string::npos);
  EXPECT_EQ(text, "(main (let (x = 3 : int) ()) (do (assert (< x 0)) ()))");
}

TEST(ParseSexpr, RoundtripsCorpus) {
  for (const char* name : {"success", "failure", "name_error", "type_error",
                           "loop", "timeout", "always_loops", "never_loops"}) {
    Program p = LoadCorpus(name);
    EXPECT_TRUE(ParseSexpr(EmitSexpr(p)) == p) << name;
  }
}

TEST(ParseSexpr, DistinguishesUnaryAndBinaryMinus) {
  Program p = ParseSexpr(
      "(main (let (x = -3 : int) ()) (do (:= x (- (- x) -1)) ()))");
  const auto* a = p.body[0]->as<Stmt::Assign>();
  ASSERT_NE(a, nullptr);
  const auto* b = a->value->as<Expr::Binary>();
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->op, BinOp::kSub);
  EXPECT_NE(b->lhs->as<Expr::Unary>(), nullptr);
  EXPECT_EQ(b->rhs->literal(), Literal::Int(-1));
  EXPECT_EQ(p.locals[0].init, Literal::Int(-3));
}

TEST(ParseSexpr, BigLiterals) {
  Program p = ParseSexpr(
      "(main (let (x = 99999999999999999999999 : int) ()) ())");
  EXPECT_EQ(p.locals[0].init.ToString(), "99999999999999999999999");
}

TEST(ParseSexpr, MainWithoutArgumentsIsSyntaxError) {
  EXPECT_THROW(ParseSexpr("(main)"), SyntaxError);
}

TEST(ParseSexpr, ReportsLineAndColumn) {
  try {
    ParseSexpr("(main ()\n  (do (frob x) ()))");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 8);
  }
}

TEST(ParseSexpr, RejectsMalformedInput) {
  for (const char* text :
       {"", "(main () ()", "(main () ()) extra", "(main (let (x = 1 : real) ()) ())",
        "(main () (do (assert (+ 1)) ()))", "(main () (do (:= while 1) ()))",
        "(main () (do (assert (frob 1 2)) ()))", ")"}) {
    EXPECT_THROW(ParseSexpr(text), SyntaxError) << text;
  }
}

TEST(ParseSexpr, CommentsAndBrackets) {
  Program p = ParseSexpr("; header\n[main () [do (assert true) ()]] ; tail");
  EXPECT_EQ(p.body.size(), 1u);
}

TEST(EmitStyle, Names) {
  EXPECT_EQ(ParseEmitStyle("decl-then-assign"), EmitStyle::kDeclThenAssign);
  EXPECT_EQ(EmitStyleName(EmitStyle::kDeclWithInit), "decl-with-init");
  EXPECT_THROW(ParseEmitStyle("x"), std::invalid_argument);
}

}  // namespace
}  // namespace bcc
