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

#include <cctype>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace bcc {

EmitStyle ParseEmitStyle(std::string_view name) {
  if (name == "decl-with-init") return EmitStyle::kDeclWithInit;
  if (name == "decl-then-assign") return EmitStyle::kDeclThenAssign;
  throw std::invalid_argument("unknown emit style: " + std::string(name));
}

std::string_view EmitStyleName(EmitStyle style) {
  return style == EmitStyle::kDeclWithInit ? "decl-with-init"
                                           : "decl-then-assign";
}

std::string_view SexprToken(BinOp op) {
  switch (op) {
    case BinOp::kAdd: return "+";
    case BinOp::kSub: return "-";
    case BinOp::kMul: return "*";
    case BinOp::kDiv: return "/";
    case BinOp::kAnd: return "and";
    case BinOp::kOr: return "or";
    case BinOp::kImplies: return "=>";
    case BinOp::kIffEqBool: return "<=>";
    case BinOp::kLt: return "<";
    case BinOp::kGt: return ">";
    case BinOp::kLe: return "<=";
    case BinOp::kGe: return ">=";
    case BinOp::kEqInt: return "=";
  }
  return "?";
}

std::string_view SexprToken(UnOp op) {
  return op == UnOp::kNot ? "not" : "-";
}

std::string_view BoogieToken(BinOp op) {
  switch (op) {
    case BinOp::kAdd: return "+";
    case BinOp::kSub: return "-";
    case BinOp::kMul: return "*";
    case BinOp::kDiv: return "div";
    case BinOp::kAnd: return "&&";
    case BinOp::kOr: return "||";
    case BinOp::kImplies: return "==>";
    case BinOp::kIffEqBool: return "==";
    case BinOp::kLt: return "<";
    case BinOp::kGt: return ">";
    case BinOp::kLe: return "<=";
    case BinOp::kGe: return ">=";
    case BinOp::kEqInt: return "==";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Boogie emission

namespace {

bool IsBoogieAtom(const Expr& e) {
  if (e.as<Expr::Var>() != nullptr) return true;
  if (const auto* lit = e.as<Expr::Lit>()) {
    return lit->value.is_bool() || lit->value.as_int() >= 0;
  }
  return false;
}

std::string BoogieOperand(const Expr& e) {
  if (IsBoogieAtom(e)) return EmitBoogieExpr(e);
  return "(" + EmitBoogieExpr(e) + ")";
}

class BoogieWriter {
 public:
  explicit BoogieWriter(std::ostringstream& out) : out_(out) {}

  void Line(int indent, const std::string& text) {
    out_ << std::string(2 * indent, ' ') << text << '\n';
  }

  void WriteBody(const Body& body, int indent) {
    for (const StmtPtr& s : body) WriteStmt(*s, indent);
  }

  void WriteStmt(const Stmt& stmt, int indent) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Stmt::Assign>) {
            Line(indent, n.target.str() + " := " + EmitBoogieExpr(*n.value) +
                             ";");
          } else if constexpr (std::is_same_v<T, Stmt::Assert>) {
            Line(indent, "assert " + EmitBoogieExpr(*n.cond) + ";");
          } else if constexpr (std::is_same_v<T, Stmt::If>) {
            Line(indent, "if (" + EmitBoogieExpr(*n.cond) + ") {");
            WriteBody(n.then_body, indent + 1);
            Line(indent, "} else {");
            WriteBody(n.else_body, indent + 1);
            Line(indent, "}");
          } else {
            Line(indent, "while (" + EmitBoogieExpr(*n.cond) + ") {");
            WriteBody(n.body, indent + 1);
            Line(indent, "}");
          }
        },
        stmt.node());
  }

 private:
  std::ostringstream& out_;
};

}  // namespace

std::string EmitBoogieExpr(const Expr& expr) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Lit>) {
          return n.value.ToString();
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          return n.name.str();
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return std::string(n.op == UnOp::kNot ? "!" : "-") +
                 BoogieOperand(*n.operand);
        } else {
          return BoogieOperand(*n.lhs) + " " + std::string(BoogieToken(n.op)) +
                 " " + BoogieOperand(*n.rhs);
        }
      },
      expr.node());
}

std::string EmitBoogie(const Program& program, EmitStyle style,
                       std::string_view proc_name) {
  std::ostringstream out;
  const std::string header =
      "procedure " + std::string(proc_name) + "() returns ()";
  if (program.locals.empty() && program.body.empty()) {
    out << header << " { }\n";
    return out.str();
  }
  out << header << " {\n";
  BoogieWriter writer(out);
  for (const LocalDecl& d : program.locals) {
    std::string decl = "var " + d.name.str() + ": " +
                       std::string(TypeName(d.declared_type));
    if (style == EmitStyle::kDeclWithInit) {
      decl += " := " + EmitBoogieExpr(*LitExpr(d.init));
    }
    writer.Line(1, decl + ";");
  }
  if (style == EmitStyle::kDeclThenAssign) {
    for (const LocalDecl& d : program.locals) {
      writer.Line(1, d.name.str() + " := " + EmitBoogieExpr(*LitExpr(d.init)) +
                         ";");
    }
  }
  writer.WriteBody(program.body, 1);
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// S-expression emission

std::string EmitSexpr(const Expr& expr) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Lit>) {
          return n.value.ToString();
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          return n.name.str();
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return "(" + std::string(SexprToken(n.op)) + " " +
                 EmitSexpr(*n.operand) + ")";
        } else {
          return "(" + std::string(SexprToken(n.op)) + " " +
                 EmitSexpr(*n.lhs) + " " + EmitSexpr(*n.rhs) + ")";
        }
      },
      expr.node());
}

std::string EmitSexpr(const Stmt& stmt) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          return "(:= " + n.target.str() + " " + EmitSexpr(*n.value) + ")";
        } else if constexpr (std::is_same_v<T, Stmt::Assert>) {
          return "(assert " + EmitSexpr(*n.cond) + ")";
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          return "(if " + EmitSexpr(*n.cond) + " " + EmitSexpr(n.then_body) +
                 " " + EmitSexpr(n.else_body) + ")";
        } else {
          return "(while " + EmitSexpr(*n.cond) + " " + EmitSexpr(n.body) +
                 ")";
        }
      },
      stmt.node());
}

std::string EmitSexpr(const Body& body) {
  std::string out;
  for (const StmtPtr& s : body) out += "(do " + EmitSexpr(*s) + " ";
  out += "()";
  out.append(body.size(), ')');
  return out;
}

std::string EmitSexpr(const Program& program) {
  std::string locals;
  for (const LocalDecl& d : program.locals) {
    locals += "(let (" + d.name.str() + " = " + d.init.ToString() + " : " +
              std::string(TypeName(d.declared_type)) + ") ";
  }
  locals += "()";
  locals.append(program.locals.size(), ')');
  return "(main " + locals + " " + EmitSexpr(program.body) + ")";
}

// ---------------------------------------------------------------------------
// S-expression parsing

SyntaxError::SyntaxError(const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  enum Kind { kOpen, kClose, kAtom, kEnd } kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> Run() {
    std::vector<Token> tokens;
    while (true) {
      SkipSpaceAndComments();
      if (pos_ >= text_.size()) {
        tokens.push_back({Token::kEnd, "", line_, column_});
        return tokens;
      }
      const int line = line_;
      const int column = column_;
      const char c = text_[pos_];
      if (c == '(' || c == '[') {
        Advance();
        tokens.push_back({Token::kOpen, std::string(1, c), line, column});
      } else if (c == ')' || c == ']') {
        Advance();
        tokens.push_back({Token::kClose, std::string(1, c), line, column});
      } else {
        std::string atom;
        while (pos_ < text_.size() && !IsDelimiter(text_[pos_])) {
          atom.push_back(text_[pos_]);
          Advance();
        }
        tokens.push_back({Token::kAtom, std::move(atom), line, column});
      }
    }
  }

 private:
  static bool IsDelimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' ||
           c == ')' || c == '[' || c == ']' || c == ';';
  }

  void Advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void SkipSpaceAndComments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') Advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

std::optional<BinOp> BinOpFromToken(std::string_view t) {
  for (BinOp op : kAllBinOps) {
    if (SexprToken(op) == t) return op;
  }
  return std::nullopt;
}

bool IsIntegerToken(std::string_view t) {
  std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
  if (i == t.size()) return false;
  for (; i < t.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  }
  return true;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Program ParseProgram() {
    Expect(Token::kOpen, "expected '(' to open (main L B)");
    ExpectAtom("main");
    Program program;
    program.locals = ParseLocals();
    program.body = ParseBody();
    Expect(Token::kClose, "expected ')' closing (main L B)");
    if (Peek().kind != Token::kEnd) Fail(Peek(), "trailing input after program");
    return program;
  }

 private:
  const Token& Peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }

  const Token& Next() {
    const Token& t = Peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void Fail(const Token& at, const std::string& message) const {
    std::string found = at.kind == Token::kEnd ? "end of input" : at.text;
    throw SyntaxError(message + " (found '" + found + "')", at.line, at.column);
  }

  const Token& Expect(Token::Kind kind, const std::string& message) {
    if (Peek().kind != kind) Fail(Peek(), message);
    return Next();
  }

  void ExpectAtom(std::string_view text) {
    const Token& t = Peek();
    if (t.kind != Token::kAtom || t.text != text) {
      Fail(t, "expected '" + std::string(text) + "'");
    }
    Next();
  }

  bool AtEmptyList() const {
    return Peek().kind == Token::kOpen && Peek(1).kind == Token::kClose;
  }

  VarName ParseName() {
    const Token& t = Expect(Token::kAtom, "expected a variable name");
    if (!IsLegalIdentifier(t.text)) Fail(t, "illegal identifier");
    return VarName(t.text);
  }

  TypeTag ParseType() {
    const Token& t = Expect(Token::kAtom, "expected a type");
    if (t.text == "int") return TypeTag::kInt;
    if (t.text == "bool") return TypeTag::kBool;
    Fail(t, "expected 'int' or 'bool'");
  }

  Literal ParseLiteral() {
    const Token& t = Expect(Token::kAtom, "expected a literal");
    if (t.text == "true") return Literal::Bool(true);
    if (t.text == "false") return Literal::Bool(false);
    if (IsIntegerToken(t.text)) return Literal::Int(BigInt(t.text));
    Fail(t, "expected a literal");
  }

  LocalEnv ParseLocals() {
    LocalEnv locals;
    int open = 0;
    while (!AtEmptyList()) {
      Expect(Token::kOpen, "expected '(' or '()' for locals");
      ExpectAtom("let");
      Expect(Token::kOpen, "expected '(' opening (v = l : t)");
      VarName name = ParseName();
      ExpectAtom("=");
      Literal init = ParseLiteral();
      ExpectAtom(":");
      TypeTag type = ParseType();
      Expect(Token::kClose, "expected ')' closing (v = l : t)");
      locals.push_back({std::move(name), type, std::move(init)});
      ++open;
    }
    Next();
    Next();
    for (int i = 0; i < open; ++i) Expect(Token::kClose, "expected ')' closing let");
    return locals;
  }

  Body ParseBody() {
    Body body;
    int open = 0;
    while (!AtEmptyList()) {
      Expect(Token::kOpen, "expected '(' or '()' for a body");
      ExpectAtom("do");
      body.push_back(ParseStmt());
      ++open;
    }
    Next();
    Next();
    for (int i = 0; i < open; ++i) Expect(Token::kClose, "expected ')' closing do");
    return body;
  }

  StmtPtr ParseStmt() {
    Expect(Token::kOpen, "expected '(' opening a statement");
    const Token& head = Expect(Token::kAtom, "expected a statement keyword");
    StmtPtr stmt;
    if (head.text == ":=") {
      VarName target = ParseName();
      stmt = AssignStmt(std::move(target), ParseExpr());
    } else if (head.text == "assert") {
      stmt = AssertStmt(ParseExpr());
    } else if (head.text == "if") {
      ExprPtr cond = ParseExpr();
      Body then_body = ParseBody();
      stmt = IfStmt(std::move(cond), std::move(then_body), ParseBody());
    } else if (head.text == "while") {
      ExprPtr cond = ParseExpr();
      stmt = WhileStmt(std::move(cond), ParseBody());
    } else {
      Fail(head, "unknown statement");
    }
    Expect(Token::kClose, "expected ')' closing statement");
    return stmt;
  }

  ExprPtr ParseExpr() {
    const Token& t = Peek();
    if (t.kind == Token::kAtom) {
      Next();
      if (t.text == "true") return BoolLit(true);
      if (t.text == "false") return BoolLit(false);
      if (IsIntegerToken(t.text)) return IntLit(BigInt(t.text));
      if (!IsLegalIdentifier(t.text)) Fail(t, "illegal identifier");
      return VarExpr(VarName(t.text));
    }
    Expect(Token::kOpen, "expected an expression");
    const Token& op = Expect(Token::kAtom, "expected an operator");
    ExprPtr first = ParseExpr();
    ExprPtr result;
    if (Peek().kind == Token::kClose) {
      if (op.text == "not") {
        result = UnaryExpr(UnOp::kNot, std::move(first));
      } else if (op.text == "-") {
        result = UnaryExpr(UnOp::kNeg, std::move(first));
      } else {
        Fail(op, "unknown unary operator");
      }
    } else {
      std::optional<BinOp> bin = BinOpFromToken(op.text);
      if (!bin) Fail(op, "unknown binary operator");
      result = BinaryExpr(*bin, std::move(first), ParseExpr());
    }
    Expect(Token::kClose, "expected ')' closing expression");
    return result;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Program ParseSexpr(std::string_view text) {
  return Parser(Lexer(text).Run()).ParseProgram();
}

}  // namespace bcc
