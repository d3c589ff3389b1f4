// Copyright 2026 The heurevo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "heurevo/dsl/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <vector>

#include <fmt/format.h>

namespace heurevo::dsl {

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kSyntax:
      return "SyntaxError";
    case ParseErrorKind::kUnknownFeature:
      return "UnknownFeature";
    case ParseErrorKind::kResourceLimit:
      return "ResourceLimit";
  }
  return "ParseError";
}

ParseError::ParseError(ParseErrorKind kind, int line, int column,
                       std::string reason, std::string name)
    : std::runtime_error(fmt::format("{} at {}:{}: {}", to_string(kind), line,
                                     column, reason)),
      kind_(kind),
      line_(line),
      column_(column),
      reason_(std::move(reason)),
      name_(std::move(name)) {}

namespace {

enum class Tok {
  kNumber,
  kIdent,
  kLParen,
  kRParen,
  kComma,
  kPlus,
  kMinus,
  kStar,
  kSlash,
  kLt,
  kLe,
  kGt,
  kGe,
  kEq,
  kEnd,
};

struct Token {
  Tok kind;
  std::string_view text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t{Tok::kEnd, {}, 0.0, line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && pos_ + 1 < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        out.push_back(number(t));
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_')) {
          advance();
        }
        t.kind = Tok::kIdent;
        t.text = src_.substr(start, pos_ - start);
        out.push_back(t);
      } else {
        out.push_back(punct(t));
      }
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token number(Token t) {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      }
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() &&
          std::isdigit(static_cast<unsigned char>(src_[look]))) {
        while (pos_ < look) advance();
        digits();
      }
    }
    t.kind = Tok::kNumber;
    t.text = src_.substr(start, pos_ - start);
    const auto res =
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (res.ec != std::errc{} || !std::isfinite(t.number)) {
      throw ParseError(ParseErrorKind::kSyntax, t.line, t.column,
                       fmt::format("numeric literal '{}' out of range", t.text));
    }
    return t;
  }

  Token punct(Token t) {
    const char c = src_[pos_];
    const char n = pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0';
    auto take = [&](Tok kind, int len) {
      t.kind = kind;
      t.text = src_.substr(pos_, static_cast<std::size_t>(len));
      for (int i = 0; i < len; ++i) advance();
      return t;
    };
    switch (c) {
      case '(': return take(Tok::kLParen, 1);
      case ')': return take(Tok::kRParen, 1);
      case ',': return take(Tok::kComma, 1);
      case '+': return take(Tok::kPlus, 1);
      case '-': return take(Tok::kMinus, 1);
      case '*': return take(Tok::kStar, 1);
      case '/': return take(Tok::kSlash, 1);
      case '<': return n == '=' ? take(Tok::kLe, 2) : take(Tok::kLt, 1);
      case '>': return n == '=' ? take(Tok::kGe, 2) : take(Tok::kGt, 1);
      case '=':
        if (n == '=') return take(Tok::kEq, 2);
        break;
      default:
        break;
    }
    throw ParseError(ParseErrorKind::kSyntax, t.line, t.column,
                     fmt::format("unexpected character '{}'", c));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct FunctionInfo {
  std::string_view name;
  Op op;
};

constexpr FunctionInfo kFunctions[] = {
    {"abs", Op::kAbs},     {"sqrt", Op::kSqrt}, {"log", Op::kLog},
    {"exp", Op::kExp},     {"safediv", Op::kDiv}, {"min", Op::kMin},
    {"max", Op::kMax},     {"pow", Op::kPow},   {"clamp", Op::kClamp},
    {"if", Op::kIf},
};

std::optional<Op> lookup_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return f.op;
  }
  return std::nullopt;
}

// Parenthesis nesting allowed before the parser gives up; well above any
// expression that can satisfy kMaxDepth.
constexpr int kMaxNesting = 4 * static_cast<int>(kMaxDepth);

class Parser {
 public:
  Parser(std::vector<Token> tokens, const FeatureSchema& schema)
      : toks_(std::move(tokens)), schema_(schema) {}

  ExprPtr run() {
    if (peek().kind == Tok::kEnd) {
      fail(peek(), "empty expression");
    }
    ExprPtr e = expr();
    if (peek().kind != Tok::kEnd) {
      fail(peek(), fmt::format("unexpected '{}'", peek().text));
    }
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  bool accept(Tok kind) {
    if (peek().kind == kind) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(Tok kind, std::string_view what) {
    if (!accept(kind)) {
      fail(peek(), fmt::format("expected {}, found '{}'", what,
                               peek().kind == Tok::kEnd ? "end of input"
                                                        : peek().text));
    }
  }

  [[noreturn]] void fail(const Token& t, std::string reason) {
    throw ParseError(ParseErrorKind::kSyntax, t.line, t.column,
                     std::move(reason));
  }

  ExprPtr checked(ExprPtr e, const Token& at) {
    if (e->depth() > kMaxDepth || e->node_count() > kMaxNodes) {
      throw ParseError(ParseErrorKind::kResourceLimit, at.line, at.column,
                       fmt::format("expression exceeds limits (depth {} > {} "
                                   "or nodes {} > {})",
                                   e->depth(), kMaxDepth, e->node_count(),
                                   kMaxNodes));
    }
    return e;
  }

  struct NestingGuard {
    NestingGuard(Parser& p, const Token& at) : parser(p) {
      if (++parser.nesting_ > kMaxNesting) {
        throw ParseError(ParseErrorKind::kResourceLimit, at.line, at.column,
                         "nesting too deep");
      }
    }
    ~NestingGuard() { --parser.nesting_; }
    Parser& parser;
  };

  static std::optional<Op> comparison(Tok kind) {
    switch (kind) {
      case Tok::kLt: return Op::kLt;
      case Tok::kLe: return Op::kLe;
      case Tok::kGt: return Op::kGt;
      case Tok::kGe: return Op::kGe;
      case Tok::kEq: return Op::kEq;
      default: return std::nullopt;
    }
  }

  ExprPtr expr() {
    NestingGuard guard(*this, peek());
    ExprPtr lhs = additive();
    if (auto op = comparison(peek().kind)) {
      const Token& at = next();
      ExprPtr rhs = additive();
      if (comparison(peek().kind)) {
        fail(peek(), "comparisons do not chain; add parentheses");
      }
      return checked(Expr::binary(*op, std::move(lhs), std::move(rhs)), at);
    }
    return lhs;
  }

  ExprPtr additive() {
    ExprPtr lhs = term();
    for (;;) {
      const Tok k = peek().kind;
      if (k != Tok::kPlus && k != Tok::kMinus) return lhs;
      const Token& at = next();
      ExprPtr rhs = term();
      lhs = checked(Expr::binary(k == Tok::kPlus ? Op::kAdd : Op::kSub,
                                 std::move(lhs), std::move(rhs)),
                    at);
    }
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    for (;;) {
      const Tok k = peek().kind;
      if (k != Tok::kStar && k != Tok::kSlash) return lhs;
      const Token& at = next();
      ExprPtr rhs = unary();
      lhs = checked(Expr::binary(k == Tok::kStar ? Op::kMul : Op::kDiv,
                                 std::move(lhs), std::move(rhs)),
                    at);
    }
  }

  ExprPtr unary() {
    NestingGuard guard(*this, peek());
    if (peek().kind == Tok::kMinus) {
      const Token& at = next();
      return checked(Expr::unary(Op::kNeg, unary()), at);
    }
    if (accept(Tok::kPlus)) return unary();
    return primary();
  }

  ExprPtr primary() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::kNumber:
        return Expr::literal(t.number);
      case Tok::kLParen: {
        ExprPtr e = expr();
        expect(Tok::kRParen, "')'");
        return e;
      }
      case Tok::kIdent:
        if (peek().kind == Tok::kLParen) return call(t);
        return feature(t);
      default:
        fail(t, t.kind == Tok::kEnd
                    ? std::string("unexpected end of input")
                    : fmt::format("unexpected '{}'", t.text));
    }
  }

  ExprPtr feature(const Token& t) {
    if (lookup_function(t.text)) {
      fail(t, fmt::format("function '{}' needs an argument list", t.text));
    }
    auto idx = schema_.index_of(t.text);
    if (!idx) {
      throw ParseError(ParseErrorKind::kUnknownFeature, t.line, t.column,
                       fmt::format("unknown feature '{}' for task {}", t.text,
                                   to_string(schema_.task())),
                       std::string(t.text));
    }
    return Expr::feature(schema_.name(*idx), *idx);
  }

  ExprPtr call(const Token& t) {
    auto op = lookup_function(t.text);
    if (!op) fail(t, fmt::format("unknown function '{}'", t.text));
    expect(Tok::kLParen, "'('");
    std::vector<ExprPtr> args;
    if (peek().kind != Tok::kRParen) {
      do {
        args.push_back(expr());
      } while (accept(Tok::kComma));
    }
    expect(Tok::kRParen, "')'");
    if (static_cast<int>(args.size()) != arity(*op)) {
      fail(t, fmt::format("{} takes {} argument(s), got {}", t.text, arity(*op),
                          args.size()));
    }
    return checked(Expr::make(*op, std::move(args)), t);
  }

  std::vector<Token> toks_;
  const FeatureSchema& schema_;
  std::size_t pos_ = 0;
  int nesting_ = 0;
};

}  // namespace

ExprPtr parse_expression(std::string_view source, const FeatureSchema& schema) {
  Lexer lexer(source);
  Parser parser(lexer.run(), schema);
  return parser.run();
}

}  // namespace heurevo::dsl
