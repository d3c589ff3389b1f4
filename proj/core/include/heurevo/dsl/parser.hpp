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

#ifndef HEUREVO_DSL_PARSER_HPP_
#define HEUREVO_DSL_PARSER_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

#include "heurevo/dsl/expr.hpp"
#include "heurevo/dsl/schema.hpp"

namespace heurevo::dsl {

enum class ParseErrorKind { kSyntax, kUnknownFeature, kResourceLimit };

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, int line, int column, std::string reason,
             std::string name = {});

  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& reason() const { return reason_; }
  // The offending identifier for kUnknownFeature.
  const std::string& name() const { return name_; }

 private:
  ParseErrorKind kind_;
  int line_;
  int column_;
  std::string reason_;
  std::string name_;
};

// Parses one scoring expression. '#' starts a comment that runs to the end
// of the line. `/` is safe division; comparisons do not chain.
//
//   expr     := additive [cmp additive]
//   additive := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := ('-' | '+') unary | primary
//   primary  := number | feature | func '(' expr {',' expr} ')' | '(' expr ')'
//
// Functions: abs sqrt log exp (1), safediv min max pow (2), clamp if (3).
ExprPtr parse_expression(std::string_view source, const FeatureSchema& schema);

}  // namespace heurevo::dsl

#endif  // HEUREVO_DSL_PARSER_HPP_
