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

#ifndef HEUREVO_DSL_EXPR_HPP_
#define HEUREVO_DSL_EXPR_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace heurevo::dsl {

enum class Op : std::uint8_t {
  kLiteral,
  kFeature,
  // unary
  kNeg,
  kAbs,
  kSqrt,
  kLog,
  kExp,
  // binary
  kAdd,
  kSub,
  kMul,
  kDiv,  // safe division
  kMin,
  kMax,
  kPow,
  // comparisons, yielding 0 or 1
  kLt,
  kLe,
  kGt,
  kGe,
  kEq,
  // ternary
  kIf,
  kClamp,
};

int arity(Op op);
bool is_comparison(Op op);
bool is_unary(Op op);
bool is_binary(Op op);
std::string_view op_name(Op op);

inline constexpr std::size_t kMaxDepth = 64;
inline constexpr std::size_t kMaxNodes = 2048;

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression node. Size and depth are cached at construction so
// resource checks are O(1).
class Expr {
 public:
  static ExprPtr literal(double value);
  static ExprPtr feature(std::string name, std::size_t index);
  // Negation of a literal folds into a literal, so "-3" has one spelling.
  static ExprPtr unary(Op op, ExprPtr operand);
  static ExprPtr binary(Op op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr if_then_else(ExprPtr cond, ExprPtr then_branch,
                              ExprPtr else_branch);
  static ExprPtr clamp(ExprPtr value, ExprPtr lo, ExprPtr hi);
  // Generic constructor; children.size() must equal arity(op).
  static ExprPtr make(Op op, std::vector<ExprPtr> children);

  Op op() const { return op_; }
  double value() const { return value_; }
  const std::string& name() const { return name_; }
  std::size_t feature_index() const { return feature_index_; }
  std::span<const ExprPtr> children() const { return children_; }

  std::size_t node_count() const { return node_count_; }
  std::size_t depth() const { return depth_; }
  std::size_t literal_count() const { return literal_count_; }
  bool has_feature() const { return has_feature_; }

  Expr(Op op, double value, std::string name, std::size_t feature_index,
       std::vector<ExprPtr> children);

 private:
  Op op_;
  double value_ = 0.0;
  std::string name_;
  std::size_t feature_index_ = 0;
  std::vector<ExprPtr> children_;
  std::size_t node_count_ = 1;
  std::size_t depth_ = 1;
  std::size_t literal_count_ = 0;
  bool has_feature_ = false;
};

bool structurally_equal(const Expr& a, const Expr& b);

// Canonical text: minimal parentheses, single spaces around infix operators,
// shortest round-trip literals. parse(print(e)) is structurally equal to e.
std::string canonical_print(const Expr& expr);

// Pre-order traversal. Index 0 is the root.
std::vector<const Expr*> preorder(const Expr& root);

// Copy of `root` with the pre-order node `index` replaced by `replacement`.
ExprPtr replace_node(const ExprPtr& root, std::size_t index,
                     ExprPtr replacement);

}  // namespace heurevo::dsl

#endif  // HEUREVO_DSL_EXPR_HPP_
