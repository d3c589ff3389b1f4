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

#include "heurevo/dsl/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace heurevo::dsl {

int arity(Op op) {
  switch (op) {
    case Op::kLiteral:
    case Op::kFeature:
      return 0;
    case Op::kNeg:
    case Op::kAbs:
    case Op::kSqrt:
    case Op::kLog:
    case Op::kExp:
      return 1;
    case Op::kIf:
    case Op::kClamp:
      return 3;
    default:
      return 2;
  }
}

bool is_comparison(Op op) {
  return op == Op::kLt || op == Op::kLe || op == Op::kGt || op == Op::kGe ||
         op == Op::kEq;
}

bool is_unary(Op op) { return arity(op) == 1; }
bool is_binary(Op op) { return arity(op) == 2; }

std::string_view op_name(Op op) {
  switch (op) {
    case Op::kLiteral: return "literal";
    case Op::kFeature: return "feature";
    case Op::kNeg: return "-";
    case Op::kAbs: return "abs";
    case Op::kSqrt: return "sqrt";
    case Op::kLog: return "log";
    case Op::kExp: return "exp";
    case Op::kAdd: return "+";
    case Op::kSub: return "-";
    case Op::kMul: return "*";
    case Op::kDiv: return "/";
    case Op::kMin: return "min";
    case Op::kMax: return "max";
    case Op::kPow: return "pow";
    case Op::kLt: return "<";
    case Op::kLe: return "<=";
    case Op::kGt: return ">";
    case Op::kGe: return ">=";
    case Op::kEq: return "==";
    case Op::kIf: return "if";
    case Op::kClamp: return "clamp";
  }
  return "?";
}

Expr::Expr(Op op, double value, std::string name, std::size_t feature_index,
           std::vector<ExprPtr> children)
    : op_(op),
      value_(value),
      name_(std::move(name)),
      feature_index_(feature_index),
      children_(std::move(children)) {
  literal_count_ = op_ == Op::kLiteral ? 1 : 0;
  has_feature_ = op_ == Op::kFeature;
  std::size_t child_depth = 0;
  for (const auto& c : children_) {
    node_count_ += c->node_count_;
    child_depth = std::max(child_depth, c->depth_);
    literal_count_ += c->literal_count_;
    has_feature_ = has_feature_ || c->has_feature_;
  }
  depth_ = 1 + child_depth;
}

ExprPtr Expr::literal(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("DSL literal must be finite");
  }
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  return std::make_shared<const Expr>(Op::kLiteral, value, std::string{}, 0,
                                      std::vector<ExprPtr>{});
}

ExprPtr Expr::feature(std::string name, std::size_t index) {
  return std::make_shared<const Expr>(Op::kFeature, 0.0, std::move(name), index,
                                      std::vector<ExprPtr>{});
}

ExprPtr Expr::make(Op op, std::vector<ExprPtr> children) {
  if (op == Op::kLiteral || op == Op::kFeature) {
    throw std::invalid_argument("Expr::make: leaf ops need their own factory");
  }
  if (static_cast<int>(children.size()) != arity(op)) {
    throw std::invalid_argument("Expr::make: wrong arity for " +
                                std::string(op_name(op)));
  }
  for (const auto& c : children) {
    if (!c) throw std::invalid_argument("Expr::make: null child");
  }
  if (op == Op::kNeg && children[0]->op() == Op::kLiteral) {
    return literal(-children[0]->value());
  }
  return std::make_shared<const Expr>(op, 0.0, std::string{}, 0,
                                      std::move(children));
}

ExprPtr Expr::unary(Op op, ExprPtr operand) {
  if (!is_unary(op)) throw std::invalid_argument("Expr::unary: not unary");
  return make(op, {std::move(operand)});
}

ExprPtr Expr::binary(Op op, ExprPtr lhs, ExprPtr rhs) {
  if (!is_binary(op)) throw std::invalid_argument("Expr::binary: not binary");
  return make(op, {std::move(lhs), std::move(rhs)});
}

ExprPtr Expr::if_then_else(ExprPtr cond, ExprPtr then_branch,
                           ExprPtr else_branch) {
  return make(Op::kIf,
              {std::move(cond), std::move(then_branch), std::move(else_branch)});
}

ExprPtr Expr::clamp(ExprPtr value, ExprPtr lo, ExprPtr hi) {
  return make(Op::kClamp, {std::move(value), std::move(lo), std::move(hi)});
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.op() != b.op()) return false;
  if (a.op() == Op::kLiteral) return a.value() == b.value();
  if (a.op() == Op::kFeature) return a.name() == b.name();
  const auto ca = a.children();
  const auto cb = b.children();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!structurally_equal(*ca[i], *cb[i])) return false;
  }
  return true;
}

namespace {

constexpr int kPrecCompare = 1;
constexpr int kPrecAdditive = 2;
constexpr int kPrecMultiplicative = 3;
constexpr int kPrecUnary = 4;
constexpr int kPrecPrimary = 5;

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::kLiteral:
      return e.value() < 0.0 ? kPrecUnary : kPrecPrimary;
    case Op::kNeg:
      return kPrecUnary;
    case Op::kAdd:
    case Op::kSub:
      return kPrecAdditive;
    case Op::kMul:
    case Op::kDiv:
      return kPrecMultiplicative;
    default:
      return is_comparison(e.op()) ? kPrecCompare : kPrecPrimary;
  }
}

bool is_infix(Op op) {
  return op == Op::kAdd || op == Op::kSub || op == Op::kMul ||
         op == Op::kDiv || is_comparison(op);
}

void format_literal(double v, std::string& out) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, bool parens, std::string& out) {
  if (parens) out.push_back('(');
  print(child, out);
  if (parens) out.push_back(')');
}

void print(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::kLiteral:
      format_literal(e.value(), out);
      return;
    case Op::kFeature:
      out += e.name();
      return;
    case Op::kNeg: {
      const Expr& c = *e.children()[0];
      out.push_back('-');
      print_child(c, precedence(c) <= kPrecUnary, out);
      return;
    }
    default:
      break;
  }
  if (is_infix(e.op())) {
    const int p = precedence(e);
    const Expr& lhs = *e.children()[0];
    const Expr& rhs = *e.children()[1];
    const bool lhs_parens = precedence(lhs) < p ||
                            (lhs.op() == Op::kLiteral && lhs.value() < 0.0) ||
                            (p == kPrecCompare && is_comparison(lhs.op()));
    const bool rhs_parens = precedence(rhs) <= p ||
                            (rhs.op() == Op::kLiteral && rhs.value() < 0.0);
    print_child(lhs, lhs_parens, out);
    out.push_back(' ');
    out += op_name(e.op());
    out.push_back(' ');
    print_child(rhs, rhs_parens, out);
    return;
  }
  out += op_name(e.op());
  out.push_back('(');
  bool first = true;
  for (const auto& c : e.children()) {
    if (!first) out += ", ";
    first = false;
    print(*c, out);
  }
  out.push_back(')');
}

}  // namespace

std::string canonical_print(const Expr& expr) {
  std::string out;
  print(expr, out);
  return out;
}

std::vector<const Expr*> preorder(const Expr& root) {
  std::vector<const Expr*> out;
  out.reserve(root.node_count());
  std::vector<const Expr*> stack{&root};
  while (!stack.empty()) {
    const Expr* e = stack.back();
    stack.pop_back();
    out.push_back(e);
    const auto ch = e->children();
    for (std::size_t i = ch.size(); i-- > 0;) stack.push_back(ch[i].get());
  }
  return out;
}

ExprPtr replace_node(const ExprPtr& root, std::size_t index,
                     ExprPtr replacement) {
  if (index == 0) return replacement;
  if (index >= root->node_count()) {
    throw std::out_of_range("replace_node: index past node count");
  }
  std::size_t offset = 1;
  std::vector<ExprPtr> children(root->children().begin(),
                                root->children().end());
  for (auto& c : children) {
    if (index < offset + c->node_count()) {
      c = replace_node(c, index - offset, std::move(replacement));
      return Expr::make(root->op(), std::move(children));
    }
    offset += c->node_count();
  }
  throw std::logic_error("replace_node: inconsistent node counts");
}

}  // namespace heurevo::dsl
