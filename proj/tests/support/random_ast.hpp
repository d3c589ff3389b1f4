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

#ifndef HEUREVO_TESTS_SUPPORT_RANDOM_AST_HPP_
#define HEUREVO_TESTS_SUPPORT_RANDOM_AST_HPP_

#include <random>
#include <vector>

#include "heurevo/dsl/expr.hpp"
#include "heurevo/dsl/schema.hpp"

namespace heurevo::testing {

// Random expression trees for property tests. Uses std::mt19937 directly so
// it shares nothing with the library's own generators.
class AstGenerator {
 public:
  AstGenerator(const dsl::FeatureSchema& schema, unsigned seed) : schema_(schema), gen_(seed) {}

  dsl::ExprPtr operator()(int max_depth) { return build(max_depth); }

 private:
  dsl::ExprPtr leaf() {
    if (pick(3) == 0) {
      std::uniform_real_distribution<double> u(-100.0, 100.0);
      static const double specials[] = {0.0, 1.0, 2.5, 1e-13, 1e300, -7.0, 0.1};
      return dsl::Expr::literal(pick(2) ? u(gen_) : specials[pick(7)]);
    }
    const std::size_t i = pick(schema_.size());
    return dsl::Expr::feature(schema_.name(i), i);
  }

  dsl::ExprPtr build(int depth) {
    if (depth <= 1 || pick(4) == 0) return leaf();
    using dsl::Op;
    static const Op ops[] = {Op::kNeg, Op::kAbs, Op::kSqrt, Op::kLog, Op::kExp, Op::kAdd,
                             Op::kSub, Op::kMul, Op::kDiv, Op::kMin, Op::kMax, Op::kPow,
                             Op::kLt,  Op::kLe,  Op::kGt,  Op::kGe,  Op::kEq,  Op::kIf,
                             Op::kClamp};
    const Op op = ops[pick(std::size(ops))];
    std::vector<dsl::ExprPtr> kids;
    for (int k = 0; k < dsl::arity(op); ++k) kids.push_back(build(depth - 1));
    return dsl::Expr::make(op, std::move(kids));
  }

  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_);
  }

  const dsl::FeatureSchema& schema_;
  std::mt19937 gen_;
};

}  // namespace heurevo::testing

#endif  // HEUREVO_TESTS_SUPPORT_RANDOM_AST_HPP_
