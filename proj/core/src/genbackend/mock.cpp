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

#include "heurevo/genbackend/mock.hpp"

#include <cmath>

#include <fmt/format.h>

#include "heurevo/dsl/parser.hpp"
#include "heurevo/engine/instance.hpp"
#include "heurevo/genbackend/prompt.hpp"
#include "heurevo/util/hash.hpp"

namespace heurevo::genbackend {

using dsl::Expr;
using dsl::ExprPtr;
using dsl::Op;

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

// Four significant digits keeps calibrated constants readable.
double round_sig(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  const double mag = std::pow(10.0, 3 - std::floor(std::log10(std::fabs(v))));
  return std::round(v * mag) / mag;
}

ExprPtr random_leaf(const dsl::FeatureSchema& schema, Rng& rng, double feature_share) {
  if (rng.bernoulli(feature_share)) {
    const auto i = rng.below(schema.size());
    return Expr::feature(schema.name(i), i);
  }
  static constexpr double kConstants[] = {0.5, 1.0, 2.0, 3.0, 0.1, 10.0};
  if (rng.bernoulli(0.5)) return Expr::literal(kConstants[rng.below(std::size(kConstants))]);
  return Expr::literal(round2(rng.uniform(-2.0, 2.0)));
}

ExprPtr random_tree(const dsl::FeatureSchema& schema, int depth, Rng& rng) {
  if (depth <= 1 || rng.bernoulli(0.3)) return random_leaf(schema, rng, 0.7);
  static constexpr Op kOps[] = {Op::kAdd, Op::kSub, Op::kMul, Op::kDiv, Op::kMin,
                                Op::kMax, Op::kNeg, Op::kLog, Op::kSqrt, Op::kIf};
  const Op op = kOps[rng.below(std::size(kOps))];
  if (op == Op::kIf) {
    static constexpr Op kCmp[] = {Op::kLt, Op::kGt};
    auto cond = Expr::binary(kCmp[rng.below(2)], random_leaf(schema, rng, 1.0),
                             random_leaf(schema, rng, 0.5));
    return Expr::if_then_else(std::move(cond), random_tree(schema, depth - 1, rng),
                              random_tree(schema, depth - 1, rng));
  }
  if (dsl::arity(op) == 1) return Expr::unary(op, random_tree(schema, depth - 1, rng));
  return Expr::binary(op, random_tree(schema, depth - 1, rng), random_tree(schema, depth - 1, rng));
}

bool within_limits(const Expr& e) {
  return e.depth() <= dsl::kMaxDepth && e.node_count() <= dsl::kMaxNodes;
}

GenerationResponse respond(const ExprPtr& tree, std::string description) {
  return {std::move(description), dsl::canonical_print(*tree)};
}

GenerationResponse calibrate(const dsl::HeuristicProgram& parent, Rng& rng) {
  const auto nodes = dsl::preorder(*parent.ast());
  std::vector<std::size_t> literals;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i]->op() == Op::kLiteral) literals.push_back(i);
  }
  if (literals.empty()) {
    // Nothing to tune without changing the shape.
    return respond(parent.ast(), "Keeps the parent unchanged because it has no constants.");
  }
  const std::size_t at = literals[rng.below(literals.size())];
  const double old_v = nodes[at]->value();
  const double factor = rng.uniform(0.5, 2.0);
  double new_v = round_sig(old_v * factor);
  if (old_v == 0.0) new_v = round_sig(rng.bernoulli(0.5) ? factor : -factor);
  auto tree = dsl::replace_node(parent.ast(), at, Expr::literal(new_v));
  return respond(tree, fmt::format("Retunes constant {} to {} and keeps the backbone.",
                                   fmt::format("{}", old_v), fmt::format("{}", new_v)));
}

GenerationResponse restructure(const dsl::HeuristicProgram& parent,
                               const dsl::FeatureSchema& schema, Rng& rng) {
  const auto nodes = dsl::preorder(*parent.ast());
  for (int attempt = 0; attempt < 8; ++attempt) {
    const std::size_t at = rng.below(nodes.size());
    auto sub = random_expression(schema, 3, rng);
    auto tree = dsl::replace_node(parent.ast(), at, sub);
    if (within_limits(*tree)) {
      return respond(tree, fmt::format("Replaces the component {} with {}.",
                                       dsl::canonical_print(*nodes[at]),
                                       dsl::canonical_print(*sub)));
    }
  }
  auto sub = random_expression(schema, 3, rng);
  return respond(sub, "Replaces the whole rule with a new component.");
}

GenerationResponse fuse(const dsl::HeuristicProgram& a, const dsl::HeuristicProgram& b, Rng& rng) {
  const auto a_nodes = dsl::preorder(*a.ast());
  const auto b_nodes = dsl::preorder(*b.ast());
  for (int attempt = 0; attempt < 8; ++attempt) {
    const std::size_t at = rng.below(a_nodes.size());
    const bool want_cmp = dsl::is_comparison(a_nodes[at]->op());
    std::vector<std::size_t> donors, fallback;
    for (std::size_t j = 0; j < b_nodes.size(); ++j) {
      if (dsl::is_comparison(b_nodes[j]->op()) != want_cmp) continue;
      fallback.push_back(j);
      if (b_nodes[j]->has_feature()) donors.push_back(j);
    }
    if (donors.empty()) donors = fallback;
    if (donors.empty()) continue;
    const std::size_t from = donors[rng.below(donors.size())];
    ExprPtr graft(b.ast(), b_nodes[from]);  // aliases the donor tree
    auto tree = dsl::replace_node(a.ast(), at, graft);
    if (!within_limits(*tree) || dsl::canonical_print(*tree) == a.canonical()) continue;
    return respond(tree, fmt::format("Grafts {} from the alignment-strong parent into the "
                                     "objective-strong parent in place of {}.",
                                     dsl::canonical_print(*graft),
                                     dsl::canonical_print(*a_nodes[at])));
  }
  auto tree = Expr::binary(Op::kAdd, a.ast(), b.ast());
  if (!within_limits(*tree)) tree = a.ast();
  return respond(tree, "Adds the two parent scores.");
}

}  // namespace

ExprPtr random_expression(const dsl::FeatureSchema& schema, int max_depth, Rng& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    auto e = random_tree(schema, std::max(1, max_depth), rng);
    if (e->has_feature()) return e;
  }
  const auto i = rng.below(schema.size());
  return Expr::feature(schema.name(i), i);
}

GenerationResponse mock_generate(const GenerationRequest& request, Rng& rng) {
  if (request.parents.empty()) throw std::invalid_argument("generation request has no parent");
  const auto& schema = schema_for(request.task);
  switch (request.mode) {
    case dsl::RevisionMode::kCalibration: return calibrate(request.parents[0].program, rng);
    case dsl::RevisionMode::kFusion:
      if (request.parents.size() >= 2) {
        return fuse(request.parents[0].program, request.parents[1].program, rng);
      }
      [[fallthrough]];
    default: return restructure(request.parents[0].program, schema, rng);
  }
}

namespace {

std::uint64_t request_seed(std::uint64_t seed, const std::vector<Message>& prompt, int attempt) {
  std::uint64_t h = fnv1a64("mock");
  for (const auto& m : prompt) {
    h = fnv1a64(m.role, h);
    h = fnv1a64(m.content, h);
  }
  return mix_seed(mix_seed(seed, h), static_cast<std::uint64_t>(attempt));
}

}  // namespace

std::string MockBackend::do_generate(const GenerationRequest& request) {
  Rng rng(request_seed(options_.seed, build_prompt(request), request.attempt));
  if (options_.fault_rate > 0.0 && rng.bernoulli(options_.fault_rate)) {
    return "I would rather describe the idea in prose.";
  }
  const auto r = mock_generate(request, rng);
  return fmt::format("{{{}}}\n```\n{}\n```\n", r.description, r.program_source);
}

std::string MockBackend::do_analyze(const AnalyzerRequest& request) {
  Rng rng(request_seed(options_.seed, build_analyzer_prompt(request), 0));
  const MemberStats* best = nullptr;
  const MemberStats* most_aligned = nullptr;
  double mean_align = 0.0;
  for (const auto& m : request.members) {
    if (!best || m.objective < best->objective) best = &m;
    if (!most_aligned || m.align > most_aligned->align) most_aligned = &m;
    mean_align += m.align;
  }
  if (!request.members.empty()) mean_align /= static_cast<double>(request.members.size());
  const std::string cite = request.disagreements.empty()
                               ? std::string("no recorded case")
                               : request.disagreements[rng.below(request.disagreements.size())].label;
  const std::string best_id = best ? best->id : "none";
  const std::string aligned_id = most_aligned ? most_aligned->id : "none";
  return fmt::format(
      "[structural] Mean agreement is {:.3f}; rewrite the term that drives choices like {}.\n"
      "[calibration] Program {} picks reasonable actions; retune its constants around {}.\n"
      "[fusion] Combine the objective-strong program {} with the alignment-strong program {}.\n",
      mean_align, cite, best_id, cite, best_id, aligned_id);
}

}  // namespace heurevo::genbackend
