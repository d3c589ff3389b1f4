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

#include "heurevo/dsl/program.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "heurevo/dsl/parser.hpp"
#include "heurevo/util/hash.hpp"

namespace heurevo::dsl {

std::string_view to_string(RevisionMode mode) {
  switch (mode) {
    case RevisionMode::kSeed: return "seed";
    case RevisionMode::kStructural: return "structural";
    case RevisionMode::kCalibration: return "calibration";
    case RevisionMode::kFusion: return "fusion";
    case RevisionMode::kMock: return "mock";
  }
  return "seed";
}

RevisionMode parse_revision_mode(std::string_view name) {
  if (name == "seed") return RevisionMode::kSeed;
  if (name == "structural") return RevisionMode::kStructural;
  if (name == "calibration") return RevisionMode::kCalibration;
  if (name == "fusion") return RevisionMode::kFusion;
  if (name == "mock") return RevisionMode::kMock;
  throw std::invalid_argument("unknown revision mode '" + std::string(name) +
                              "'");
}

HeuristicProgram HeuristicProgram::parse(std::string_view source,
                                         const FeatureSchema& schema,
                                         ProgramMeta meta) {
  HeuristicProgram p;
  p.source_ = std::string(source);
  p.ast_ = parse_expression(source, schema);
  p.task_ = schema.task();
  p.meta_ = std::move(meta);
  p.compile();
  return p;
}

HeuristicProgram HeuristicProgram::from_ast(ExprPtr ast,
                                            const FeatureSchema& schema,
                                            ProgramMeta meta) {
  if (!ast) throw std::invalid_argument("from_ast: null tree");
  if (ast->depth() > kMaxDepth || ast->node_count() > kMaxNodes) {
    throw ParseError(ParseErrorKind::kResourceLimit, 1, 1,
                     "expression exceeds resource limits");
  }
  for (const Expr* e : preorder(*ast)) {
    if (e->op() != Op::kFeature) continue;
    auto idx = schema.index_of(e->name());
    if (!idx || schema.name(*idx) != e->name() || *idx != e->feature_index()) {
      throw ParseError(ParseErrorKind::kUnknownFeature, 1, 1,
                       "unknown feature '" + e->name() + "'", e->name());
    }
  }
  HeuristicProgram p;
  p.ast_ = std::move(ast);
  p.task_ = schema.task();
  p.meta_ = std::move(meta);
  p.compile();
  p.source_ = p.canonical_;
  return p;
}

HeuristicProgram HeuristicProgram::with_meta(ProgramMeta meta) const {
  HeuristicProgram p = *this;
  p.meta_ = std::move(meta);
  return p;
}

void HeuristicProgram::compile() {
  canonical_ = canonical_print(*ast_);
  id_ = content_hash(canonical_);
  // Post-order instruction stream for a stack machine.
  auto code = std::make_shared<std::vector<Instr>>();
  code->reserve(ast_->node_count());
  required_features_ = 0;
  struct Frame {
    const Expr* node;
    bool expanded;
  };
  std::vector<Frame> stack{{ast_.get(), false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (!f.expanded && !f.node->children().empty()) {
      stack.push_back({f.node, true});
      const auto ch = f.node->children();
      for (std::size_t i = ch.size(); i-- > 0;) stack.push_back({ch[i].get(), false});
      continue;
    }
    Instr in{f.node->op(), static_cast<std::uint32_t>(f.node->feature_index()),
             f.node->value()};
    if (in.op == Op::kFeature) {
      required_features_ =
          std::max(required_features_, f.node->feature_index() + 1);
    }
    code->push_back(in);
  }
  code_ = std::move(code);
}

namespace {

constexpr double kDivEpsilon = 1e-12;
constexpr double kLogFloor = 1e-12;

inline double sanitize(double v) { return std::isfinite(v) ? v : kNegInf; }

}  // namespace

double HeuristicProgram::evaluate(std::span<const double> features) const {
  if (features.size() < required_features_) {
    // Report the first referenced slot that is absent.
    for (const Expr* e : preorder(*ast_)) {
      if (e->op() == Op::kFeature && e->feature_index() >= features.size()) {
        throw MissingFeature(e->name());
      }
    }
  }
  // Stack height never exceeds the tree depth times the widest arity.
  std::array<double, 3 * kMaxDepth + 3> stack;
  std::size_t sp = 0;
  for (const Instr& in : *code_) {
    double r;
    switch (in.op) {
      case Op::kLiteral:
        r = in.value;
        break;
      case Op::kFeature:
        r = sanitize(features[in.feature]);
        break;
      case Op::kNeg:
        r = -stack[--sp];
        break;
      case Op::kAbs:
        r = std::fabs(stack[--sp]);
        break;
      case Op::kSqrt:
        r = std::sqrt(std::max(stack[--sp], 0.0));
        break;
      case Op::kLog:
        r = std::log(std::max(stack[--sp], kLogFloor));
        break;
      case Op::kExp:
        r = std::exp(stack[--sp]);
        break;
      case Op::kIf: {
        const double b = stack[--sp];
        const double a = stack[--sp];
        const double c = stack[--sp];
        r = c == kNegInf ? kNegInf : (c != 0.0 ? a : b);
        break;
      }
      case Op::kClamp: {
        const double hi = stack[--sp];
        const double lo = stack[--sp];
        const double x = stack[--sp];
        r = std::min(std::max(x, lo), hi);
        break;
      }
      default: {
        const double b = stack[--sp];
        const double a = stack[--sp];
        switch (in.op) {
          case Op::kAdd: r = a + b; break;
          case Op::kSub: r = a - b; break;
          case Op::kMul: r = a * b; break;
          case Op::kDiv: r = std::fabs(b) < kDivEpsilon ? 0.0 : a / b; break;
          case Op::kMin: r = std::min(a, b); break;
          case Op::kMax: r = std::max(a, b); break;
          case Op::kPow: r = std::pow(a, b); break;
          case Op::kLt: r = a < b ? 1.0 : 0.0; break;
          case Op::kLe: r = a <= b ? 1.0 : 0.0; break;
          case Op::kGt: r = a > b ? 1.0 : 0.0; break;
          case Op::kGe: r = a >= b ? 1.0 : 0.0; break;
          case Op::kEq: r = a == b ? 1.0 : 0.0; break;
          default: r = kNegInf; break;
        }
        break;
      }
    }
    stack[sp++] = sanitize(r);
  }
  return stack[0];
}

double HeuristicProgram::evaluate(
    const std::map<std::string, double>& features) const {
  std::vector<double> slots(required_features_, 0.0);
  for (const Expr* e : preorder(*ast_)) {
    if (e->op() != Op::kFeature) continue;
    auto it = features.find(e->name());
    if (it == features.end()) throw MissingFeature(e->name());
    slots[e->feature_index()] = it->second;
  }
  return evaluate(std::span<const double>(slots));
}

ActionId argmax_action(const EpisodeState& state,
                       std::span<const double> scores) {
  if (state.candidates.empty()) throw EmptyActionSet();
  std::size_t best = 0;
  for (std::size_t i = 1; i < state.candidates.size(); ++i) {
    const bool better = scores[i] > scores[best];
    const bool tie_smaller = scores[i] == scores[best] &&
                             state.candidates[i].id < state.candidates[best].id;
    if (better || tie_smaller) best = i;
  }
  return state.candidates[best].id;
}

ActionId select_action(const HeuristicProgram& program,
                       const EpisodeState& state) {
  if (state.candidates.empty()) throw EmptyActionSet();
  std::vector<double> scores;
  scores.reserve(state.candidates.size());
  for (const auto& c : state.candidates) {
    scores.push_back(program.evaluate(std::span<const double>(c.features)));
  }
  return argmax_action(state, scores);
}

std::string format_program_file(const HeuristicProgram& program) {
  std::string out;
  if (!program.description().empty()) {
    std::string desc = program.description();
    std::replace(desc.begin(), desc.end(), '\n', ' ');
    out += "# desc: " + desc + "\n";
  }
  out += program.canonical();
  out += "\n";
  return out;
}

HeuristicProgram parse_program_file(std::string_view text,
                                    const FeatureSchema& schema) {
  ProgramMeta meta;
  constexpr std::string_view kDescTag = "# desc:";
  if (text.substr(0, kDescTag.size()) == kDescTag) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(kDescTag.size(), eol - kDescTag.size());
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
      line.remove_prefix(1);
    }
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) {
      line.remove_suffix(1);
    }
    meta.description = std::string(line);
  }
  // The comment line is skipped by the lexer; positions stay file-relative.
  return HeuristicProgram::parse(text, schema, std::move(meta));
}

HeuristicProgram read_program_file(const std::string& path,
                                   const FeatureSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open program file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_program_file(buf.str(), schema);
}

}  // namespace heurevo::dsl
