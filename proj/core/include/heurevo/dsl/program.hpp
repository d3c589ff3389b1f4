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

#ifndef HEUREVO_DSL_PROGRAM_HPP_
#define HEUREVO_DSL_PROGRAM_HPP_

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "heurevo/dsl/expr.hpp"
#include "heurevo/dsl/schema.hpp"
#include "heurevo/engine/state.hpp"

namespace heurevo::dsl {

// Score assigned to actions whose evaluation went non-finite. Ranks the
// action strictly last.
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum class RevisionMode { kSeed, kStructural, kCalibration, kFusion, kMock };

std::string_view to_string(RevisionMode mode);
RevisionMode parse_revision_mode(std::string_view name);

class MissingFeature : public std::out_of_range {
 public:
  explicit MissingFeature(const std::string& name)
      : std::out_of_range("missing feature '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class EmptyActionSet : public std::invalid_argument {
 public:
  EmptyActionSet() : std::invalid_argument("state has no candidate actions") {}
};

struct ProgramMeta {
  std::string description;
  std::vector<std::string> parent_ids;
  RevisionMode revision_mode = RevisionMode::kSeed;
};

// A validated scoring expression: the unit of evolution. Immutable once
// built; copies share the tree and the compiled instruction stream, and
// evaluation is reentrant.
class HeuristicProgram {
 public:
  // Parses and validates `source` against `schema`. Throws ParseError.
  static HeuristicProgram parse(std::string_view source,
                                const FeatureSchema& schema,
                                ProgramMeta meta = {});
  // Wraps an already-built tree. The tree must satisfy the resource bounds
  // and reference only schema features (throws ParseError otherwise).
  static HeuristicProgram from_ast(ExprPtr ast, const FeatureSchema& schema,
                                   ProgramMeta meta = {});

  const std::string& source_text() const { return source_; }
  const ExprPtr& ast() const { return ast_; }
  const std::string& canonical() const { return canonical_; }
  // Content hash of the canonical text.
  const std::string& id() const { return id_; }
  TaskKind task() const { return task_; }
  const std::string& description() const { return meta_.description; }
  const std::vector<std::string>& parent_ids() const {
    return meta_.parent_ids;
  }
  RevisionMode revision_mode() const { return meta_.revision_mode; }

  HeuristicProgram with_meta(ProgramMeta meta) const;

  // Scores one candidate. Features are indexed by schema slot; throws
  // MissingFeature if the vector is too short for a referenced slot.
  double evaluate(std::span<const double> features) const;
  // Name-keyed evaluation, mainly for tests and diagnostics.
  double evaluate(const std::map<std::string, double>& features) const;

 private:
  struct Instr {
    Op op;
    std::uint32_t feature;
    double value;
  };

  HeuristicProgram() = default;
  void compile();

  std::string source_;
  ExprPtr ast_;
  std::string canonical_;
  std::string id_;
  TaskKind task_ = TaskKind::kJssp;
  ProgramMeta meta_;
  std::shared_ptr<const std::vector<Instr>> code_;
  std::size_t required_features_ = 0;
};

// Argmax of the program's score over the candidates. Ties (including the
// all-NEG_INF case) go to the smallest ActionId. Throws EmptyActionSet.
ActionId select_action(const HeuristicProgram& program,
                       const EpisodeState& state);

// Same rule over precomputed scores aligned with `state.candidates`.
ActionId argmax_action(const EpisodeState& state, std::span<const double> scores);

// Program file: optional first line "# desc: <sentence>", then the
// expression.
std::string format_program_file(const HeuristicProgram& program);
HeuristicProgram parse_program_file(std::string_view text,
                                    const FeatureSchema& schema);
HeuristicProgram read_program_file(const std::string& path,
                                   const FeatureSchema& schema);

}  // namespace heurevo::dsl

#endif  // HEUREVO_DSL_PROGRAM_HPP_
