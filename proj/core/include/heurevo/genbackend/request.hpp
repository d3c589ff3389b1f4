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

#ifndef HEUREVO_GENBACKEND_REQUEST_HPP_
#define HEUREVO_GENBACKEND_REQUEST_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "heurevo/dsl/program.hpp"
#include "heurevo/teacher/diagnostics.hpp"

namespace heurevo::genbackend {

class BackendUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExtractErrorKind { kNoDescription, kNoCode, kEmptyCode, kMalformedBriefs };
std::string_view to_string(ExtractErrorKind kind);

class ExtractError : public std::runtime_error {
 public:
  ExtractError(ExtractErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ExtractErrorKind kind() const { return kind_; }

 private:
  ExtractErrorKind kind_;
};

struct ParentInfo {
  dsl::HeuristicProgram program;
  double objective = 0.0;
  double align = 0.0;
  std::optional<double> value;
  std::optional<double> percentile;
  // "objective-strong" / "alignment-strong" for fusion parents.
  std::string role;
};

struct GenerationRequest {
  TaskKind task = TaskKind::kJssp;
  dsl::RevisionMode mode = dsl::RevisionMode::kStructural;
  std::vector<ParentInfo> parents;
  std::string brief;
  std::vector<teacher::DisagreementCase> disagreements;
  // False for generic operators: no teacher statistics, brief, or cases.
  bool teacher_guided = true;
  // 0 for the first try; retries carry the previous failure.
  int attempt = 0;
  std::string retry_feedback;
};

struct GenerationResponse {
  std::string description;
  std::string program_source;
};

struct MemberStats {
  std::string id;
  std::string source;
  double objective = 0.0;
  double align = 0.0;
  std::optional<double> value;
  std::optional<double> percentile;
};

struct LabeledDisagreement {
  std::string label;  // "D1", "D2", ...
  std::string member_id;
  teacher::DisagreementCase item;
};

struct AnalyzerRequest {
  TaskKind task = TaskKind::kJssp;
  int generation = 0;
  std::vector<MemberStats> members;
  std::vector<LabeledDisagreement> disagreements;
};

struct RevisionBrief {
  dsl::RevisionMode mode = dsl::RevisionMode::kStructural;
  std::string text;
  std::vector<std::string> cited;
};

struct BriefSet {
  RevisionBrief structural{dsl::RevisionMode::kStructural, {}, {}};
  RevisionBrief calibration{dsl::RevisionMode::kCalibration, {}, {}};
  RevisionBrief fusion{dsl::RevisionMode::kFusion, {}, {}};

  const RevisionBrief& for_mode(dsl::RevisionMode mode) const;
  bool empty() const;
};

}  // namespace heurevo::genbackend

#endif  // HEUREVO_GENBACKEND_REQUEST_HPP_
