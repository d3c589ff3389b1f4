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

#ifndef HEUREVO_GENBACKEND_PROMPT_HPP_
#define HEUREVO_GENBACKEND_PROMPT_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "heurevo/genbackend/request.hpp"

namespace heurevo::genbackend {

struct Message {
  std::string role;  // "system" or "user"
  std::string content;

  bool operator==(const Message&) const = default;
};

// Task interface description: program signature, objective convention,
// action semantics, feature list and diagnostic field names. Contains no
// scoring rule. Generic operators omit the diagnostic fields.
std::string task_adapter(TaskKind task, bool with_diagnostics = true);

std::vector<Message> build_prompt(const GenerationRequest& request);
std::vector<Message> build_analyzer_prompt(const AnalyzerRequest& request);

// First brace span is the description, first fenced block the program.
// Throws ExtractError.
GenerationResponse extract_response(std::string_view raw);

// Analyzer reply: "[structural] ...", "[calibration] ...", "[fusion] ..."
// sections. Citations are D<k> labels present in `request`. Throws
// ExtractError(kMalformedBriefs) when a section is missing.
BriefSet parse_briefs(std::string_view raw, const AnalyzerRequest& request);

}  // namespace heurevo::genbackend

#endif  // HEUREVO_GENBACKEND_PROMPT_HPP_
