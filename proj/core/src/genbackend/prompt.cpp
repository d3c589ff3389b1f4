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

#include "heurevo/genbackend/prompt.hpp"

#include <regex>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "heurevo/engine/instance.hpp"
#include "heurevo/genbackend/backend.hpp"

namespace heurevo::genbackend {

std::string_view to_string(ExtractErrorKind kind) {
  switch (kind) {
    case ExtractErrorKind::kNoDescription: return "no_description";
    case ExtractErrorKind::kNoCode: return "no_code";
    case ExtractErrorKind::kEmptyCode: return "empty_code";
    case ExtractErrorKind::kMalformedBriefs: return "malformed_briefs";
  }
  return "unknown";
}

const RevisionBrief& BriefSet::for_mode(dsl::RevisionMode mode) const {
  switch (mode) {
    case dsl::RevisionMode::kCalibration: return calibration;
    case dsl::RevisionMode::kFusion: return fusion;
    default: return structural;
  }
}

bool BriefSet::empty() const {
  return structural.text.empty() && calibration.text.empty() && fusion.text.empty();
}

namespace {

constexpr std::string_view kOutputContract =
    "You write scoring expressions for a constructive decision procedure.\n"
    "Reply with exactly two parts and nothing else:\n"
    "1. A one-sentence description of the algorithm enclosed in braces, e.g. {...}.\n"
    "2. The program as a single expression inside one fenced code block.\n"
    "Do not add explanations, alternatives, or additional code blocks.";

constexpr std::string_view kGrammar =
    "Expression language:\n"
    "- numbers, feature names, parentheses\n"
    "- infix + - * / (division by |y| < 1e-12 yields 0), unary minus\n"
    "- comparisons < <= > >= == yielding 0 or 1\n"
    "- abs(x) sqrt(x) log(x) exp(x) min(x, y) max(x, y) pow(x, y)\n"
    "- if(cond, then, else) takes `then` when cond is nonzero; clamp(x, lo, hi)\n"
    "- non-finite intermediate results rank the action last\n"
    "No loops, assignments, or other functions exist.";

struct TaskText {
  std::string_view decision;
  std::string_view objective;
  std::string_view actions;
};

TaskText task_text(TaskKind task) {
  switch (task) {
    case TaskKind::kJssp:
      return {"Job-shop scheduling: at each step one ready operation is dispatched.",
              "Minimize the makespan (completion time of the last operation).",
              "Each candidate is the next unscheduled operation of one job; its id is the job index."};
    case TaskKind::kTsp:
      return {"Traveling salesman: the tour is built one node at a time from node 0.",
              "Minimize the closed tour length, including the return to node 0.",
              "Each candidate is an unvisited node; its id is the node index."};
    case TaskKind::kCvrp:
      return {"Capacitated vehicle routing: routes are built one customer at a time from the depot.",
              "Minimize the total length of all routes.",
              "Candidates are feasible customers (demand fits the remaining capacity) and, when away "
              "from the depot, the restart action with id 0 that closes the route and refills the vehicle."};
    case TaskKind::kMaxCut:
      return {"Max-cut local search: at each step one vertex switches partition side.",
              "Maximize the best cut found; the reported objective is the negated best cut.",
              "Every vertex is a candidate; its id is the vertex index."};
  }
  return {};
}

std::string fmt_num(double v) { return fmt::format("{:.6g}", v); }

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_num(*v) : "n/a"; }

std::string feature_line(const dsl::FeatureSchema& schema, const FeatureVector& f) {
  std::string out;
  for (std::size_t i = 0; i < schema.size() && i < f.size(); ++i) {
    if (i) out += ", ";
    out += fmt::format("{}={}", schema.name(i), fmt_num(f[i]));
  }
  return out;
}

std::string describe_case(const dsl::FeatureSchema& schema, const teacher::DisagreementCase& c) {
  std::string out = fmt::format("step {} (state {}):\n", c.step, c.state_digest);
  out += fmt::format("  program chose {}", to_int(c.heuristic_action));
  if (c.heuristic_score) out += fmt::format(" [teacher value {}]", fmt_num(*c.heuristic_score));
  out += fmt::format(": {}\n", feature_line(schema, c.heuristic_features));
  out += fmt::format("  teacher chose {}", to_int(c.teacher_action));
  if (c.teacher_score) out += fmt::format(" [teacher value {}]", fmt_num(*c.teacher_score));
  out += fmt::format(": {}\n", feature_line(schema, c.teacher_features));
  return out;
}

std::string_view mode_instruction(dsl::RevisionMode mode, bool teacher_guided) {
  if (!teacher_guided) {
    return mode == dsl::RevisionMode::kFusion
               ? "Write a new program that combines useful ideas from both parent programs."
               : "Write an improved variant of the parent program.";
  }
  switch (mode) {
    case dsl::RevisionMode::kStructural:
      return "Structural rewrite: change one higher-level decision component of the parent "
             "(one term, gate or sub-rule) so that the recurring disagreements below would be "
             "resolved. Keep everything else as it is.";
    case dsl::RevisionMode::kCalibration:
      return "Parameter calibration: keep the program backbone exactly as it is and only adjust "
             "its weights, thresholds, gates, phase boundaries or tie-breaking constants. Do not "
             "add, remove or reorder operators or features.";
    case dsl::RevisionMode::kFusion:
      return "Mechanism fusion: merge the mechanism of the objective-strong parent with the "
             "complementary mechanism of the alignment-strong parent at the same decision layer, "
             "keeping the objective-strong behavior intact.";
    default:
      return "Write an improved variant of the parent program.";
  }
}

}  // namespace

std::string task_adapter(TaskKind task, bool with_diagnostics) {
  const auto& schema = schema_for(task);
  const TaskText t = task_text(task);
  std::string out = fmt::format("Task: {}\n{}\nObjective: {}\nActions: {}\n", to_string(task),
                                t.decision, t.objective, t.actions);
  out +=
      "Program signature: one expression evaluated for every candidate action; the action with "
      "the highest score is taken, ties going to the smallest id.\n";
  out += "Features available per candidate:\n";
  for (const auto& f : schema.features()) {
    out += fmt::format("- {}: {}\n", f.name, f.description);
  }
  out += kGrammar;
  out += '\n';
  if (!with_diagnostics) return out;
  out +=
      "Diagnostics: align = share of sampled states where the program picks the teacher's "
      "action; value = mean min-max normalized teacher score of the program's action; "
      "percentile = mean share of other candidates the teacher scores strictly lower.\n";
  return out;
}

std::vector<Message> build_prompt(const GenerationRequest& request) {
  const auto& schema = schema_for(request.task);
  std::string user = task_adapter(request.task, request.teacher_guided);
  user += "\n";
  user += mode_instruction(request.mode, request.teacher_guided);
  user += "\n";
  for (std::size_t i = 0; i < request.parents.size(); ++i) {
    const auto& p = request.parents[i];
    std::string label = request.parents.size() > 1 ? fmt::format("Parent {}", i + 1) : "Parent";
    if (!p.role.empty()) label += fmt::format(" ({})", p.role);
    user += fmt::format("\n{}:\n", label);
    if (!p.program.description().empty()) user += fmt::format("{{{}}}\n", p.program.description());
    user += fmt::format("```\n{}\n```\n", p.program.canonical());
    user += fmt::format("objective = {}", fmt_num(p.objective));
    if (request.teacher_guided) {
      user += fmt::format(", align = {}, value = {}, percentile = {}", fmt_num(p.align),
                          fmt_opt(p.value), fmt_opt(p.percentile));
    }
    user += "\n";
  }
  if (request.teacher_guided) {
    if (!request.brief.empty()) user += fmt::format("\nRevision brief:\n{}\n", request.brief);
    if (!request.disagreements.empty()) {
      user += "\nStates where the parent and the teacher disagree:\n";
      for (const auto& c : request.disagreements) user += describe_case(schema, c);
    }
  }
  if (!request.retry_feedback.empty()) {
    user += fmt::format("\nYour previous answer was rejected: {}\n", request.retry_feedback);
  }
  return {{"system", std::string(kOutputContract)}, {"user", std::move(user)}};
}

std::vector<Message> build_analyzer_prompt(const AnalyzerRequest& request) {
  const auto& schema = schema_for(request.task);
  std::string system =
      "You analyze how a population of scoring programs deviates from a teacher policy.\n"
      "Reply with exactly three sections, each starting on its own line with its tag:\n"
      "[structural] which decision component to rewrite and why\n"
      "[calibration] which weights, thresholds or gates look miscalibrated\n"
      "[fusion] which objective-strong and alignment-strong mechanisms to combine\n"
      "Keep each section to at most three sentences and cite disagreement labels such as D1.";
  std::string user = task_adapter(request.task);
  user += fmt::format("\nGeneration {} population:\n", request.generation);
  for (const auto& m : request.members) {
    user += fmt::format("- {}: objective = {}, align = {}, value = {}, percentile = {}\n  {}\n",
                        m.id, fmt_num(m.objective), fmt_num(m.align), fmt_opt(m.value),
                        fmt_opt(m.percentile), m.source);
  }
  if (!request.disagreements.empty()) {
    user += "\nDisagreement cases:\n";
    for (const auto& d : request.disagreements) {
      user += fmt::format("{} (program {}) {}", d.label, d.member_id, describe_case(schema, d.item));
    }
  }
  return {{"system", std::move(system)}, {"user", std::move(user)}};
}

GenerationResponse extract_response(std::string_view raw) {
  GenerationResponse out;
  const auto open = raw.find('{');
  const auto close = open == std::string_view::npos ? open : raw.find('}', open + 1);
  if (close == std::string_view::npos) {
    throw ExtractError(ExtractErrorKind::kNoDescription, "no brace-enclosed description");
  }
  std::string desc(raw.substr(open + 1, close - open - 1));
  for (char& c : desc) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  const auto b = desc.find_first_not_of(" \t");
  const auto e = desc.find_last_not_of(" \t");
  if (b == std::string::npos) {
    throw ExtractError(ExtractErrorKind::kNoDescription, "empty description");
  }
  out.description = desc.substr(b, e - b + 1);

  // Fences are lines starting with ``` (an info string may follow).
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos <= raw.size();) {
    auto nl = raw.find('\n', pos);
    if (nl == std::string_view::npos) nl = raw.size();
    lines.push_back(raw.substr(pos, nl - pos));
    pos = nl + 1;
  }
  auto is_fence = [](std::string_view l) {
    const auto s = l.find_first_not_of(" \t");
    return s != std::string_view::npos && l.substr(s, 3) == "```";
  };
  std::size_t fences = 0, first = lines.size(), last = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!is_fence(lines[i])) continue;
    ++fences;
    if (first == lines.size()) {
      first = i;
    } else if (last == lines.size()) {
      last = i;
    }
  }
  if (last == lines.size()) throw ExtractError(ExtractErrorKind::kNoCode, "no fenced code block");
  if (fences > 2) spdlog::warn("response has {} code fences; using the first block", fences / 2);
  std::string code;
  for (std::size_t i = first + 1; i < last; ++i) {
    if (!code.empty()) code += '\n';
    code += lines[i];
  }
  if (code.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ExtractError(ExtractErrorKind::kEmptyCode, "empty code block");
  }
  out.program_source = std::move(code);
  return out;
}

BriefSet parse_briefs(std::string_view raw, const AnalyzerRequest& request) {
  static const std::regex tag(R"(\[(structural|calibration|fusion)\])");
  static const std::regex label(R"(\bD\d+\b)");
  std::set<std::string> known;
  for (const auto& d : request.disagreements) known.insert(d.label);

  const std::string text(raw);
  std::vector<std::pair<std::string, std::size_t>> marks;  // (name, body start)
  std::vector<std::size_t> starts;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), tag); it != std::sregex_iterator();
       ++it) {
    marks.emplace_back((*it)[1].str(), static_cast<std::size_t>(it->position() + it->length()));
    starts.push_back(static_cast<std::size_t>(it->position()));
  }
  BriefSet out;
  std::set<std::string> found;
  for (std::size_t i = 0; i < marks.size(); ++i) {
    const auto& [name, begin] = marks[i];
    if (!found.insert(name).second) continue;
    const std::size_t end = i + 1 < marks.size() ? starts[i + 1] : text.size();
    std::string body = text.substr(begin, end - begin);
    const auto b = body.find_first_not_of(" \t\r\n:");
    const auto e = body.find_last_not_of(" \t\r\n");
    body = b == std::string::npos ? std::string() : body.substr(b, e - b + 1);
    RevisionBrief& brief = name == "structural"    ? out.structural
                           : name == "calibration" ? out.calibration
                                                   : out.fusion;
    brief.text = body;
    std::set<std::string> seen;
    for (auto it = std::sregex_iterator(body.begin(), body.end(), label);
         it != std::sregex_iterator(); ++it) {
      const std::string l = it->str();
      if (known.count(l) && seen.insert(l).second) brief.cited.push_back(l);
    }
  }
  if (found.size() != 3 || out.structural.text.empty() || out.calibration.text.empty() ||
      out.fusion.text.empty()) {
    throw ExtractError(ExtractErrorKind::kMalformedBriefs, "analyzer reply lacks a section");
  }
  return out;
}

BriefSet analyzer_call(Backend& backend, const AnalyzerRequest& request) {
  try {
    return parse_briefs(backend.analyze(request), request);
  } catch (const ExtractError& e) {
    spdlog::warn("analyzer reply unusable ({}); continuing without briefs", e.what());
  } catch (const BackendUnavailable& e) {
    spdlog::warn("analyzer unavailable ({}); continuing without briefs", e.what());
  }
  return {};
}

}  // namespace heurevo::genbackend
