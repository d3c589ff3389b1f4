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

#include "heurevo/teacher/diagnostics.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace heurevo::teacher {

double percentile_rank(const std::vector<double>& scores, std::size_t chosen) {
  if (scores.size() <= 1) return 1.0;
  std::size_t lower = 0;
  for (double s : scores) lower += s < scores[chosen];
  return static_cast<double>(lower) / static_cast<double>(scores.size() - 1);
}

DiagnosticsSummary compute_diagnostics(const Teacher& teacher,
                                       const std::vector<RolloutResult>& rollouts,
                                       std::size_t max_cases) {
  DiagnosticsSummary out;
  std::size_t matches = 0;
  double value_sum = 0.0, pct_sum = 0.0;
  bool scored = teacher.capability() == Capability::kScores;
  std::vector<DisagreementCase> cases;

  for (const auto& r : rollouts) {
    for (const auto& sample : r.sampled_states) {
      const EpisodeState& s = sample.state;
      const TeacherReply reply = teacher.query(s);
      const CandidateAction* h = s.find(sample.chosen);
      const CandidateAction* t = s.find(reply.action);
      if (h == nullptr || t == nullptr) {
        throw ProtocolError(fmt::format("teacher '{}' answered action {} outside the state",
                                        teacher.name(), to_int(reply.action)));
      }
      ++out.n_states;
      const bool agree = reply.action == sample.chosen;
      matches += agree;
      std::optional<double> hs, ts;
      if (scored) {
        if (!reply.scores || reply.scores->size() != s.candidates.size()) {
          throw ProtocolError(fmt::format("teacher '{}' did not score every candidate",
                                          teacher.name()));
        }
        const auto norm = normalize_scores(std::span<const double>(*reply.scores));
        const auto hi = static_cast<std::size_t>(h - s.candidates.data());
        const auto ti = static_cast<std::size_t>(t - s.candidates.data());
        hs = norm[hi];
        ts = norm[ti];
        value_sum += norm[hi];
        pct_sum += percentile_rank(*reply.scores, hi);
      }
      if (!agree) {
        cases.push_back({state_digest(s), s.step, h->id, h->features, t->id, t->features, hs, ts});
      }
    }
  }
  if (out.n_states == 0) throw NoSampledStates();
  const auto n = static_cast<double>(out.n_states);
  out.align = static_cast<double>(matches) / n;
  if (scored) {
    out.value = value_sum / n;
    out.mean_percentile = pct_sum / n;
    std::stable_sort(cases.begin(), cases.end(),
                     [](const auto& a, const auto& b) { return a.gap() > b.gap(); });
  }
  if (cases.size() > max_cases) cases.resize(max_cases);
  out.disagreements = std::move(cases);
  return out;
}

}  // namespace heurevo::teacher
