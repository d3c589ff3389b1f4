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

// Line-delimited JSON messages exchanged with external teachers.
//
//   request:  {"id":7,"task":"jssp","candidates":[{"aid":0,"features":{...}},...],
//              "context":{...}}
//   response: {"id":7,"scores":{"0":1.5,...}}  or  {"id":7,"action":0}
#ifndef HEUREVO_TEACHER_PROTOCOL_HPP_
#define HEUREVO_TEACHER_PROTOCOL_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "heurevo/engine/state.hpp"
#include "heurevo/teacher/teacher.hpp"

namespace heurevo::teacher {

nlohmann::ordered_json request_json(std::int64_t id, const EpisodeState& state);
std::string encode_request(std::int64_t id, const EpisodeState& state);

struct Request {
  std::int64_t id = 0;
  EpisodeState state;
};
// Features are keyed by schema name and must cover the task schema.
// Throws ProtocolError.
Request decode_request(std::string_view line);

// Scores when present, else the action.
std::string encode_response(std::int64_t id, const TeacherReply& reply,
                            const EpisodeState& state);

// Validates a reply against the state it answers. Scores must cover every
// candidate. An action outside the candidate set is a ProtocolError, except
// for CVRP where it folds to the depot restart when that is available.
TeacherReply decode_response(std::string_view line, std::int64_t expected_id,
                             const EpisodeState& state);

}  // namespace heurevo::teacher

#endif  // HEUREVO_TEACHER_PROTOCOL_HPP_
