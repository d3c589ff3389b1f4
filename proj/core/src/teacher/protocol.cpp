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

#include "heurevo/teacher/protocol.hpp"

#include <cmath>

#include <fmt/format.h>

#include "heurevo/engine/instance.hpp"

namespace heurevo::teacher {

using nlohmann::ordered_json;

ordered_json request_json(std::int64_t id, const EpisodeState& state) {
  const auto& schema = schema_for(state.task);
  ordered_json msg;
  msg["id"] = id;
  msg["task"] = std::string(to_string(state.task));
  ordered_json cands = ordered_json::array();
  for (const auto& c : state.candidates) {
    ordered_json feats = ordered_json::object();
    for (std::size_t i = 0; i < c.features.size() && i < schema.size(); ++i) {
      feats[schema.name(i)] = c.features[i];
    }
    cands.push_back({{"aid", to_int(c.id)}, {"features", std::move(feats)}});
  }
  msg["candidates"] = std::move(cands);
  ordered_json ctx = ordered_json::object();
  for (const auto& [k, v] : state.context) ctx[k] = v;
  msg["context"] = std::move(ctx);
  return msg;
}

std::string encode_request(std::int64_t id, const EpisodeState& state) {
  return request_json(id, state).dump();
}

namespace {

ordered_json parse_line(std::string_view line) {
  try {
    auto j = ordered_json::parse(line);
    if (!j.is_object()) throw ProtocolError("message is not a JSON object");
    return j;
  } catch (const ordered_json::parse_error& e) {
    throw ProtocolError(fmt::format("malformed JSON: {}", e.what()));
  }
}

double finite_number(const ordered_json& v, std::string_view what) {
  if (!v.is_number()) throw ProtocolError(fmt::format("{} is not a number", what));
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ProtocolError(fmt::format("{} is not finite", what));
  return d;
}

std::int64_t integer(const ordered_json& v, std::string_view what) {
  if (!v.is_number_integer()) throw ProtocolError(fmt::format("{} is not an integer", what));
  return v.get<std::int64_t>();
}

}  // namespace

Request decode_request(std::string_view line) {
  const auto j = parse_line(line);
  Request req;
  try {
    req.id = integer(j.at("id"), "id");
    req.state.task = parse_task(j.at("task").get<std::string>());
    const auto& schema = schema_for(req.state.task);
    for (const auto& c : j.at("candidates")) {
      CandidateAction ca;
      ca.id = ActionId{integer(c.at("aid"), "aid")};
      ca.features.assign(schema.size(), 0.0);
      std::vector<bool> seen(schema.size(), false);
      for (const auto& [name, v] : c.at("features").items()) {
        const auto idx = schema.index_of(name);
        if (!idx) throw ProtocolError(fmt::format("unknown feature '{}'", name));
        ca.features[*idx] = finite_number(v, name);
        seen[*idx] = true;
      }
      for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) throw ProtocolError(fmt::format("missing feature '{}'", schema.name(i)));
      }
      req.state.candidates.push_back(std::move(ca));
    }
    for (const auto& [k, v] : j.at("context").items()) {
      req.state.context.emplace_back(k, finite_number(v, k));
    }
  } catch (const ordered_json::exception& e) {
    throw ProtocolError(fmt::format("bad request: {}", e.what()));
  } catch (const std::invalid_argument& e) {
    throw ProtocolError(fmt::format("bad request: {}", e.what()));
  }
  return req;
}

std::string encode_response(std::int64_t id, const TeacherReply& reply,
                            const EpisodeState& state) {
  ordered_json msg;
  msg["id"] = id;
  if (reply.scores) {
    ordered_json scores = ordered_json::object();
    for (std::size_t i = 0; i < state.candidates.size(); ++i) {
      scores[std::to_string(to_int(state.candidates[i].id))] = (*reply.scores)[i];
    }
    msg["scores"] = std::move(scores);
  } else {
    msg["action"] = to_int(reply.action);
  }
  return msg.dump();
}

TeacherReply decode_response(std::string_view line, std::int64_t expected_id,
                             const EpisodeState& state) {
  const auto j = parse_line(line);
  TeacherReply reply;
  try {
    const auto id = integer(j.at("id"), "id");
    if (id != expected_id) {
      throw ProtocolError(fmt::format("reply id {} does not match request id {}", id, expected_id));
    }
    const bool has_scores = j.contains("scores"), has_action = j.contains("action");
    if (has_scores == has_action) {
      throw ProtocolError("reply must carry exactly one of 'scores' or 'action'");
    }
    if (has_scores) {
      const auto& obj = j.at("scores");
      if (!obj.is_object()) throw ProtocolError("'scores' is not an object");
      std::vector<double> scores(state.candidates.size());
      std::vector<bool> seen(state.candidates.size(), false);
      for (const auto& [key, v] : obj.items()) {
        std::int64_t aid;
        try {
          std::size_t used = 0;
          aid = std::stoll(key, &used);
          if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
          throw ProtocolError(fmt::format("score key '{}' is not an action id", key));
        }
        const CandidateAction* c = state.find(ActionId{aid});
        if (c == nullptr) {
          if (state.task == TaskKind::kCvrp) continue;
          throw ProtocolError(fmt::format("score for unknown action {}", aid));
        }
        const auto idx = static_cast<std::size_t>(c - state.candidates.data());
        scores[idx] = finite_number(v, "score");
        seen[idx] = true;
      }
      for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
          throw ProtocolError(
              fmt::format("no score for candidate {}", to_int(state.candidates[i].id)));
        }
      }
      reply.action = dsl::argmax_action(state, scores);
      reply.scores = std::move(scores);
    } else {
      const ActionId a{integer(j.at("action"), "action")};
      if (state.contains(a)) {
        reply.action = a;
      } else if (state.task == TaskKind::kCvrp && state.contains(ActionId{0})) {
        reply.action = ActionId{0};
      } else {
        throw ProtocolError(fmt::format("action {} is not a candidate", to_int(a)));
      }
    }
  } catch (const ordered_json::exception& e) {
    throw ProtocolError(fmt::format("bad reply: {}", e.what()));
  }
  return reply;
}

}  // namespace heurevo::teacher
