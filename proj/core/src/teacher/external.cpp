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

#include "heurevo/teacher/external.hpp"

#include <cerrno>
#include <cstring>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "heurevo/teacher/channel.hpp"
#include "heurevo/teacher/protocol.hpp"

namespace heurevo::teacher {

std::string_view to_string(Transport t) { return t == Transport::kProcess ? "process" : "tcp"; }

Transport parse_transport(std::string_view name) {
  if (name == "process" || name == "stdio") return Transport::kProcess;
  if (name == "tcp") return Transport::kTcp;
  throw std::invalid_argument(fmt::format("unknown teacher transport '{}'", name));
}

namespace {

class ExternalTeacher final : public Teacher {
 public:
  explicit ExternalTeacher(ExternalTeacherConfig config) : config_(std::move(config)) {
    if (config_.connections == 0) config_.connections = 1;
    if (config_.transport == Transport::kProcess && config_.command.empty()) {
      throw std::invalid_argument("external teacher: process transport needs a command");
    }
    if (config_.transport == Transport::kTcp && (config_.port <= 0 || config_.port > 65535)) {
      throw std::invalid_argument("external teacher: tcp transport needs a port");
    }
    for (std::size_t i = 0; i < config_.connections; ++i) {
      slots_.push_back(std::make_unique<Slot>());
    }
  }

  const std::string& name() const override { return config_.name; }
  Capability capability() const override { return config_.capability; }

  TeacherReply query(const EpisodeState& state) const override {
    // Prefer an idle connection; otherwise wait on a round-robin one.
    const std::size_t start = next_.fetch_add(1) % slots_.size();
    std::unique_lock<std::mutex> lock;
    Slot* slot = nullptr;
    for (std::size_t k = 0; k < slots_.size() && slot == nullptr; ++k) {
      Slot& s = *slots_[(start + k) % slots_.size()];
      std::unique_lock<std::mutex> l(s.mu, std::try_to_lock);
      if (l.owns_lock()) {
        lock = std::move(l);
        slot = &s;
      }
    }
    if (slot == nullptr) {
      slot = slots_[start].get();
      lock = std::unique_lock<std::mutex>(slot->mu);
    }
    if (!slot->channel) {
      slot->channel = config_.transport == Transport::kProcess
                          ? spawn_process(config_.command)
                          : connect_tcp(config_.host, config_.port);
      slot->next_id = 1;
    }
    const std::int64_t id = slot->next_id++;
    try {
      slot->channel->write_line(encode_request(id, state));
      const std::string line = slot->channel->read_line(config_.timeout);
      TeacherReply reply = decode_response(line, id, state);
      if (config_.capability == Capability::kScores && !reply.scores) {
        throw ProtocolError(
            fmt::format("teacher '{}' is declared scores-capable but sent an action", config_.name));
      }
      if (config_.capability == Capability::kActionOnly) reply.scores.reset();
      return reply;
    } catch (...) {
      slot->channel.reset();
      throw;
    }
  }

 private:
  struct Slot {
    std::mutex mu;
    std::unique_ptr<LineChannel> channel;
    std::int64_t next_id = 1;
  };

  ExternalTeacherConfig config_;
  std::vector<std::unique_ptr<Slot>> slots_;
  mutable std::atomic<std::size_t> next_{0};
};

}  // namespace

TeacherPtr external_teacher(ExternalTeacherConfig config) {
  return std::make_shared<ExternalTeacher>(std::move(config));
}

std::size_t serve_stream(const Teacher& teacher, std::istream& in, std::ostream& out) {
  std::size_t served = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const Request req = decode_request(line);
    const TeacherReply reply = teacher.query(req.state);
    out << encode_response(req.id, reply, req.state) << '\n' << std::flush;
    ++served;
  }
  return served;
}

namespace {

void serve_connection(const Teacher& teacher, int fd, const std::atomic<bool>& stop) {
  FdChannel channel(fd, fd);
  while (!stop.load()) {
    std::string line;
    try {
      line = channel.read_line(std::chrono::milliseconds(200));
    } catch (const TeacherTimeout&) {
      continue;
    } catch (const ProtocolError&) {
      return;  // peer closed
    }
    if (line.empty()) continue;
    try {
      const Request req = decode_request(line);
      channel.write_line(encode_response(req.id, teacher.query(req.state), req.state));
    } catch (const std::exception& e) {
      spdlog::warn("teacher server: dropping connection: {}", e.what());
      return;
    }
  }
}

}  // namespace

void serve_tcp(const Teacher& teacher, const std::string& host, int port,
               const std::atomic<bool>& stop, const std::function<void(int)>& on_listening) {
  const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) throw std::runtime_error("socket failed: " + std::string(std::strerror(errno)));
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw std::invalid_argument("serve_tcp: host must be an IPv4 address");
  }
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd, 16) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw std::runtime_error(fmt::format("cannot listen on {}:{}: {}", host, port, err));
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_listening) on_listening(ntohs(addr.sin_port));
  std::vector<std::jthread> workers;
  while (!stop.load()) {
    pollfd pfd{fd, POLLIN, 0};
    if (::poll(&pfd, 1, 100) <= 0) continue;
    const int client = ::accept4(fd, nullptr, nullptr, SOCK_CLOEXEC);
    if (client < 0) continue;
    workers.emplace_back([&teacher, client, &stop] { serve_connection(teacher, client, stop); });
  }
  workers.clear();
  ::close(fd);
}

}  // namespace heurevo::teacher
