// Copyright 2026 The sgg-toolkit Authors
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

#include "sgg/service.hpp"

#include <atomic>
#include <condition_variable>
#include <csignal>
#include <deque>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <json.hpp>

#include "config_internal.hpp"
#include "sgg/errors.hpp"
#include "sgg/toon.hpp"

namespace sgg {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

volatile std::sig_atomic_t g_stop_requested = 0;

void handle_signal(int) { g_stop_requested = 1; }

std::string dump_response(const ordered_json& response) {
  return response.dump(-1, ' ', false,
                       nlohmann::json::error_handler_t::replace);
}

ordered_json error_response(const std::string& id, const std::string& code,
                            const std::string& message) {
  ordered_json response;
  response["id"] = id;
  response["version"] = ScoreService::kProtocolVersion;
  response["error"]["code"] = code;
  response["error"]["message"] = message;
  return response;
}

ordered_json breakdown_response(const std::string& id,
                                const RewardBreakdown& breakdown) {
  ordered_json response;
  response["id"] = id;
  response["version"] = ScoreService::kProtocolVersion;
  response["valid_mask"] = breakdown.valid_mask;
  response["format"] = breakdown.format;
  response["obj_cls"] = breakdown.obj_cls;
  response["obj_box"] = breakdown.obj_box;
  response["rel_recall"] = breakdown.rel_recall;
  response["rel_precision"] = breakdown.rel_precision;
  response["rel_f1"] = breakdown.rel_f1;
  response["penalty_obj"] = breakdown.penalty_obj;
  response["penalty_rel"] = breakdown.penalty_rel;
  response["total"] = breakdown.total;
  ordered_json& d = response["diagnostics"];
  d["frac_no_rel"] = breakdown.diagnostics.frac_no_rel;
  d["num_pred_objs"] = breakdown.diagnostics.num_pred_objs;
  d["num_pred_rels"] = breakdown.diagnostics.num_pred_rels;
  d["frac_invalid_rel"] = breakdown.diagnostics.frac_invalid_rel;
  d["has_answer_tags"] = breakdown.diagnostics.has_answer_tags;
  return response;
}

}  // namespace

std::string ScoreService::handle_line(const std::string& line) const {
  json request;
  try {
    request = json::parse(line);
  } catch (const json::exception& e) {
    return dump_response(error_response("", "parse_error", e.what()));
  }
  if (!request.is_object()) {
    return dump_response(
        error_response("", "parse_error", "request must be a JSON object"));
  }

  std::string id;
  if (request.contains("id") && request["id"].is_string()) {
    id = request["id"].get<std::string>();
  }
  if (id.empty()) {
    return dump_response(
        error_response("", "bad_request", "non-empty string id required"));
  }

  try {
    const bool has_toon =
        request.contains("gt_toon") && request["gt_toon"].is_string();
    const bool has_json = request.contains("gt_json");
    if (has_toon == has_json) {
      return dump_response(error_response(
          id, "bad_request", "exactly one of gt_toon or gt_json is required"));
    }
    if (!request.contains("completion") ||
        !request["completion"].is_string()) {
      return dump_response(
          error_response(id, "bad_request", "completion string required"));
    }

    ToolkitConfig effective = config_;
    if (request.contains("schema")) {
      if (!request["schema"].is_string()) {
        return dump_response(
            error_response(id, "bad_request", "schema must be a string"));
      }
      const auto schema =
          schema_from_name(request["schema"].get<std::string>());
      if (!schema) {
        return dump_response(
            error_response(id, "bad_request", "unknown schema"));
      }
      effective.schema = *schema;
    }
    if (request.contains("weights")) {
      internal::apply_weights(request["weights"], effective.weights);
    }
    if (request.contains("match")) {
      internal::apply_match(request["match"], effective.match);
    }

    ParseOutcome gt_outcome =
        has_toon ? parse_toon(request["gt_toon"].get<std::string>(),
                              effective.schema)
                 : parse_json(request["gt_json"].dump(), effective.schema);
    if (!gt_outcome.valid || !gt_outcome.graph) {
      const std::string detail = gt_outcome.diagnostics.empty()
                                     ? "invalid ground truth"
                                     : gt_outcome.diagnostics.front().message;
      return dump_response(error_response(id, "bad_ground_truth", detail));
    }

    const RewardBreakdown breakdown =
        score_completion(*gt_outcome.graph,
                         request["completion"].get<std::string>(),
                         effective.weights, effective.match);
    return dump_response(breakdown_response(id, breakdown));
  } catch (const DataError& e) {
    return dump_response(error_response(id, "bad_request", e.what()));
  } catch (const std::exception& e) {
    return dump_response(error_response(id, "internal_error", e.what()));
  }
}

void serve_stream(const ScoreService& service, std::istream& in,
                  std::ostream& out, std::size_t threads) {
  if (threads == 0) {
    threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }

  std::mutex queue_mutex;
  std::condition_variable queue_ready;
  std::deque<std::string> queue;
  bool done_reading = false;

  std::mutex out_mutex;

  auto worker = [&] {
    while (true) {
      std::string line;
      {
        std::unique_lock<std::mutex> lock(queue_mutex);
        queue_ready.wait(lock, [&] { return done_reading || !queue.empty(); });
        if (queue.empty()) return;
        line = std::move(queue.front());
        queue.pop_front();
      }
      const std::string response = service.handle_line(line);
      std::lock_guard<std::mutex> lock(out_mutex);
      out << response << '\n' << std::flush;
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);

  std::string line;
  while (!g_stop_requested && std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    {
      std::lock_guard<std::mutex> lock(queue_mutex);
      queue.push_back(std::move(line));
    }
    queue_ready.notify_one();
  }
  {
    std::lock_guard<std::mutex> lock(queue_mutex);
    done_reading = true;
  }
  queue_ready.notify_all();
  for (auto& thread : pool) thread.join();
}

int serve_stdio(const ScoreService& service, std::size_t threads) {
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  serve_stream(service, std::cin, std::cout, threads);
  return 0;
}

namespace {

void serve_connection(const ScoreService& service, int fd,
                      std::size_t threads) {
  std::string buffer;
  char chunk[4096];

  std::mutex out_mutex;
  auto respond = [&](const std::string& line) {
    std::lock_guard<std::mutex> lock(out_mutex);
    std::string payload = line + "\n";
    std::size_t written = 0;
    while (written < payload.size()) {
      const ssize_t n =
          ::send(fd, payload.data() + written, payload.size() - written, 0);
      if (n <= 0) return;
      written += static_cast<std::size_t>(n);
    }
  };

  // Per-connection bounded pool.
  std::mutex queue_mutex;
  std::condition_variable queue_ready;
  std::deque<std::string> queue;
  bool closed = false;
  auto worker = [&] {
    while (true) {
      std::string line;
      {
        std::unique_lock<std::mutex> lock(queue_mutex);
        queue_ready.wait(lock, [&] { return closed || !queue.empty(); });
        if (queue.empty()) return;
        line = std::move(queue.front());
        queue.pop_front();
      }
      respond(service.handle_line(line));
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < std::max<std::size_t>(1, threads); ++i) {
    pool.emplace_back(worker);
  }

  while (!g_stop_requested) {
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t pos;
    while ((pos = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      {
        std::lock_guard<std::mutex> lock(queue_mutex);
        queue.push_back(std::move(line));
      }
      queue_ready.notify_one();
    }
  }
  {
    std::lock_guard<std::mutex> lock(queue_mutex);
    closed = true;
  }
  queue_ready.notify_all();
  for (auto& thread : pool) thread.join();
  ::close(fd);
}

}  // namespace

int serve_tcp(const ScoreService& service, int port, std::size_t threads) {
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);

  const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) {
    std::cerr << "cannot create socket\n";
    return 1;
  }
  const int enable = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &enable, sizeof(enable));

  sockaddr_in address{};
  address.sin_family = AF_INET;
  address.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  address.sin_port = htons(static_cast<uint16_t>(port));
  if (::bind(listener, reinterpret_cast<sockaddr*>(&address),
             sizeof(address)) != 0 ||
      ::listen(listener, 16) != 0) {
    std::cerr << "cannot bind port " << port << "\n";
    ::close(listener);
    return 1;
  }

  std::vector<std::thread> connections;
  while (!g_stop_requested) {
    const int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) break;
    connections.emplace_back(
        [&service, fd, threads] { serve_connection(service, fd, threads); });
  }
  ::close(listener);
  for (auto& connection : connections) connection.join();
  return 0;
}

}  // namespace sgg
