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

#ifndef SGG_SERVICE_HPP
#define SGG_SERVICE_HPP

#include <cstddef>
#include <iosfwd>
#include <string>

#include "sgg/config.hpp"

namespace sgg {

/// Newline-delimited reward scoring for external RL training loops. One JSON
/// request per line, one JSON response per line; responses may be reordered,
/// ids correlate them. The wire schema is documented in
/// docs/wire-protocol.md. Totals are bit-identical to offline
/// score_completion with the same configuration.
class ScoreService {
 public:
  static constexpr int kProtocolVersion = 1;

  explicit ScoreService(ToolkitConfig config) : config_(std::move(config)) {}

  /// Processes one request line. Malformed requests produce an error
  /// response, never an exception or a missing reply.
  std::string handle_line(const std::string& line) const;

  const ToolkitConfig& config() const { return config_; }

 private:
  ToolkitConfig config_;
};

/// Pumps requests from `in` to `out` with a bounded worker pool until EOF or
/// a termination signal; in-flight work is drained before returning.
void serve_stream(const ScoreService& service, std::istream& in,
                  std::ostream& out, std::size_t threads = 0);

/// stdin/stdout transport. Returns a process exit code.
int serve_stdio(const ScoreService& service, std::size_t threads = 0);

/// TCP transport: each connection speaks the same line protocol. Returns a
/// non-zero exit code when the port cannot be bound.
int serve_tcp(const ScoreService& service, int port, std::size_t threads = 0);

}  // namespace sgg

#endif  // SGG_SERVICE_HPP
