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

#ifndef SGG_JUDGE_HPP
#define SGG_JUDGE_HPP

#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace sgg {

/// Transport or protocol failure while consulting a judge. Soft evaluation
/// catches this, counts it, and falls back to the strict verdict.
class JudgeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resolves disputed label/predicate equivalence during soft evaluation. The
/// judge is consulted only for pairs that already failed exact matching but
/// whose geometry is aligned.
class JudgeClient {
 public:
  virtual ~JudgeClient() = default;

  virtual bool judge_objects(const std::string& label_a,
                             const std::string& label_b,
                             const std::string& scene_context) = 0;

  virtual bool judge_predicates(const std::string& predicate_a,
                                const std::string& predicate_b,
                                const std::string& subject_label,
                                const std::string& object_label,
                                const std::string& scene_context) = 0;
};

/// Deterministic synonym-table judge for tests, CI and offline runs. An empty
/// table accepts only identical strings, which makes soft evaluation collapse
/// to strict. Pairs are symmetric.
class SynonymJudge : public JudgeClient {
 public:
  SynonymJudge() = default;

  void add_object_synonym(const std::string& a, const std::string& b);
  void add_predicate_synonym(const std::string& a, const std::string& b);

  /// Loads {"objects": [["person", "man"], ...],
  ///        "predicates": [["on", "parked-on"], ...]}.
  static SynonymJudge from_file(const std::string& path);

  bool judge_objects(const std::string& label_a, const std::string& label_b,
                     const std::string& scene_context) override;
  bool judge_predicates(const std::string& predicate_a,
                        const std::string& predicate_b,
                        const std::string& subject_label,
                        const std::string& object_label,
                        const std::string& scene_context) override;

 private:
  std::set<std::pair<std::string, std::string>> object_pairs_;
  std::set<std::pair<std::string, std::string>> predicate_pairs_;
};

struct HttpJudgeConfig {
  std::string endpoint;  // e.g. http://host:8080/judge
  std::string bearer_token_env = "SGG_JUDGE_TOKEN";
  int timeout_seconds = 30;
  int max_retries = 2;
};

/// Posts disputed pairs to an external HTTP endpoint. Request and response
/// schemas are documented in docs/judge-protocol.md. Throws JudgeError after
/// exhausting retries.
class HttpJudge : public JudgeClient {
 public:
  explicit HttpJudge(HttpJudgeConfig config);

  bool judge_objects(const std::string& label_a, const std::string& label_b,
                     const std::string& scene_context) override;
  bool judge_predicates(const std::string& predicate_a,
                        const std::string& predicate_b,
                        const std::string& subject_label,
                        const std::string& object_label,
                        const std::string& scene_context) override;

 private:
  bool post(const std::string& body);

  HttpJudgeConfig config_;
  std::string host_;
  std::string path_;
};

/// Memoizing wrapper: each (kind, pair, context) is resolved at most once per
/// run. Thread-safe; failures are not cached.
class CachingJudge : public JudgeClient {
 public:
  explicit CachingJudge(JudgeClient& inner) : inner_(inner) {}

  bool judge_objects(const std::string& label_a, const std::string& label_b,
                     const std::string& scene_context) override;
  bool judge_predicates(const std::string& predicate_a,
                        const std::string& predicate_b,
                        const std::string& subject_label,
                        const std::string& object_label,
                        const std::string& scene_context) override;

  std::size_t lookups() const;
  std::size_t misses() const;

 private:
  using Key = std::tuple<int, std::string, std::string, std::string,
                         std::string, std::size_t>;

  template <typename Compute>
  bool lookup(const Key& key, Compute&& compute);

  JudgeClient& inner_;
  mutable std::mutex mutex_;
  std::map<Key, bool> cache_;
  std::size_t lookups_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace sgg

#endif  // SGG_JUDGE_HPP
