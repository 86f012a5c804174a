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

#include "sgg/judge.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>

#include <httplib.h>
#include <json.hpp>

namespace sgg {

namespace {

std::pair<std::string, std::string> ordered(const std::string& a,
                                            const std::string& b) {
  return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

void SynonymJudge::add_object_synonym(const std::string& a,
                                      const std::string& b) {
  object_pairs_.insert(ordered(a, b));
}

void SynonymJudge::add_predicate_synonym(const std::string& a,
                                         const std::string& b) {
  predicate_pairs_.insert(ordered(a, b));
}

SynonymJudge SynonymJudge::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw JudgeError("cannot open synonym file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw JudgeError("bad synonym file " + path + ": " + e.what());
  }

  SynonymJudge judge;
  const auto load = [&](const char* key, auto add) {
    if (!doc.contains(key)) return;
    for (const auto& pair : doc[key]) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
          !pair[1].is_string()) {
        throw JudgeError(std::string("bad synonym entry under \"") + key +
                         "\" in " + path);
      }
      add(pair[0].template get<std::string>(),
          pair[1].template get<std::string>());
    }
  };
  load("objects", [&](const std::string& a, const std::string& b) {
    judge.add_object_synonym(a, b);
  });
  load("predicates", [&](const std::string& a, const std::string& b) {
    judge.add_predicate_synonym(a, b);
  });
  return judge;
}

bool SynonymJudge::judge_objects(const std::string& label_a,
                                 const std::string& label_b,
                                 const std::string&) {
  return label_a == label_b || object_pairs_.count(ordered(label_a, label_b));
}

bool SynonymJudge::judge_predicates(const std::string& predicate_a,
                                    const std::string& predicate_b,
                                    const std::string&, const std::string&,
                                    const std::string&) {
  return predicate_a == predicate_b ||
         predicate_pairs_.count(ordered(predicate_a, predicate_b));
}

HttpJudge::HttpJudge(HttpJudgeConfig config) : config_(std::move(config)) {
  // Split http[s]://host[:port]/path into client base and request path.
  const std::string& url = config_.endpoint;
  std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw JudgeError("judge endpoint must be a full URL: " + url);
  }
  const std::size_t slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) {
    host_ = url;
    path_ = "/";
  } else {
    host_ = url.substr(0, slash);
    path_ = url.substr(slash);
  }
}

bool HttpJudge::post(const std::string& body) {
  httplib::Client client(host_);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);

  httplib::Headers headers;
  if (const char* token = std::getenv(config_.bearer_token_env.c_str())) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    auto response = client.Post(path_, headers, body, "application/json");
    if (!response) {
      last_error = "transport error: " + httplib::to_string(response.error());
      continue;
    }
    if (response->status != 200) {
      last_error = "judge returned HTTP " + std::to_string(response->status);
      continue;
    }
    try {
      const auto doc = nlohmann::json::parse(response->body);
      if (doc.contains("equivalent") && doc["equivalent"].is_boolean()) {
        return doc["equivalent"].get<bool>();
      }
      last_error = "judge response missing boolean \"equivalent\"";
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("bad judge response: ") + e.what();
    }
  }
  throw JudgeError(last_error.empty() ? "judge request failed" : last_error);
}

bool HttpJudge::judge_objects(const std::string& label_a,
                              const std::string& label_b,
                              const std::string& scene_context) {
  nlohmann::json body;
  body["kind"] = "object";
  body["a"] = label_a;
  body["b"] = label_b;
  body["context"] = scene_context;
  return post(body.dump());
}

bool HttpJudge::judge_predicates(const std::string& predicate_a,
                                 const std::string& predicate_b,
                                 const std::string& subject_label,
                                 const std::string& object_label,
                                 const std::string& scene_context) {
  nlohmann::json body;
  body["kind"] = "predicate";
  body["a"] = predicate_a;
  body["b"] = predicate_b;
  body["subject"] = subject_label;
  body["object"] = object_label;
  body["context"] = scene_context;
  return post(body.dump());
}

template <typename Compute>
bool CachingJudge::lookup(const Key& key, Compute&& compute) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    ++lookups_;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  const bool verdict = compute();
  std::lock_guard<std::mutex> lock(mutex_);
  ++misses_;
  cache_.emplace(key, verdict);
  return verdict;
}

bool CachingJudge::judge_objects(const std::string& label_a,
                                 const std::string& label_b,
                                 const std::string& scene_context) {
  const Key key{0, label_a, label_b, "", "",
                std::hash<std::string>{}(scene_context)};
  return lookup(key, [&] {
    return inner_.judge_objects(label_a, label_b, scene_context);
  });
}

bool CachingJudge::judge_predicates(const std::string& predicate_a,
                                    const std::string& predicate_b,
                                    const std::string& subject_label,
                                    const std::string& object_label,
                                    const std::string& scene_context) {
  const Key key{1, predicate_a, predicate_b, subject_label, object_label,
                std::hash<std::string>{}(scene_context)};
  return lookup(key, [&] {
    return inner_.judge_predicates(predicate_a, predicate_b, subject_label,
                                   object_label, scene_context);
  });
}

std::size_t CachingJudge::lookups() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return lookups_;
}

std::size_t CachingJudge::misses() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return misses_;
}

}  // namespace sgg
