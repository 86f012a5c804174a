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

#ifndef SGG_TESTS_TESTUTIL_HPP
#define SGG_TESTS_TESTUTIL_HPP

#include <random>
#include <set>
#include <string>
#include <vector>

#include "sgg/graph.hpp"

namespace testutil {

using Rng = std::mt19937_64;

inline double unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int int_in(Rng& rng, int lo, int hi) {  // inclusive
  const auto span = static_cast<unsigned long long>(hi - lo + 1);
  return lo + static_cast<int>(rng() % span);
}

inline const std::vector<std::string>& label_pool() {
  static const std::vector<std::string> pool = {
      "zebra", "grass", "person", "tree", "car", "dog", "sky", "road"};
  return pool;
}

inline const std::vector<std::string>& predicate_pool() {
  static const std::vector<std::string> pool = {
      "on", "beside", "eating", "holding", "over", "parked-on"};
  return pool;
}

inline const std::vector<std::string>& group_pool() {
  static const std::vector<std::string> pool = {"attention", "spatial",
                                                "contacting"};
  return pool;
}

// Integer boxes on a coarse grid so exact duplicates and IoU ties occur.
inline sgg::BoundingBox random_box(Rng& rng, bool coarse = true) {
  const int step = coarse ? 40 : 1;
  const int x1 = int_in(rng, 0, 600 / step) * step;
  const int y1 = int_in(rng, 0, 440 / step) * step;
  const int w = int_in(rng, 0, (640 - x1) / step) * step;
  const int h = int_in(rng, 0, (480 - y1) / step) * step;
  return {static_cast<double>(x1), static_cast<double>(y1),
          static_cast<double>(x1 + w), static_cast<double>(y1 + h)};
}

// A structurally valid graph with ids 0..n-1, unique relation triples, no
// self-loops. Object labels and boxes intentionally collide across objects.
inline sgg::SceneGraph random_graph(Rng& rng, int max_objects = 12,
                                    int max_relations = 10) {
  sgg::SceneGraph graph;
  const int n = int_in(rng, 0, max_objects);
  for (int i = 0; i < n; ++i) {
    sgg::SceneObject obj;
    obj.id = i;
    obj.label = label_pool()[static_cast<std::size_t>(
        int_in(rng, 0, static_cast<int>(label_pool().size()) - 1))];
    if (i > 0 && unit(rng) < 0.2) {
      obj.box = graph.objects[static_cast<std::size_t>(
                                  int_in(rng, 0, i - 1))].box;
    } else {
      obj.box = random_box(rng);
    }
    graph.objects.push_back(std::move(obj));
  }
  if (n >= 2) {
    const int m = int_in(rng, 0, max_relations);
    std::set<std::tuple<int, std::string, int>> seen;
    for (int r = 0; r < m; ++r) {
      sgg::Relation rel;
      rel.subject_id = int_in(rng, 0, n - 1);
      rel.object_id = int_in(rng, 0, n - 1);
      if (rel.subject_id == rel.object_id) continue;
      rel.predicate = predicate_pool()[static_cast<std::size_t>(
          int_in(rng, 0, static_cast<int>(predicate_pool().size()) - 1))];
      if (!seen.insert({rel.subject_id, rel.predicate, rel.object_id}).second) {
        continue;
      }
      graph.relations.push_back(std::move(rel));
    }
  }
  return graph;
}

// Valid HumanObject graph: person at slot 0, all relations person->object,
// grouped canonical relation order (object rank, then group).
inline sgg::SceneGraph random_human_graph(Rng& rng, int max_objects = 8,
                                          int max_relations = 8) {
  sgg::SceneGraph graph;
  graph.schema = sgg::Schema::kHumanObject;
  const int n = int_in(rng, 1, std::max(1, max_objects));
  for (int i = 0; i < n; ++i) {
    sgg::SceneObject obj;
    obj.id = i;
    obj.label = i == 0 ? "person"
                       : label_pool()[static_cast<std::size_t>(
                             int_in(rng, 0, 5))];
    if (obj.label == "person" && i != 0) obj.label = "dog";
    obj.box = random_box(rng);
    graph.objects.push_back(std::move(obj));
  }
  if (n >= 2) {
    const int m = int_in(rng, 0, max_relations);
    std::set<std::tuple<int, int, std::string>> seen;  // (object, group, value)
    std::vector<std::tuple<int, int, std::string>> triples;
    for (int r = 0; r < m; ++r) {
      const int object = int_in(rng, 1, n - 1);
      const int group = int_in(rng, 0, 2);
      const std::string predicate = predicate_pool()[static_cast<std::size_t>(
          int_in(rng, 0, static_cast<int>(predicate_pool().size()) - 1))];
      if (seen.insert({object, group, predicate}).second) {
        triples.emplace_back(object, group, predicate);
      }
    }
    // Grouped order: object endpoints in first-appearance order, groups in
    // header order, values in draw order.
    std::vector<int> object_order;
    for (const auto& [object, group, predicate] : triples) {
      bool known = false;
      for (int o : object_order) known = known || o == object;
      if (!known) object_order.push_back(object);
    }
    for (int object : object_order) {
      for (int group = 0; group < 3; ++group) {
        for (const auto& [o, g, predicate] : triples) {
          if (o != object || g != group) continue;
          sgg::Relation rel;
          rel.subject_id = 0;
          rel.object_id = o;
          rel.predicate = predicate;
          rel.group = group_pool()[static_cast<std::size_t>(g)];
          graph.relations.push_back(std::move(rel));
        }
      }
    }
  }
  return graph;
}

inline std::string wrap_answer(const std::string& toon_text) {
  return "<answer>\n" + toon_text + "</answer>";
}

}  // namespace testutil

#endif  // SGG_TESTS_TESTUTIL_HPP
