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

#include <doctest.h>

#include <limits>

#include "sgg/graph.hpp"
#include "testutil.hpp"

using namespace sgg;

namespace {

SceneGraph two_object_graph() {
  SceneGraph graph;
  graph.objects.push_back({0, "zebra", {0, 0, 100, 100}});
  graph.objects.push_back({1, "grass", {0, 50, 640, 480}});
  graph.relations.push_back({0, "on", 1, std::nullopt});
  return graph;
}

}  // namespace

TEST_CASE("well-formed graph validates cleanly") {
  const SceneGraph graph = two_object_graph();
  const ValidationReport report = validate_graph(graph);
  CHECK(report.ok());
}

TEST_CASE("self-relation is a violation") {
  SceneGraph graph = two_object_graph();
  graph.relations.push_back({1, "beside", 1, std::nullopt});
  const ValidationReport report = validate_graph(graph);
  CHECK(report.has("self_relation"));
}

TEST_CASE("inverted box is a violation") {
  SceneGraph graph = two_object_graph();
  graph.objects.push_back({2, "tree", {10, 10, 5, 20}});
  const ValidationReport report = validate_graph(graph);
  CHECK(report.has("degenerate_box"));
}

TEST_CASE("non-finite coordinates are a violation") {
  SceneGraph graph = two_object_graph();
  graph.objects[0].box.x2 = std::numeric_limits<double>::quiet_NaN();
  CHECK(validate_graph(graph).has("non_finite_box"));
}

TEST_CASE("dangling and duplicate relations are violations") {
  SceneGraph graph = two_object_graph();
  graph.relations.push_back({0, "under", 7, std::nullopt});
  graph.relations.push_back({0, "on", 1, std::nullopt});
  const ValidationReport report = validate_graph(graph);
  CHECK(report.has("dangling_reference"));
  CHECK(report.has("duplicate_relation"));
}

TEST_CASE("duplicate and negative object ids are violations") {
  SceneGraph graph = two_object_graph();
  graph.objects.push_back({1, "tree", {0, 0, 5, 5}});
  graph.objects.push_back({-3, "sky", {0, 0, 5, 5}});
  const ValidationReport report = validate_graph(graph);
  CHECK(report.has("duplicate_object_id"));
  CHECK(report.has("negative_object_id"));
}

TEST_CASE("labels must be serializable text") {
  SceneGraph graph = two_object_graph();
  graph.objects[0].label = "ze,bra";
  CHECK(validate_graph(graph).has("bad_label_text"));
  graph.objects[0].label = " zebra";
  CHECK(validate_graph(graph).has("bad_label_text"));
  graph.objects[0].label = "";
  CHECK(validate_graph(graph).has("empty_label"));
}

TEST_CASE("closed vocabulary flags unknown labels and predicates") {
  Vocabulary vocab;
  vocab.object_labels = {"zebra", "grass"};
  vocab.predicates = {"on"};

  SceneGraph graph = two_object_graph();
  CHECK(validate_graph(graph, &vocab, true).ok());

  graph.objects[0].label = "unicorn";
  graph.relations[0].predicate = "levitates above";
  const ValidationReport report = validate_graph(graph, &vocab, true);
  CHECK(report.has("unknown_label"));
  CHECK(report.has("unknown_predicate"));

  // Open mode ignores the vocabulary.
  CHECK(validate_graph(graph, &vocab, false).ok());
}

TEST_CASE("human-object schema rules") {
  SceneGraph graph;
  graph.schema = Schema::kHumanObject;
  graph.objects.push_back({0, "person", {0, 0, 100, 200}});
  graph.objects.push_back({1, "cup", {40, 80, 60, 100}});
  graph.relations.push_back({0, "looking at", 1, "attention"});
  CHECK(validate_graph(graph).ok());

  SUBCASE("group is mandatory") {
    graph.relations[0].group = std::nullopt;
    CHECK(validate_graph(graph).has("missing_group"));
  }
  SUBCASE("group must be known") {
    graph.relations[0].group = "gazing";
    CHECK(validate_graph(graph).has("unknown_group"));
  }
  SUBCASE("subject must be the leading object") {
    graph.relations[0].subject_id = 1;
    graph.relations[0].object_id = 0;
    CHECK(validate_graph(graph).has("non_person_subject"));
  }
  SUBCASE("person must sit in slot 0 when present") {
    std::swap(graph.objects[0], graph.objects[1]);
    CHECK(validate_graph(graph).has("person_not_first"));
  }
  SUBCASE("object-relation graphs reject group tags") {
    graph.schema = Schema::kObjectRelation;
    CHECK(validate_graph(graph).has("unexpected_group"));
  }
}

TEST_CASE("validation is idempotent") {
  testutil::Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    SceneGraph graph = testutil::random_graph(rng);
    if (i % 3 == 0 && !graph.relations.empty()) {
      graph.relations.push_back(graph.relations.front());  // make it dirty
    }
    const ValidationReport first = validate_graph(graph);
    const ValidationReport second = validate_graph(graph);
    CHECK(first.violations == second.violations);
  }
}

TEST_CASE("graph_stats counts") {
  SUBCASE("empty graph") {
    const GraphStats stats = graph_stats(SceneGraph{});
    CHECK(stats.num_objects == 0);
    CHECK(stats.num_relations == 0);
    CHECK(stats.zero_relations);
  }
  SUBCASE("objects and relations are counted exactly") {
    SceneGraph graph = two_object_graph();
    graph.objects.push_back({2, "tree", {0, 0, 5, 5}});
    graph.relations.push_back({2, "beside", 1, std::nullopt});
    const GraphStats stats = graph_stats(graph);
    CHECK(stats.num_objects == 3);
    CHECK(stats.num_relations == 2);
    CHECK_FALSE(stats.zero_relations);
    CHECK(stats.num_objects == graph.objects.size());
    CHECK(stats.num_relations == graph.relations.size());
  }
  SUBCASE("predicate histogram") {
    SceneGraph graph = two_object_graph();
    graph.objects.push_back({2, "tree", {0, 0, 5, 5}});
    graph.relations.push_back({2, "on", 1, std::nullopt});
    graph.relations.push_back({0, "beside", 2, std::nullopt});
    const GraphStats stats = graph_stats(graph);
    CHECK(stats.predicate_counts.at("on") == 2);
    CHECK(stats.predicate_counts.at("beside") == 1);
  }
}
