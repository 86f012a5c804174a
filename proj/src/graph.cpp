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

#include "sgg/graph.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace sgg {

const std::set<std::string> kRelationGroups = {"attention", "spatial",
                                               "contacting"};

const char* schema_name(Schema schema) {
  return schema == Schema::kObjectRelation ? "object_relation"
                                           : "human_object";
}

std::optional<Schema> schema_from_name(const std::string& name) {
  if (name == "object_relation") return Schema::kObjectRelation;
  if (name == "human_object") return Schema::kHumanObject;
  return std::nullopt;
}

bool box_is_valid(const BoundingBox& box) {
  return std::isfinite(box.x1) && std::isfinite(box.y1) &&
         std::isfinite(box.x2) && std::isfinite(box.y2) && box.x1 <= box.x2 &&
         box.y1 <= box.y2;
}

const SceneObject* SceneGraph::find_object(int id) const {
  for (const auto& obj : objects) {
    if (obj.id == id) return &obj;
  }
  return nullptr;
}

bool ValidationReport::has(const std::string& code) const {
  for (const auto& v : violations) {
    if (v.code == code) return true;
  }
  return false;
}

namespace {

void add(ValidationReport& report, std::string code, std::string message) {
  report.violations.push_back({std::move(code), std::move(message)});
}

// Field text must survive the row format: no delimiter characters, no line
// breaks, no surrounding blanks (the parser trims them away).
bool field_text_ok(const std::string& text, bool human_object_predicate) {
  if (text.empty()) return false;
  if (text.front() == ' ' || text.back() == ' ') return false;
  for (char c : text) {
    if (c == ',' || c == '\n' || c == '\r' || c == '\t') return false;
    if (human_object_predicate && c == '|') return false;
  }
  if (human_object_predicate && text == "-") return false;
  return true;
}

std::string describe_box(const BoundingBox& b) {
  std::ostringstream out;
  out << "(" << b.x1 << ", " << b.y1 << ", " << b.x2 << ", " << b.y2 << ")";
  return out.str();
}

}  // namespace

ValidationReport validate_graph(const SceneGraph& graph,
                                const Vocabulary* vocab, bool closed) {
  ValidationReport report;
  const bool human = graph.schema == Schema::kHumanObject;

  std::unordered_set<int> ids;
  for (std::size_t i = 0; i < graph.objects.size(); ++i) {
    const SceneObject& obj = graph.objects[i];
    if (obj.id < 0) {
      add(report, "negative_object_id",
          "object " + std::to_string(i) + " has negative id " +
              std::to_string(obj.id));
    }
    if (!ids.insert(obj.id).second) {
      add(report, "duplicate_object_id",
          "object id " + std::to_string(obj.id) + " appears more than once");
    }
    if (obj.label.empty()) {
      add(report, "empty_label",
          "object " + std::to_string(obj.id) + " has an empty label");
    } else if (!field_text_ok(obj.label, false)) {
      add(report, "bad_label_text",
          "object label \"" + obj.label + "\" is not serializable");
    }
    if (!std::isfinite(obj.box.x1) || !std::isfinite(obj.box.y1) ||
        !std::isfinite(obj.box.x2) || !std::isfinite(obj.box.y2)) {
      add(report, "non_finite_box",
          "object " + std::to_string(obj.id) + " has non-finite coordinates");
    } else if (obj.box.x1 > obj.box.x2 || obj.box.y1 > obj.box.y2) {
      add(report, "degenerate_box",
          "object " + std::to_string(obj.id) + " has inverted box " +
              describe_box(obj.box));
    }
    if (closed && vocab && !vocab->object_labels.empty() &&
        !vocab->object_labels.count(obj.label)) {
      add(report, "unknown_label",
          "object label \"" + obj.label + "\" is not in the vocabulary");
    }
  }

  if (human && !graph.objects.empty()) {
    bool has_person = false;
    for (const auto& obj : graph.objects) {
      if (obj.label == "person") has_person = true;
    }
    if (has_person && graph.objects.front().label != "person") {
      add(report, "person_not_first",
          "human-object graph has a person object that is not object 0");
    }
  }

  std::set<std::tuple<int, std::string, int, std::string>> seen_triples;
  for (std::size_t i = 0; i < graph.relations.size(); ++i) {
    const Relation& rel = graph.relations[i];
    const std::string where = "relation " + std::to_string(i);
    const bool subject_known = ids.count(rel.subject_id) != 0;
    const bool object_known = ids.count(rel.object_id) != 0;
    if (!subject_known || !object_known) {
      add(report, "dangling_reference",
          where + " references undeclared object id " +
              std::to_string(!subject_known ? rel.subject_id : rel.object_id));
    }
    if (rel.subject_id == rel.object_id) {
      add(report, "self_relation",
          where + " relates object " + std::to_string(rel.subject_id) +
              " to itself");
    }
    if (rel.predicate.empty()) {
      add(report, "empty_predicate", where + " has an empty predicate");
    } else if (!field_text_ok(rel.predicate, human)) {
      add(report, "bad_predicate_text",
          where + " predicate \"" + rel.predicate + "\" is not serializable");
    }
    if (human) {
      if (!rel.group) {
        add(report, "missing_group", where + " has no relation group");
      } else if (!kRelationGroups.count(*rel.group)) {
        add(report, "unknown_group",
            where + " has unknown group \"" + *rel.group + "\"");
      }
      if (!graph.objects.empty() &&
          rel.subject_id != graph.objects.front().id) {
        add(report, "non_person_subject",
            where + " subject is not the leading (person) object");
      }
    } else if (rel.group) {
      add(report, "unexpected_group",
          where + " carries a group tag in an object-relation graph");
    }
    if (!seen_triples
             .insert({rel.subject_id, rel.predicate, rel.object_id,
                      rel.group.value_or("")})
             .second) {
      add(report, "duplicate_relation",
          where + " duplicates an earlier triple");
    }
    if (closed && vocab) {
      if (human && rel.group) {
        auto it = vocab->group_predicates.find(*rel.group);
        if (it != vocab->group_predicates.end() && !it->second.empty() &&
            !it->second.count(rel.predicate)) {
          add(report, "unknown_predicate",
              where + " predicate \"" + rel.predicate +
                  "\" is not in the vocabulary for group \"" + *rel.group +
                  "\"");
        }
      } else if (!human && !vocab->predicates.empty() &&
                 !vocab->predicates.count(rel.predicate)) {
        add(report, "unknown_predicate",
            where + " predicate \"" + rel.predicate +
                "\" is not in the vocabulary");
      }
    }
  }

  return report;
}

GraphStats graph_stats(const SceneGraph& graph) {
  GraphStats stats;
  stats.num_objects = graph.objects.size();
  stats.num_relations = graph.relations.size();
  stats.zero_relations = graph.relations.empty();
  for (const auto& rel : graph.relations) {
    ++stats.predicate_counts[rel.predicate];
  }
  return stats;
}

}  // namespace sgg
