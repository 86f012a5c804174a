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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "sgg/toon.hpp"

namespace sgg {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void position_from_byte(const std::string& text, std::size_t byte, int& line,
                        int& column) {
  line = 1;
  column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

struct JsonReader {
  std::vector<ParseDiagnostic> diagnostics;

  void fail(std::string message) { diagnostics.push_back({std::move(message), 0, 0}); }

  bool read_int(const json& j, const char* where, int& out) {
    if (!j.is_number_integer()) {
      fail(std::string(where) + " must be an integer");
      return false;
    }
    out = j.get<int>();
    return true;
  }

  bool read_string(const json& j, const char* where, std::string& out) {
    if (!j.is_string()) {
      fail(std::string(where) + " must be a string");
      return false;
    }
    out = j.get<std::string>();
    return true;
  }

  bool read_box(const json& j, const char* where, BoundingBox& out) {
    if (!j.is_array() || j.size() != 4) {
      fail(std::string(where) + " must be an array of 4 numbers");
      return false;
    }
    double coords[4];
    for (std::size_t i = 0; i < 4; ++i) {
      if (!j[i].is_number()) {
        fail(std::string(where) + " must contain numbers only");
        return false;
      }
      coords[i] = j[i].get<double>();
    }
    out = {coords[0], coords[1], coords[2], coords[3]};
    return true;
  }
};

}  // namespace

std::string serialize_json(const SceneGraph& graph) {
  {
    const ValidationReport report = validate_graph(graph);
    if (!report.ok()) {
      throw std::invalid_argument("cannot serialize invalid graph: " +
                                  report.violations.front().code + ": " +
                                  report.violations.front().message);
    }
  }

  std::vector<const SceneObject*> order;
  order.reserve(graph.objects.size());
  for (const auto& obj : graph.objects) order.push_back(&obj);
  std::stable_sort(order.begin(), order.end(),
                   [](const SceneObject* a, const SceneObject* b) {
                     return a->id < b->id;
                   });

  ordered_json doc;
  doc["objects"] = ordered_json::array();
  for (const SceneObject* obj : order) {
    ordered_json o;
    o["id"] = obj->id;
    o["label"] = obj->label;
    o["bbox"] = {std::llround(obj->box.x1), std::llround(obj->box.y1),
                 std::llround(obj->box.x2), std::llround(obj->box.y2)};
    doc["objects"].push_back(std::move(o));
  }
  doc["relations"] = ordered_json::array();
  for (const auto& rel : graph.relations) {
    ordered_json r;
    r["subject"] = rel.subject_id;
    r["predicate"] = rel.predicate;
    r["object"] = rel.object_id;
    if (rel.group) r["group"] = *rel.group;
    doc["relations"].push_back(std::move(r));
  }
  return doc.dump();
}

ParseOutcome parse_json(const std::string& text, Schema schema) {
  ParseOutcome outcome;

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    ParseDiagnostic diag;
    diag.message = e.what();
    position_from_byte(text, e.byte, diag.line, diag.column);
    outcome.diagnostics.push_back(std::move(diag));
    return outcome;
  }

  JsonReader reader;
  SceneGraph graph;
  graph.schema = schema;

  if (!doc.is_object()) {
    reader.fail("top-level value must be an object");
  } else {
    if (!doc.contains("objects") || !doc["objects"].is_array()) {
      reader.fail("missing \"objects\" array");
    } else {
      for (const auto& item : doc["objects"]) {
        if (!item.is_object()) {
          reader.fail("object entries must be objects");
          continue;
        }
        SceneObject obj;
        bool ok = item.contains("id") && item.contains("label") &&
                  item.contains("bbox");
        if (!ok) {
          reader.fail("object entry needs id, label and bbox");
          continue;
        }
        ok = reader.read_int(item["id"], "object id", obj.id) &&
             reader.read_string(item["label"], "object label", obj.label) &&
             reader.read_box(item["bbox"], "object bbox", obj.box);
        if (ok) graph.objects.push_back(std::move(obj));
      }
    }
    if (!doc.contains("relations") || !doc["relations"].is_array()) {
      reader.fail("missing \"relations\" array");
    } else {
      for (const auto& item : doc["relations"]) {
        if (!item.is_object()) {
          reader.fail("relation entries must be objects");
          continue;
        }
        Relation rel;
        bool ok = item.contains("subject") && item.contains("predicate") &&
                  item.contains("object");
        if (!ok) {
          reader.fail("relation entry needs subject, predicate and object");
          continue;
        }
        ok = reader.read_int(item["subject"], "relation subject",
                             rel.subject_id) &&
             reader.read_string(item["predicate"], "relation predicate",
                                rel.predicate) &&
             reader.read_int(item["object"], "relation object", rel.object_id);
        if (ok && item.contains("group")) {
          std::string group;
          if (reader.read_string(item["group"], "relation group", group)) {
            rel.group = std::move(group);
          } else {
            ok = false;
          }
        }
        if (ok) graph.relations.push_back(std::move(rel));
      }
    }
  }

  outcome.diagnostics = std::move(reader.diagnostics);
  if (!doc.is_object()) return outcome;

  const ValidationReport report = validate_graph(graph);
  for (const auto& violation : report.violations) {
    outcome.diagnostics.push_back(
        {violation.code + ": " + violation.message, 0, 0});
  }
  outcome.valid = outcome.diagnostics.empty();
  outcome.graph = std::move(graph);
  return outcome;
}

}  // namespace sgg
