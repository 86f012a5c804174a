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

#ifndef SGG_GRAPH_HPP
#define SGG_GRAPH_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sgg {

/// Dataset schema variants. PSG/PVSG use plain subject-predicate-object
/// triples; Action-Genome-style data uses person-object pairs whose relations
/// carry a group tag (attention | spatial | contacting).
enum class Schema { kObjectRelation, kHumanObject };

const char* schema_name(Schema schema);
std::optional<Schema> schema_from_name(const std::string& name);

/// Axis-aligned box in resized 640x480 pixel coordinates. Coordinates are
/// stored as reals; both serializers emit them rounded to integers.
struct BoundingBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// True iff all coordinates are finite, x1 <= x2 and y1 <= y2.
bool box_is_valid(const BoundingBox& box);

struct SceneObject {
  int id = 0;  // per-graph index, unique and non-negative
  std::string label;
  BoundingBox box;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

/// One directed edge. `group` is mandatory for HumanObject graphs and must be
/// absent for ObjectRelation graphs.
struct Relation {
  int subject_id = 0;
  std::string predicate;
  int object_id = 0;
  std::optional<std::string> group;

  friend bool operator==(const Relation&, const Relation&) = default;
};

struct SceneGraph {
  Schema schema = Schema::kObjectRelation;
  std::vector<SceneObject> objects;
  std::vector<Relation> relations;
  std::optional<std::string> frame_id;  // record-level metadata, not serialized

  const SceneObject* find_object(int id) const;

  friend bool operator==(const SceneGraph&, const SceneGraph&) = default;
};

/// Label/predicate inventory for closed-vocabulary validation and label
/// substitution. HumanObject datasets carry one predicate set per group.
struct Vocabulary {
  std::set<std::string> object_labels;
  std::set<std::string> predicates;
  std::map<std::string, std::set<std::string>> group_predicates;
};

/// The fixed relation groups of the HumanObject schema.
extern const std::set<std::string> kRelationGroups;

struct Violation {
  std::string code;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& code) const;
};

/// Checks every structural invariant of the graph model. Violations are data,
/// never exceptions. With `closed` and a vocabulary, out-of-vocabulary labels
/// and predicates are violations too.
///
/// Structural rules beyond the obvious ones: labels and predicates must be
/// serializable in both formats (non-empty, no comma/newline/tab, no
/// leading or trailing blanks; HumanObject predicates additionally no '|'
/// and not the literal "-"), and HumanObject relations must have the first
/// object as subject (the person slot).
ValidationReport validate_graph(const SceneGraph& graph,
                                const Vocabulary* vocab = nullptr,
                                bool closed = false);

struct GraphStats {
  std::size_t num_objects = 0;
  std::size_t num_relations = 0;
  std::map<std::string, std::size_t> predicate_counts;
  bool zero_relations = true;
};

GraphStats graph_stats(const SceneGraph& graph);

}  // namespace sgg

#endif  // SGG_GRAPH_HPP
