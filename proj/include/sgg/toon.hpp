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

#ifndef SGG_TOON_HPP
#define SGG_TOON_HPP

#include <optional>
#include <string>
#include <vector>

#include "sgg/graph.hpp"

namespace sgg {

/// A scene graph in the row-based TOON text format. The grammar is fixed and
/// documented bit-exactly in docs/toon-grammar.md: one objects header with N
/// comma-separated rows, one relations header with M rows, LF line endings,
/// no tabs, integer coordinates.
struct ToonDocument {
  std::string raw_text;
  Schema schema = Schema::kObjectRelation;
};

struct ParseDiagnostic {
  std::string message;
  int line = 0;    // 1-based; 0 when the problem has no single line
  int column = 0;  // 1-based; 0 when the problem has no single column
};

/// Outcome of parsing arbitrary text. `valid` is the binary mask value: 1 only
/// when a graph was recovered and passes validate_graph. A best-effort graph
/// is kept even for invalid input whenever the block structure was readable,
/// so monitoring signals can still be computed.
struct ParseOutcome {
  std::optional<SceneGraph> graph;
  bool valid = false;
  std::vector<ParseDiagnostic> diagnostics;
  // Set by extract_answer only: a well-formed <answer></answer> pair existed.
  bool answer_tags_found = false;
};

/// Serializes a structurally valid graph to canonical TOON text. Objects are
/// emitted as rows in id order; coordinates are rounded half-away-from-zero
/// to integers. Throws std::invalid_argument when the graph fails
/// validate_graph.
ToonDocument serialize_toon(const SceneGraph& graph);

/// Parses TOON text under the given schema. Never throws on malformed input;
/// all failures surface as diagnostics with valid = false.
ParseOutcome parse_toon(const std::string& text, Schema schema);

/// Canonical JSON form: {"objects": [{"id", "label", "bbox"}...],
/// "relations": [{"subject", "predicate", "object"[, "group"]}...]} with that
/// key order, compact, integer coordinates. Throws on invalid graphs.
std::string serialize_json(const SceneGraph& graph);

/// Parses the canonical JSON form (any key order) under the given schema.
ParseOutcome parse_json(const std::string& text, Schema schema);

/// Locates the last well-formed <answer>...</answer> pair in a model
/// completion and parses its contents as TOON. Missing or unclosed tags give
/// valid = false with a missing-tags diagnostic and answer_tags_found = false.
ParseOutcome extract_answer(const std::string& completion, Schema schema);

}  // namespace sgg

#endif  // SGG_TOON_HPP
