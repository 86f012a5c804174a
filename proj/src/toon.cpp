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

#include "sgg/toon.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace sgg {

namespace {

constexpr const char* kObjectHeaderFields = "id,label,x1,y1,x2,y2";
constexpr const char* kRelationHeaderFields = "subject,predicate,object";
constexpr const char* kHumanRelationHeaderFields =
    "object,attention,spatial,contacting";
// The HumanObject group columns, in header order.
constexpr const char* kGroupOrder[3] = {"attention", "spatial", "contacting"};

long long round_coord(double v) { return std::llround(v); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view s, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

bool parse_int(std::string_view s, long long& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

bool parse_number(std::string_view s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

struct Line {
  std::string_view text;  // trimmed
  int number = 0;         // 1-based in the input
};

// Input lines with surrounding whitespace removed; fully blank lines at the
// start and end of the document are dropped (completions often pad the graph
// with newlines inside the answer tags).
std::vector<Line> significant_lines(const std::string& text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t pos = text.find('\n', start);
    const std::size_t len =
        (pos == std::string::npos ? text.size() : pos) - start;
    ++number;
    lines.push_back({trim(std::string_view(text).substr(start, len)), number});
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  while (!lines.empty() && lines.front().text.empty()) {
    lines.erase(lines.begin());
  }
  while (!lines.empty() && lines.back().text.empty()) lines.pop_back();
  return lines;
}

class ToonParser {
 public:
  ToonParser(const std::string& text, Schema schema)
      : lines_(significant_lines(text)), schema_(schema) {}

  ParseOutcome run() {
    if (lines_.empty()) {
      fail(0, 0, "empty input: expected an objects header");
      return finish(false);
    }

    const bool structure_ok = parse_objects_block() && parse_relations_block();
    if (structure_ok && pos_ < lines_.size()) {
      fail_line(lines_[pos_], "unexpected trailing content");
      return finish(true);
    }
    return finish(structure_ok);
  }

 private:
  bool parse_header(const Line& line, std::string_view keyword,
                    std::string_view fields, long long& count) {
    std::string_view s = line.text;
    if (!s.starts_with(keyword)) {
      fail_line(line, std::string("expected \"") + std::string(keyword) +
                          "[...\" header");
      return false;
    }
    s.remove_prefix(keyword.size());
    if (!s.starts_with('[')) {
      fail_line(line, "expected '[' after header keyword");
      return false;
    }
    s.remove_prefix(1);
    const std::size_t close = s.find(']');
    if (close == std::string_view::npos) {
      fail_line(line, "unterminated count in header");
      return false;
    }
    if (!parse_int(trim(s.substr(0, close)), count) || count < 0) {
      fail_line(line, "header count is not a non-negative integer");
      return false;
    }
    s.remove_prefix(close + 1);
    const std::string expected = "{" + std::string(fields) + "}:";
    if (std::string(trim(s)) != expected) {
      fail_line(line, "header field list must be exactly " + expected);
      return false;
    }
    return true;
  }

  // Rows run until the next header keyword or end of input.
  std::vector<Line> take_rows(std::string_view next_keyword) {
    std::vector<Line> rows;
    while (pos_ < lines_.size()) {
      const Line& line = lines_[pos_];
      if (!next_keyword.empty() && line.text.starts_with(next_keyword)) break;
      rows.push_back(line);
      ++pos_;
    }
    return rows;
  }

  bool parse_objects_block() {
    const Line& header = lines_[pos_];
    long long declared = 0;
    if (!parse_header(header, "objects", kObjectHeaderFields, declared)) {
      return false;
    }
    ++pos_;

    const std::vector<Line> rows = take_rows("relations");
    for (const Line& row : rows) {
      if (row.text.empty()) {
        fail_line(row, "blank line inside the objects block");
        continue;
      }
      const auto fields = split(row.text, ',');
      if (fields.size() != 6) {
        fail_line(row, "object row needs 6 comma-separated fields, found " +
                           std::to_string(fields.size()));
        continue;
      }
      SceneObject obj;
      long long id = 0;
      if (!parse_int(trim(fields[0]), id)) {
        fail_line(row, "object id is not an integer");
        continue;
      }
      obj.id = static_cast<int>(id);
      obj.label = std::string(trim(fields[1]));
      double coords[4];
      bool coords_ok = true;
      for (int c = 0; c < 4; ++c) {
        if (!parse_number(trim(fields[static_cast<std::size_t>(c) + 2]),
                          coords[c])) {
          fail_line(row, "object coordinate " + std::to_string(c + 1) +
                             " is not a number");
          coords_ok = false;
          break;
        }
      }
      if (!coords_ok) continue;
      obj.box = {coords[0], coords[1], coords[2], coords[3]};
      graph_.objects.push_back(std::move(obj));
    }

    if (static_cast<long long>(rows.size()) != declared) {
      fail_line(header, "objects header declares " + std::to_string(declared) +
                            " rows but " + std::to_string(rows.size()) +
                            " follow");
    }
    if (pos_ >= lines_.size()) {
      fail(lines_.back().number, 0,
           "unexpected end of input: relations header not found");
      return false;
    }
    return true;
  }

  bool parse_relations_block() {
    const Line& header = lines_[pos_];
    const bool human = schema_ == Schema::kHumanObject;
    long long declared = 0;
    if (!parse_header(header, "relations",
                      human ? kHumanRelationHeaderFields
                            : kRelationHeaderFields,
                      declared)) {
      return false;
    }
    ++pos_;

    const std::vector<Line> rows = take_rows("");
    for (const Line& row : rows) {
      if (row.text.empty()) {
        fail_line(row, "blank line inside the relations block");
        continue;
      }
      if (human) {
        parse_human_relation_row(row);
      } else {
        parse_relation_row(row);
      }
    }
    if (static_cast<long long>(rows.size()) != declared) {
      fail_line(header, "relations header declares " +
                            std::to_string(declared) + " rows but " +
                            std::to_string(rows.size()) + " follow");
    }
    return true;
  }

  void parse_relation_row(const Line& row) {
    const auto fields = split(row.text, ',');
    if (fields.size() != 3) {
      fail_line(row, "relation row needs 3 comma-separated fields, found " +
                         std::to_string(fields.size()));
      return;
    }
    long long subject = 0;
    long long object = 0;
    if (!parse_int(trim(fields[0]), subject) ||
        !parse_int(trim(fields[2]), object)) {
      fail_line(row, "relation endpoints must be integers");
      return;
    }
    Relation rel;
    rel.subject_id = static_cast<int>(subject);
    rel.predicate = std::string(trim(fields[1]));
    rel.object_id = static_cast<int>(object);
    graph_.relations.push_back(std::move(rel));
  }

  void parse_human_relation_row(const Line& row) {
    const auto fields = split(row.text, ',');
    if (fields.size() != 4) {
      fail_line(row,
                "human-object relation row needs 4 comma-separated fields, "
                "found " +
                    std::to_string(fields.size()));
      return;
    }
    long long object = 0;
    if (!parse_int(trim(fields[0]), object)) {
      fail_line(row, "relation object id is not an integer");
      return;
    }
    const int subject_id =
        graph_.objects.empty() ? 0 : graph_.objects.front().id;
    for (int g = 0; g < 3; ++g) {
      const std::string_view cell = trim(fields[static_cast<std::size_t>(g) + 1]);
      if (cell == "-") continue;
      if (cell.empty()) {
        fail_line(row, std::string("empty ") + kGroupOrder[g] +
                           " cell: use '-' for no relations");
        continue;
      }
      for (std::string_view value : split(cell, '|')) {
        Relation rel;
        rel.subject_id = subject_id;
        rel.predicate = std::string(trim(value));
        rel.object_id = static_cast<int>(object);
        rel.group = kGroupOrder[g];
        graph_.relations.push_back(std::move(rel));
      }
    }
  }

  void fail(int line, int column, std::string message) {
    diagnostics_.push_back({std::move(message), line, column});
  }

  void fail_line(const Line& line, std::string message) {
    fail(line.number, 1, std::move(message));
  }

  ParseOutcome finish(bool keep_graph) {
    ParseOutcome outcome;
    graph_.schema = schema_;
    if (keep_graph) {
      const ValidationReport report = validate_graph(graph_);
      for (const auto& violation : report.violations) {
        diagnostics_.push_back({violation.code + ": " + violation.message, 0,
                                0});
      }
      outcome.valid = diagnostics_.empty();
      outcome.graph = std::move(graph_);
    }
    outcome.diagnostics = std::move(diagnostics_);
    return outcome;
  }

  std::vector<Line> lines_;
  Schema schema_;
  std::size_t pos_ = 0;
  SceneGraph graph_;
  std::vector<ParseDiagnostic> diagnostics_;
};

std::vector<const SceneObject*> objects_in_id_order(const SceneGraph& graph) {
  std::vector<const SceneObject*> order;
  order.reserve(graph.objects.size());
  for (const auto& obj : graph.objects) order.push_back(&obj);
  std::stable_sort(order.begin(), order.end(),
                   [](const SceneObject* a, const SceneObject* b) {
                     return a->id < b->id;
                   });
  return order;
}

void require_serializable(const SceneGraph& graph) {
  const ValidationReport report = validate_graph(graph);
  if (!report.ok()) {
    throw std::invalid_argument("cannot serialize invalid graph: " +
                                report.violations.front().code + ": " +
                                report.violations.front().message);
  }
}

void append_object_row(std::string& out, const SceneObject& obj) {
  out += std::to_string(obj.id);
  out += ',';
  out += obj.label;
  out += ',';
  out += std::to_string(round_coord(obj.box.x1));
  out += ',';
  out += std::to_string(round_coord(obj.box.y1));
  out += ',';
  out += std::to_string(round_coord(obj.box.x2));
  out += ',';
  out += std::to_string(round_coord(obj.box.y2));
  out += '\n';
}

}  // namespace

ToonDocument serialize_toon(const SceneGraph& graph) {
  require_serializable(graph);

  std::string out;
  out += "objects[" + std::to_string(graph.objects.size()) + "]{" +
         kObjectHeaderFields + "}:\n";
  for (const SceneObject* obj : objects_in_id_order(graph)) {
    append_object_row(out, *obj);
  }

  if (graph.schema == Schema::kObjectRelation) {
    out += "relations[" + std::to_string(graph.relations.size()) + "]{" +
           kRelationHeaderFields + "}:\n";
    for (const auto& rel : graph.relations) {
      out += std::to_string(rel.subject_id);
      out += ',';
      out += rel.predicate;
      out += ',';
      out += std::to_string(rel.object_id);
      out += '\n';
    }
  } else {
    // One row per related object, grouped in first-appearance order.
    std::vector<int> row_order;
    std::map<int, std::array<std::vector<const std::string*>, 3>> cells;
    for (const auto& rel : graph.relations) {
      if (!cells.count(rel.object_id)) row_order.push_back(rel.object_id);
      int g = 0;
      for (int i = 0; i < 3; ++i) {
        if (*rel.group == kGroupOrder[i]) g = i;
      }
      cells[rel.object_id][static_cast<std::size_t>(g)].push_back(
          &rel.predicate);
    }
    out += "relations[" + std::to_string(row_order.size()) + "]{" +
           kHumanRelationHeaderFields + "}:\n";
    for (int object_id : row_order) {
      out += std::to_string(object_id);
      for (int g = 0; g < 3; ++g) {
        out += ',';
        const auto& values = cells[object_id][static_cast<std::size_t>(g)];
        if (values.empty()) {
          out += '-';
          continue;
        }
        for (std::size_t v = 0; v < values.size(); ++v) {
          if (v > 0) out += '|';
          out += *values[v];
        }
      }
      out += '\n';
    }
  }

  return {std::move(out), graph.schema};
}

ParseOutcome parse_toon(const std::string& text, Schema schema) {
  return ToonParser(text, schema).run();
}

ParseOutcome extract_answer(const std::string& completion, Schema schema) {
  constexpr std::string_view kOpen = "<answer>";
  constexpr std::string_view kClose = "</answer>";

  const std::size_t close = completion.rfind(kClose);
  std::size_t open = std::string::npos;
  if (close != std::string::npos) {
    open = completion.rfind(kOpen, close);
  }
  if (close == std::string::npos || open == std::string::npos) {
    ParseOutcome outcome;
    outcome.diagnostics.push_back(
        {"missing answer tags: no well-formed <answer></answer> pair", 0, 0});
    return outcome;
  }

  const std::size_t begin = open + kOpen.size();
  ParseOutcome outcome =
      parse_toon(completion.substr(begin, close - begin), schema);
  outcome.answer_tags_found = true;
  return outcome;
}

}  // namespace sgg
