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

#include "sgg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include <json.hpp>

#include "sgg/errors.hpp"
#include "sgg/toon.hpp"

namespace sgg {

namespace {

std::string trim_copy(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && (s[begin] == ' ' || s[begin] == '\t')) ++begin;
  while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t')) --end;
  return s.substr(begin, end - begin);
}

bool serializable_text(const std::string& text, bool human_predicate) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c == ',' || c == '\n' || c == '\r' || c == '\t') return false;
    if (human_predicate && c == '|') return false;
  }
  if (human_predicate && text == "-") return false;
  return true;
}

}  // namespace

SceneGraph clean_graph(const SceneGraph& graph) {
  const bool human = graph.schema == Schema::kHumanObject;

  SceneGraph out;
  out.schema = graph.schema;
  out.frame_id = graph.frame_id;

  // Keep the first occurrence of each (label, box) object; old ids map to the
  // id of whichever copy survived. Duplicate old ids resolve to the first.
  struct Kept {
    std::string label;
    BoundingBox box;
  };
  std::vector<Kept> kept;
  std::map<std::tuple<std::string, double, double, double, double>, int>
      content_to_new;
  std::unordered_map<int, int> id_to_new;
  for (const auto& obj : graph.objects) {
    const std::string label = trim_copy(obj.label);
    if (!serializable_text(label, false)) continue;
    BoundingBox box = obj.box;
    if (!std::isfinite(box.x1) || !std::isfinite(box.y1) ||
        !std::isfinite(box.x2) || !std::isfinite(box.y2)) {
      continue;
    }
    if (box.x1 > box.x2) std::swap(box.x1, box.x2);
    if (box.y1 > box.y2) std::swap(box.y1, box.y2);

    const auto key = std::make_tuple(label, box.x1, box.y1, box.x2, box.y2);
    auto it = content_to_new.find(key);
    int new_id;
    if (it == content_to_new.end()) {
      new_id = static_cast<int>(kept.size());
      content_to_new.emplace(key, new_id);
      kept.push_back({label, box});
    } else {
      new_id = it->second;
    }
    id_to_new.emplace(obj.id, new_id);  // first occurrence wins
  }

  // HumanObject: move the first person to slot 0.
  std::vector<int> order(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) order[i] = static_cast<int>(i);
  if (human) {
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (kept[i].label == "person") {
        std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(i),
                    order.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        break;
      }
    }
  }
  std::vector<int> position_of(kept.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    position_of[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos);
  }
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const Kept& k = kept[static_cast<std::size_t>(order[pos])];
    out.objects.push_back({static_cast<int>(pos), k.label, k.box});
  }

  std::set<std::tuple<int, std::string, int, std::string>> seen;
  for (const auto& rel : graph.relations) {
    const auto s = id_to_new.find(rel.subject_id);
    const auto o = id_to_new.find(rel.object_id);
    if (s == id_to_new.end() || o == id_to_new.end()) continue;
    Relation cleaned;
    cleaned.subject_id = position_of[static_cast<std::size_t>(s->second)];
    cleaned.object_id = position_of[static_cast<std::size_t>(o->second)];
    cleaned.predicate = trim_copy(rel.predicate);
    if (cleaned.subject_id == cleaned.object_id) continue;
    if (!serializable_text(cleaned.predicate, human)) continue;
    if (human) {
      if (!rel.group || !kRelationGroups.count(*rel.group)) continue;
      if (cleaned.subject_id != 0) continue;
      cleaned.group = rel.group;
    }
    if (!seen
             .insert({cleaned.subject_id, cleaned.predicate, cleaned.object_id,
                      cleaned.group.value_or("")})
             .second) {
      continue;
    }
    out.relations.push_back(std::move(cleaned));
  }

  // Canonical relation order for HumanObject: grouped by object endpoint in
  // first-appearance order, groups in header order, so TOON round-trips are
  // byte-exact.
  if (human) {
    std::vector<int> object_rank;
    auto rank_of = [&](int object_id) {
      for (std::size_t i = 0; i < object_rank.size(); ++i) {
        if (object_rank[i] == object_id) return static_cast<int>(i);
      }
      object_rank.push_back(object_id);
      return static_cast<int>(object_rank.size()) - 1;
    };
    auto group_rank = [](const std::optional<std::string>& group) {
      if (*group == "attention") return 0;
      if (*group == "spatial") return 1;
      return 2;
    };
    std::vector<std::pair<std::pair<int, int>, Relation>> keyed;
    for (auto& rel : out.relations) {
      keyed.push_back({{rank_of(rel.object_id), group_rank(rel.group)},
                       std::move(rel)});
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) {
                       return a.first < b.first;
                     });
    out.relations.clear();
    for (auto& item : keyed) out.relations.push_back(std::move(item.second));
  }

  return out;
}

std::pair<DatasetSplit, FilterStats> filter_zero_relation(
    const DatasetSplit& split) {
  DatasetSplit out;
  out.name = split.name;
  FilterStats stats;
  stats.before = split.records.size();
  for (const auto& record : split.records) {
    SceneGraph cleaned = clean_graph(record.graph);
    if (cleaned.relations.empty()) {
      ++stats.removed;
      continue;
    }
    DatasetRecord kept = record;
    kept.graph = std::move(cleaned);
    out.records.push_back(std::move(kept));
  }
  stats.kept = out.records.size();
  stats.removed_pct = stats.before > 0 ? 100.0 *
                                             static_cast<double>(stats.removed) /
                                             static_cast<double>(stats.before)
                                       : 0.0;
  return {std::move(out), stats};
}

namespace {

std::multiset<std::string> category_multiset(const SceneGraph& graph) {
  std::multiset<std::string> out;
  for (const auto& obj : graph.objects) out.insert(obj.label);
  return out;
}

std::set<std::string> category_set(const SceneGraph& graph) {
  std::set<std::string> out;
  for (const auto& obj : graph.objects) out.insert(obj.label);
  return out;
}

}  // namespace

std::vector<std::size_t> base_annot_kept_indices(
    const std::vector<SceneGraph>& frames, bool multiset) {
  std::vector<std::size_t> kept;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    if (t == 0) {
      kept.push_back(t);
      continue;
    }
    const bool relations_changed =
        frames[t].relations.size() != frames[t - 1].relations.size();
    bool categories_changed;
    if (multiset) {
      categories_changed =
          category_multiset(frames[t]) != category_multiset(frames[t - 1]);
    } else {
      categories_changed =
          category_set(frames[t]) != category_set(frames[t - 1]);
    }
    if (relations_changed || categories_changed) kept.push_back(t);
  }
  return kept;
}

std::pair<DatasetSplit, FilterStats> thin_base_annot(const DatasetSplit& split,
                                                     bool multiset) {
  DatasetSplit out;
  out.name = split.name;
  FilterStats stats;
  stats.before = split.records.size();

  std::size_t start = 0;
  while (start < split.records.size()) {
    std::size_t end = start + 1;
    const auto& video = split.records[start].video_id;
    while (end < split.records.size() &&
           split.records[end].video_id == video) {
      ++end;
    }

    if (!video) {
      // Standalone records are not frames of anything; keep them.
      for (std::size_t i = start; i < end; ++i) {
        out.records.push_back(split.records[i]);
      }
    } else {
      std::vector<std::size_t> indices(end - start);
      for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = start + i;
      std::stable_sort(indices.begin(), indices.end(),
                       [&](std::size_t a, std::size_t b) {
                         return split.records[a].frame_index <
                                split.records[b].frame_index;
                       });
      std::vector<SceneGraph> frames;
      frames.reserve(indices.size());
      for (std::size_t i : indices) frames.push_back(split.records[i].graph);
      for (std::size_t k : base_annot_kept_indices(frames, multiset)) {
        out.records.push_back(split.records[indices[k]]);
      }
    }
    start = end;
  }

  stats.kept = out.records.size();
  stats.removed = stats.before - stats.kept;
  stats.removed_pct = stats.before > 0 ? 100.0 *
                                             static_cast<double>(stats.removed) /
                                             static_cast<double>(stats.before)
                                       : 0.0;
  return {std::move(out), stats};
}

namespace {

// Platform-independent draws; std distributions are not bit-stable across
// standard libraries.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t next_below(std::mt19937_64& rng, std::size_t n) {
  const double u = next_unit(rng);
  auto i = static_cast<std::size_t>(u * static_cast<double>(n));
  return std::min(i, n - 1);
}

double clamp(double v, double lo, double hi) {
  return std::max(lo, std::min(hi, v));
}

}  // namespace

SceneGraph corrupt_graph(const SceneGraph& graph,
                         const CorruptionPolicy& policy,
                         const Vocabulary& vocab, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SceneGraph out;
  out.schema = graph.schema;
  out.frame_id = graph.frame_id;

  std::set<int> surviving_ids;
  if (policy.object_dropout > 0.0) {
    for (std::size_t idx = 0; idx < graph.objects.size(); ++idx) {
      const SceneObject& obj = graph.objects[idx];
      // The leading object of a human-object graph is the relation anchor;
      // dropping it would demote a later person out of slot 0.
      const bool anchored = graph.schema == Schema::kHumanObject && idx == 0;
      if (anchored || next_unit(rng) >= policy.object_dropout) {
        out.objects.push_back(obj);
        surviving_ids.insert(obj.id);
      }
    }
  } else {
    out.objects = graph.objects;
    for (const auto& obj : graph.objects) surviving_ids.insert(obj.id);
  }

  if (policy.label_substitution > 0.0 && !vocab.object_labels.empty()) {
    const bool human = graph.schema == Schema::kHumanObject;
    std::vector<std::string> labels;
    for (const auto& label : vocab.object_labels) {
      if (!serializable_text(label, false)) continue;
      // The person slot is structural in human-object graphs: neither the
      // leading object nor the "person" label may change hands.
      if (human && label == "person") continue;
      labels.push_back(label);
    }
    for (std::size_t idx = 0; idx < out.objects.size(); ++idx) {
      if (human && idx == 0) continue;
      SceneObject& obj = out.objects[idx];
      if (next_unit(rng) >= policy.label_substitution) continue;
      std::vector<const std::string*> candidates;
      for (const auto& label : labels) {
        if (label != obj.label) candidates.push_back(&label);
      }
      if (candidates.empty()) continue;
      obj.label = *candidates[next_below(rng, candidates.size())];
    }
  }

  if (policy.box_jitter > 0.0) {
    for (auto& obj : out.objects) {
      const double w = obj.box.width();
      const double h = obj.box.height();
      double x1 = obj.box.x1 + (2.0 * next_unit(rng) - 1.0) * policy.box_jitter * w;
      double y1 = obj.box.y1 + (2.0 * next_unit(rng) - 1.0) * policy.box_jitter * h;
      double x2 = obj.box.x2 + (2.0 * next_unit(rng) - 1.0) * policy.box_jitter * w;
      double y2 = obj.box.y2 + (2.0 * next_unit(rng) - 1.0) * policy.box_jitter * h;
      if (x1 > x2) std::swap(x1, x2);
      if (y1 > y2) std::swap(y1, y2);
      obj.box.x1 = clamp(x1, 0.0, policy.image_width);
      obj.box.y1 = clamp(y1, 0.0, policy.image_height);
      obj.box.x2 = clamp(x2, 0.0, policy.image_width);
      obj.box.y2 = clamp(y2, 0.0, policy.image_height);
    }
  }

  for (const auto& rel : graph.relations) {
    if (!surviving_ids.count(rel.subject_id) ||
        !surviving_ids.count(rel.object_id)) {
      continue;  // dangling after object dropout
    }
    if (policy.relation_dropout > 0.0 &&
        next_unit(rng) < policy.relation_dropout) {
      continue;
    }
    out.relations.push_back(rel);
  }

  return out;
}

const char* length_measure_name(LengthMeasure measure) {
  switch (measure) {
    case LengthMeasure::kChars:
      return "chars";
    case LengthMeasure::kBytes:
      return "bytes";
    case LengthMeasure::kWhitespaceTokens:
      return "ws";
    case LengthMeasure::kCountsFile:
      return "file";
  }
  return "chars";
}

std::optional<LengthMeasure> length_measure_from_name(const std::string& name) {
  if (name == "chars") return LengthMeasure::kChars;
  if (name == "bytes") return LengthMeasure::kBytes;
  if (name == "ws") return LengthMeasure::kWhitespaceTokens;
  if (name == "file") return LengthMeasure::kCountsFile;
  return std::nullopt;
}

namespace {

double measure_text(const std::string& text, LengthMeasure measure) {
  switch (measure) {
    case LengthMeasure::kBytes:
      return static_cast<double>(text.size());
    case LengthMeasure::kChars: {
      std::size_t points = 0;
      for (unsigned char c : text) {
        if ((c & 0xC0) != 0x80) ++points;
      }
      return static_cast<double>(points);
    }
    case LengthMeasure::kWhitespaceTokens: {
      std::size_t tokens = 0;
      bool in_token = false;
      for (char c : text) {
        const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
        if (!space && !in_token) ++tokens;
        in_token = !space;
      }
      return static_cast<double>(tokens);
    }
    case LengthMeasure::kCountsFile:
      break;
  }
  return 0.0;
}

LengthSummary summarize(std::vector<double> values) {
  LengthSummary out;
  if (values.empty()) return out;
  std::sort(values.begin(), values.end());
  out.min_v = values.front();
  out.max_v = values.back();
  out.median = values[(values.size() - 1) / 2];
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  return out;
}

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

TokenCountsMap load_token_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open counts file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad counts file " + path + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw DataError("counts file must be a JSON object: " + path);
  }
  TokenCountsMap out;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_object() || !value.contains("json_tokens") ||
        !value.contains("toon_tokens")) {
      throw DataError("counts entry for \"" + key +
                               "\" needs json_tokens and toon_tokens");
    }
    out[key] = {value["json_tokens"].get<long long>(),
                value["toon_tokens"].get<long long>()};
  }
  return out;
}

LengthStats length_stats(const DatasetSplit& split, LengthMeasure measure,
                         const TokenCountsMap* counts) {
  LengthStats stats;
  stats.measure = measure;
  stats.count = split.records.size();

  std::vector<double> toon_lengths;
  std::vector<double> json_lengths;
  toon_lengths.reserve(split.records.size());
  json_lengths.reserve(split.records.size());

  if (measure == LengthMeasure::kCountsFile) {
    if (!counts) {
      throw std::invalid_argument(
          "length_stats: the file measure needs a counts map");
    }
    for (const auto& record : split.records) {
      const auto it = counts->find(record.sample_id);
      if (it == counts->end()) {
        throw DataError("counts file has no entry for sample \"" +
                                 record.sample_id + "\"");
      }
      json_lengths.push_back(static_cast<double>(it->second.json_tokens));
      toon_lengths.push_back(static_cast<double>(it->second.toon_tokens));
    }
  } else {
    for (const auto& record : split.records) {
      toon_lengths.push_back(
          measure_text(serialize_toon(record.graph).raw_text, measure));
      json_lengths.push_back(
          measure_text(serialize_json(record.graph), measure));
    }
  }

  stats.toon = summarize(toon_lengths);
  stats.json = summarize(json_lengths);
  stats.ratio.min_v = ratio(stats.json.min_v, stats.toon.min_v);
  stats.ratio.mean = ratio(stats.json.mean, stats.toon.mean);
  stats.ratio.median = ratio(stats.json.median, stats.toon.median);
  stats.ratio.max_v = ratio(stats.json.max_v, stats.toon.max_v);
  return stats;
}

}  // namespace sgg
