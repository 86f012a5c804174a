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

#ifndef SGG_DATASET_HPP
#define SGG_DATASET_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sgg/graph.hpp"

namespace sgg {

struct DatasetRecord {
  std::string sample_id;
  SceneGraph graph;
  std::optional<std::string> video_id;
  std::optional<long long> frame_index;
};

struct DatasetSplit {
  std::string name;
  std::vector<DatasetRecord> records;
};

struct FilterStats {
  std::size_t before = 0;
  std::size_t removed = 0;
  std::size_t kept = 0;
  double removed_pct = 0.0;
};

/// Normalizes a graph so it passes validate_graph with an empty report:
/// trims label/predicate whitespace, drops unserializable objects and
/// relations, merges exact-duplicate objects (same label and box, first
/// occurrence kept), reindexes ids to 0..n-1, retargets relations, removes
/// self-relations, dangling relations and duplicate triples. HumanObject
/// graphs additionally get the person moved to slot 0 and non-person-subject
/// or ungrouped relations dropped. Deterministic and idempotent.
SceneGraph clean_graph(const SceneGraph& graph);

/// Drops records whose cleaned graph has no relations; kept records carry the
/// cleaned graph. kept + removed == before always.
std::pair<DatasetSplit, FilterStats> filter_zero_relation(
    const DatasetSplit& split);

/// Frame-thinning rule over one video's frames (in index order): frame 0 is
/// always kept; frame t is kept iff its object-category set differs from
/// frame t-1's or its relation count differs. With multiset = true categories
/// are compared with multiplicity. Returns the kept indices.
std::vector<std::size_t> base_annot_kept_indices(
    const std::vector<SceneGraph>& frames, bool multiset = false);

/// Applies the rule per video across a split (records of one video must be
/// contiguous; they are stably ordered by frame_index first). Records with no
/// video id are kept unconditionally.
std::pair<DatasetSplit, FilterStats> thin_base_annot(const DatasetSplit& split,
                                                     bool multiset = false);

/// Knobs for synthesizing imperfect previous-frame context. Defaults are
/// toolkit defaults, not dataset measurements; every produced artifact should
/// echo them.
struct CorruptionPolicy {
  double object_dropout = 0.1;
  double relation_dropout = 0.2;
  double box_jitter = 0.05;  // max offset as a fraction of the box side
  double label_substitution = 0.05;
  double image_width = 640.0;
  double image_height = 480.0;
};

/// Seeded-deterministic corruption of a valid graph: object dropout, label
/// substitution from the vocabulary, box jitter (clamped to the frame,
/// coordinates re-ordered), dangling-relation repair, relation dropout. An
/// all-zero policy returns the input unchanged; outputs always pass
/// validate_graph.
SceneGraph corrupt_graph(const SceneGraph& graph, const CorruptionPolicy& policy,
                         const Vocabulary& vocab, std::uint64_t seed);

enum class LengthMeasure {
  kChars,             // UTF-8 code points
  kBytes,
  kWhitespaceTokens,  // maximal non-whitespace runs
  kCountsFile,        // externally supplied per-sample token counts
};

const char* length_measure_name(LengthMeasure measure);
std::optional<LengthMeasure> length_measure_from_name(const std::string& name);

struct LengthSummary {
  double min_v = 0.0;
  double mean = 0.0;
  double median = 0.0;  // lower-middle order statistic for even counts
  double max_v = 0.0;
};

struct LengthStats {
  LengthMeasure measure = LengthMeasure::kChars;
  std::size_t count = 0;
  LengthSummary toon;
  LengthSummary json;
  LengthSummary ratio;  // json / toon, per statistic
};

struct TokenCounts {
  long long json_tokens = 0;
  long long toon_tokens = 0;
};

/// sample_id -> counts, loaded from a JSON object file (see
/// docs/annotation-format.md).
using TokenCountsMap = std::map<std::string, TokenCounts>;

TokenCountsMap load_token_counts(const std::string& path);

/// Serializes every record in both formats and summarizes lengths under the
/// chosen measure. With kCountsFile the lengths come from `counts`, which
/// must cover every sample id.
LengthStats length_stats(const DatasetSplit& split, LengthMeasure measure,
                         const TokenCountsMap* counts = nullptr);

}  // namespace sgg

#endif  // SGG_DATASET_HPP
