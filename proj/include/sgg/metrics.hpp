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

#ifndef SGG_METRICS_HPP
#define SGG_METRICS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "sgg/geometry.hpp"
#include "sgg/graph.hpp"
#include "sgg/judge.hpp"
#include "sgg/toon.hpp"

namespace sgg {

enum class EvalMode { kStrict, kSoft };

struct SampleMetrics {
  double obj_p = 0.0, obj_r = 0.0, obj_f1 = 0.0;
  double rel_p = 0.0, rel_r = 0.0, rel_f1 = 0.0;
  std::size_t obj_tp = 0, obj_fp = 0, obj_fn = 0;
  std::size_t rel_tp = 0, rel_fp = 0, rel_fn = 0;
  bool failed = false;            // prediction did not parse/validate
  std::size_t judge_failures = 0; // disputed pairs lost to judge transport
};

struct MetricsReport {
  double obj_p = 0.0, obj_r = 0.0, obj_f1 = 0.0;
  double rel_p = 0.0, rel_r = 0.0, rel_f1 = 0.0;
  double sgg_score = 0.0;   // mean of macro object F1 and macro relation F1
  double failure_rate = 0.0;
  std::size_t sample_count = 0;
  EvalMode mode = EvalMode::kStrict;
};

/// Strict per-sample evaluation: objects aligned by Hungarian matching on
/// (1 - IoU) cost; an object is a true positive when its aligned partner has
/// the same label and IoU at or above the threshold. Relations use strict
/// one-to-one triplet matching. Failed predictions score zero everywhere and
/// set the failure flag.
SampleMetrics evaluate_sample_strict(const SceneGraph& gt,
                                     const ParseOutcome& pred,
                                     const MatchConfig& cfg = {});

/// Same pipeline, but IoU-aligned object pairs with unequal labels and
/// aligned-endpoint relations with unequal predicates are referred to the
/// judge; accepted pairs count as true positives. A judge transport failure
/// downgrades the disputed pair to the strict verdict and is tallied.
SampleMetrics evaluate_sample_soft(const SceneGraph& gt,
                                   const ParseOutcome& pred,
                                   const MatchConfig& cfg, JudgeClient& judge);

/// Macro-averaged report: the arithmetic mean of each per-sample metric.
/// Failed samples count as zeros by default; with include_failed = false they
/// are excluded from the means but still drive failure_rate. Throws
/// std::invalid_argument on an empty sample list.
MetricsReport aggregate(const std::vector<SampleMetrics>& samples,
                        EvalMode mode, bool include_failed = true);

/// One ranked relation prediction with resolved endpoints. Rank is the list
/// position: generative models carry no confidence scores, so emission order
/// is the ranking.
struct RankedTriplet {
  std::string subject_label;
  BoundingBox subject_box;
  std::string predicate;
  std::string object_label;
  BoundingBox object_box;
};

/// Resolves a predicted graph's relations into ranked triplets in emission
/// order. Relations with unresolvable endpoints are skipped.
std::vector<RankedTriplet> ranked_triplets(const SceneGraph& graph);

enum class SgdetDenominator {
  kMinKOrPred,  // P@K = TP / min(K, |predictions|)
  kK,           // P@K = TP / K
};

struct SgdetScore {
  int k = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
};

/// SGDET-style ranked evaluation under the with-constraint rule: before
/// truncation at most one predicate survives per (subject box+label,
/// object box+label) pair, keeping the best-ranked one. Matching follows the
/// strict triplet rule against the ground-truth relations. Rejects K <= 0.
std::vector<SgdetScore> evaluate_sgdet(
    const SceneGraph& gt, const std::vector<RankedTriplet>& ranked,
    const std::vector<int>& k_values, const MatchConfig& cfg = {},
    SgdetDenominator denominator = SgdetDenominator::kMinKOrPred);

}  // namespace sgg

#endif  // SGG_METRICS_HPP
