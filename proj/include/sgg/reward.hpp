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

#ifndef SGG_REWARD_HPP
#define SGG_REWARD_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sgg/graph.hpp"
#include "sgg/matching.hpp"

namespace sgg {

/// Per-term weights of the scoring rule. Defaults are the production
/// fine-tuning configuration. All denominators use exact
/// zero-when-empty rules, so every positive term lies in [0, weight] and each
/// penalty in [0, weight].
struct RewardWeights {
  double format = 0.5;
  double obj_cls = 1.5;
  double obj_box = 1.5;
  double rel_recall = 3.0;
  double rel_precision = 1.0;
  double rel_f1 = 2.0;
  double obj_hallucination = 1.0;
  double rel_hallucination = 1.0;
  double alpha_obj = 2.0;  // exponent on the unmatched-object fraction
  double alpha_rel = 2.0;
  double lambda_iou = 1.0;  // box-reward mix: IoU share
  double lambda_l1 = 1.0;   // box-reward mix: exp(-L1) share
};

/// Zero-weight monitoring signals, populated even for invalid completions
/// from the best-effort parse.
struct RewardDiagnostics {
  double frac_no_rel = 1.0;
  double num_pred_objs = 0.0;
  double num_pred_rels = 0.0;
  double frac_invalid_rel = 0.0;
  double has_answer_tags = 0.0;
};

struct RewardBreakdown {
  int valid_mask = 0;
  double format = 0.0;
  double obj_cls = 0.0;
  double obj_box = 0.0;
  double rel_recall = 0.0;
  double rel_precision = 0.0;
  double rel_f1 = 0.0;
  double penalty_obj = 0.0;
  double penalty_rel = 0.0;
  double total = 0.0;
  RewardDiagnostics diagnostics;
};

/// Object classification reward: weight * sum of per-pair label similarity
/// over max(|gt|, |pred|).
double reward_obj_cls(const MatchResult& match, std::size_t gt_count,
                      std::size_t pred_count, double weight);

/// Object localization reward: weight / max(|gt|, |pred|) * sum over assigned
/// pairs of (lambda_iou * IoU + lambda_l1 * exp(-L1)) / (lambda_iou +
/// lambda_l1).
double reward_obj_box(const MatchResult& match, std::size_t gt_count,
                      std::size_t pred_count, const RewardWeights& weights);

struct RelationRewardTerms {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

/// Weighted recall, precision and F1 terms from the matched-relation count.
RelationRewardTerms reward_relations(std::size_t matched_relations,
                                     std::size_t gt_relations,
                                     std::size_t pred_relations,
                                     const RewardWeights& weights);

struct HallucinationPenalties {
  double objects = 0.0;
  double relations = 0.0;
};

/// weight * (unmatched fraction)^alpha for predicted objects and relations;
/// zero when nothing was predicted.
HallucinationPenalties hallucination_penalties(std::size_t matched_objects,
                                               std::size_t matched_relations,
                                               std::size_t pred_objects,
                                               std::size_t pred_relations,
                                               const RewardWeights& weights);

/// Scores one model completion against the cleaned ground truth:
/// answer-tag extraction, TOON parse, validity gating, object/relation
/// matching, all reward terms and both penalties. Invalid completions yield
/// total 0 with all positive terms reported as 0; diagnostics are always
/// populated.
RewardBreakdown score_completion(const SceneGraph& gt,
                                 const std::string& completion,
                                 const RewardWeights& weights = {},
                                 const MatchConfig& cfg = {});

/// Order-preserving batch scoring, fanned out over a worker pool. Results are
/// identical to calling score_completion sequentially. threads == 0 picks the
/// hardware concurrency.
std::vector<RewardBreakdown> score_batch(
    const std::vector<std::pair<SceneGraph, std::string>>& items,
    const RewardWeights& weights = {}, const MatchConfig& cfg = {},
    std::size_t threads = 0);

}  // namespace sgg

#endif  // SGG_REWARD_HPP
