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

#include "sgg/reward.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <unordered_set>

#include "sgg/toon.hpp"

namespace sgg {

namespace {

// Exact empty-set rule: x/0 is 0. For non-empty integer denominators this is
// identical to the max(count, epsilon) guard.
double safe_div(double num, double den) { return den > 0.0 ? num / den : 0.0; }

RewardDiagnostics collect_diagnostics(const ParseOutcome& outcome) {
  RewardDiagnostics d;
  d.has_answer_tags = outcome.answer_tags_found ? 1.0 : 0.0;
  if (!outcome.graph) return d;

  const SceneGraph& graph = *outcome.graph;
  d.num_pred_objs = static_cast<double>(graph.objects.size());
  d.num_pred_rels = static_cast<double>(graph.relations.size());
  d.frac_no_rel = graph.relations.empty() ? 1.0 : 0.0;

  std::unordered_set<int> ids;
  for (const auto& obj : graph.objects) ids.insert(obj.id);
  std::size_t bad = 0;
  for (const auto& rel : graph.relations) {
    if (rel.subject_id == rel.object_id || !ids.count(rel.subject_id) ||
        !ids.count(rel.object_id)) {
      ++bad;
    }
  }
  d.frac_invalid_rel = safe_div(static_cast<double>(bad),
                                static_cast<double>(graph.relations.size()));
  return d;
}

}  // namespace

double reward_obj_cls(const MatchResult& match, std::size_t gt_count,
                      std::size_t pred_count, double weight) {
  const std::size_t denom = std::max(gt_count, pred_count);
  double sum = 0.0;
  for (const auto& pair : match.per_pair) sum += pair.similarity;
  return weight * safe_div(sum, static_cast<double>(denom));
}

double reward_obj_box(const MatchResult& match, std::size_t gt_count,
                      std::size_t pred_count, const RewardWeights& weights) {
  const std::size_t denom = std::max(gt_count, pred_count);
  const double mix = weights.lambda_iou + weights.lambda_l1;
  double sum = 0.0;
  for (const auto& pair : match.per_pair) {
    sum += safe_div(weights.lambda_iou * pair.iou +
                        weights.lambda_l1 * std::exp(-pair.l1),
                    mix);
  }
  return weights.obj_box * safe_div(sum, static_cast<double>(denom));
}

RelationRewardTerms reward_relations(std::size_t matched_relations,
                                     std::size_t gt_relations,
                                     std::size_t pred_relations,
                                     const RewardWeights& weights) {
  const double recall = safe_div(static_cast<double>(matched_relations),
                                 static_cast<double>(gt_relations));
  const double precision = safe_div(static_cast<double>(matched_relations),
                                    static_cast<double>(pred_relations));
  const double f1 = safe_div(2.0 * precision * recall, precision + recall);
  return {weights.rel_recall * recall, weights.rel_precision * precision,
          weights.rel_f1 * f1};
}

HallucinationPenalties hallucination_penalties(std::size_t matched_objects,
                                               std::size_t matched_relations,
                                               std::size_t pred_objects,
                                               std::size_t pred_relations,
                                               const RewardWeights& weights) {
  const double obj_frac =
      safe_div(static_cast<double>(pred_objects - matched_objects),
               static_cast<double>(pred_objects));
  const double rel_frac =
      safe_div(static_cast<double>(pred_relations - matched_relations),
               static_cast<double>(pred_relations));
  return {weights.obj_hallucination * std::pow(obj_frac, weights.alpha_obj),
          weights.rel_hallucination * std::pow(rel_frac, weights.alpha_rel)};
}

RewardBreakdown score_completion(const SceneGraph& gt,
                                 const std::string& completion,
                                 const RewardWeights& weights,
                                 const MatchConfig& cfg) {
  const ParseOutcome outcome = extract_answer(completion, gt.schema);

  RewardBreakdown breakdown;
  breakdown.diagnostics = collect_diagnostics(outcome);
  breakdown.valid_mask = outcome.valid ? 1 : 0;
  if (!outcome.valid) return breakdown;

  const SceneGraph& pred = *outcome.graph;
  const MatchResult objects = match_objects(gt, pred, cfg);
  const RelationMatch relations = match_relations(gt, pred, cfg);

  breakdown.format = weights.format;
  breakdown.obj_cls = reward_obj_cls(objects, gt.objects.size(),
                                     pred.objects.size(), weights.obj_cls);
  breakdown.obj_box =
      reward_obj_box(objects, gt.objects.size(), pred.objects.size(), weights);
  const RelationRewardTerms rel_terms =
      reward_relations(relations.matched_relations, gt.relations.size(),
                       pred.relations.size(), weights);
  breakdown.rel_recall = rel_terms.recall;
  breakdown.rel_precision = rel_terms.precision;
  breakdown.rel_f1 = rel_terms.f1;
  const HallucinationPenalties penalties = hallucination_penalties(
      objects.matched_objects, relations.matched_relations,
      pred.objects.size(), pred.relations.size(), weights);
  breakdown.penalty_obj = penalties.objects;
  breakdown.penalty_rel = penalties.relations;

  breakdown.total = breakdown.format + breakdown.obj_cls + breakdown.obj_box +
                    breakdown.rel_recall + breakdown.rel_precision +
                    breakdown.rel_f1 - breakdown.penalty_obj -
                    breakdown.penalty_rel;
  return breakdown;
}

std::vector<RewardBreakdown> score_batch(
    const std::vector<std::pair<SceneGraph, std::string>>& items,
    const RewardWeights& weights, const MatchConfig& cfg,
    std::size_t threads) {
  std::vector<RewardBreakdown> results(items.size());
  if (items.empty()) return results;

  if (threads == 0) {
    threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  threads = std::min(threads, items.size());

  if (threads <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      results[i] = score_completion(items[i].first, items[i].second, weights,
                                    cfg);
    }
    return results;
  }

  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < items.size(); i += threads) {
        results[i] = score_completion(items[i].first, items[i].second, weights,
                                      cfg);
      }
    });
  }
  for (auto& worker : workers) worker.join();
  return results;
}

}  // namespace sgg
