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
//
// Brute-force reference implementations. These stay independent of the
// production solvers: assignments are found by exhaustive enumeration and the
// scoring formulas are transcribed separately, so the two paths can only
// agree by being right.

#ifndef SGG_TESTS_ORACLES_HPP
#define SGG_TESTS_ORACLES_HPP

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "sgg/geometry.hpp"
#include "sgg/graph.hpp"
#include "sgg/reward.hpp"
#include "sgg/toon.hpp"

namespace oracles {

struct BruteAssignment {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;  // sorted by row
  double total = 0.0;
};

namespace detail {

// Enumerates every maximal one-to-one assignment in flattened-lexicographic
// order ((row, col, row, col, ...) sequences ascending).
template <typename Visit>
void enumerate_assignments(Eigen::Index rows, Eigen::Index cols,
                           Visit&& visit) {
  const Eigen::Index size = std::min(rows, cols);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> current;
  std::vector<char> col_used(static_cast<std::size_t>(cols), 0);

  auto recurse = [&](auto&& self, Eigen::Index next_row,
                     Eigen::Index remaining) -> void {
    if (remaining == 0) {
      visit(current);
      return;
    }
    // Row i can start the rest only if enough rows remain after it.
    for (Eigen::Index i = next_row; rows - i >= remaining; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (col_used[static_cast<std::size_t>(j)]) continue;
        col_used[static_cast<std::size_t>(j)] = 1;
        current.emplace_back(i, j);
        self(self, i + 1, remaining - 1);
        current.pop_back();
        col_used[static_cast<std::size_t>(j)] = 0;
      }
    }
  };
  if (size > 0) recurse(recurse, 0, size);
}

}  // namespace detail

// Minimum-cost assignment by exhaustive search; among near-ties (1e-9
// relative) the first in flattened-lexicographic order wins, mirroring the
// production tie-break.
inline BruteAssignment brute_force_assignment(const Eigen::MatrixXd& cost) {
  BruteAssignment best;
  if (cost.rows() == 0 || cost.cols() == 0) return best;

  double min_total = std::numeric_limits<double>::infinity();
  detail::enumerate_assignments(
      cost.rows(), cost.cols(),
      [&](const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs) {
        double total = 0.0;
        for (const auto& [i, j] : pairs) total += cost(i, j);
        if (total < min_total) min_total = total;
      });

  const double tol = 1e-9 * std::max(1.0, std::abs(min_total));
  bool found = false;
  detail::enumerate_assignments(
      cost.rows(), cost.cols(),
      [&](const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs) {
        if (found) return;
        double total = 0.0;
        for (const auto& [i, j] : pairs) total += cost(i, j);
        if (total <= min_total + tol) {
          best.pairs = pairs;
          best.total = total;
          found = true;
        }
      });
  return best;
}

// Maximum bipartite matching size by exhaustive search over left-vertex
// choices.
inline std::size_t brute_force_max_matching(
    const std::vector<std::vector<std::size_t>>& adjacency,
    std::size_t right_size) {
  std::vector<char> used(right_size, 0);
  auto recurse = [&](auto&& self, std::size_t left) -> std::size_t {
    if (left == adjacency.size()) return 0;
    std::size_t best = self(self, left + 1);  // leave `left` unmatched
    for (std::size_t right : adjacency[left]) {
      if (right >= right_size || used[right]) continue;
      used[right] = 1;
      best = std::max(best, 1 + self(self, left + 1));
      used[right] = 0;
    }
    return best;
  };
  return recurse(recurse, 0);
}

struct BruteReward {
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
};

// Independent transcription of the scoring rule on top of the exhaustive
// matchers. Parsing is shared (the oracle checks the calculus, not the
// codec).
inline BruteReward brute_force_reward(const sgg::SceneGraph& gt,
                                      const std::string& completion,
                                      const sgg::RewardWeights& w,
                                      const sgg::MatchConfig& cfg) {
  BruteReward out;
  const sgg::ParseOutcome outcome = sgg::extract_answer(completion, gt.schema);
  if (!outcome.valid || !outcome.graph) return out;
  out.valid_mask = 1;

  const sgg::SceneGraph& pred = *outcome.graph;
  const std::size_t n_gt = gt.objects.size();
  const std::size_t n_pred = pred.objects.size();

  // Assignment under the matching cost, by enumeration.
  std::size_t matched_objects = 0;
  double sim_sum = 0.0;
  double box_sum = 0.0;
  if (n_gt > 0 && n_pred > 0) {
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(n_gt),
                         static_cast<Eigen::Index>(n_pred));
    for (std::size_t i = 0; i < n_gt; ++i) {
      for (std::size_t j = 0; j < n_pred; ++j) {
        const double sim =
            gt.objects[i].label == pred.objects[j].label ? 1.0 : 0.0;
        cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            cfg.lambda_sim * (1.0 - sim) +
            cfg.lambda_giou * (1.0 - sgg::giou(gt.objects[i].box,
                                               pred.objects[j].box)) +
            cfg.lambda_l1 * sgg::l1_box(gt.objects[i].box, pred.objects[j].box,
                                        cfg.image_width, cfg.image_height);
      }
    }
    const BruteAssignment assignment = brute_force_assignment(cost);
    for (const auto& [gi, pj] : assignment.pairs) {
      const auto& g = gt.objects[static_cast<std::size_t>(gi)];
      const auto& p = pred.objects[static_cast<std::size_t>(pj)];
      const double sim = g.label == p.label ? 1.0 : 0.0;
      const double overlap = sgg::iou(g.box, p.box);
      const double l1 = sgg::l1_box(g.box, p.box, cfg.image_width,
                                    cfg.image_height);
      sim_sum += sim;
      const double mix = w.lambda_iou + w.lambda_l1;
      box_sum += mix > 0.0 ? (w.lambda_iou * overlap +
                              w.lambda_l1 * std::exp(-l1)) /
                                 mix
                           : 0.0;
      if (sim == 1.0 &&
          (!cfg.require_iou_for_match || overlap >= cfg.iou_threshold)) {
        ++matched_objects;
      }
    }
  }
  const double obj_denom = static_cast<double>(std::max(n_gt, n_pred));
  out.obj_cls = obj_denom > 0.0 ? w.obj_cls * sim_sum / obj_denom : 0.0;
  out.obj_box = obj_denom > 0.0 ? w.obj_box * box_sum / obj_denom : 0.0;

  // Relation matching by enumeration on independently recomputed
  // eligibility.
  std::vector<std::vector<std::size_t>> eligible(gt.relations.size());
  for (std::size_t gi = 0; gi < gt.relations.size(); ++gi) {
    const sgg::Relation& g = gt.relations[gi];
    const sgg::SceneObject* gs = gt.find_object(g.subject_id);
    const sgg::SceneObject* go = gt.find_object(g.object_id);
    if (!gs || !go) continue;
    for (std::size_t pj = 0; pj < pred.relations.size(); ++pj) {
      const sgg::Relation& p = pred.relations[pj];
      const sgg::SceneObject* ps = pred.find_object(p.subject_id);
      const sgg::SceneObject* po = pred.find_object(p.object_id);
      if (!ps || !po) continue;
      if (g.predicate != p.predicate || g.group != p.group) continue;
      if (gs->label != ps->label || go->label != po->label) continue;
      if (sgg::iou(gs->box, ps->box) < cfg.iou_threshold) continue;
      if (sgg::iou(go->box, po->box) < cfg.iou_threshold) continue;
      eligible[gi].push_back(pj);
    }
  }
  const std::size_t matched_relations =
      brute_force_max_matching(eligible, pred.relations.size());

  const std::size_t n_gt_rel = gt.relations.size();
  const std::size_t n_pred_rel = pred.relations.size();
  const double recall =
      n_gt_rel > 0
          ? static_cast<double>(matched_relations) / static_cast<double>(n_gt_rel)
          : 0.0;
  const double precision = n_pred_rel > 0
                               ? static_cast<double>(matched_relations) /
                                     static_cast<double>(n_pred_rel)
                               : 0.0;
  const double f1 = precision + recall > 0.0
                        ? 2.0 * precision * recall / (precision + recall)
                        : 0.0;
  out.rel_recall = w.rel_recall * recall;
  out.rel_precision = w.rel_precision * precision;
  out.rel_f1 = w.rel_f1 * f1;

  const double obj_frac =
      n_pred > 0 ? static_cast<double>(n_pred - matched_objects) /
                       static_cast<double>(n_pred)
                 : 0.0;
  const double rel_frac =
      n_pred_rel > 0 ? static_cast<double>(n_pred_rel - matched_relations) /
                           static_cast<double>(n_pred_rel)
                     : 0.0;
  out.penalty_obj = w.obj_hallucination * std::pow(obj_frac, w.alpha_obj);
  out.penalty_rel = w.rel_hallucination * std::pow(rel_frac, w.alpha_rel);

  out.format = w.format;
  out.total = out.format + out.obj_cls + out.obj_box + out.rel_recall +
              out.rel_precision + out.rel_f1 - out.penalty_obj -
              out.penalty_rel;
  return out;
}

}  // namespace oracles

#endif  // SGG_TESTS_ORACLES_HPP
