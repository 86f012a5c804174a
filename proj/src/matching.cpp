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

#include "sgg/matching.hpp"

#include "sgg/hungarian.hpp"

namespace sgg {

MatchResult match_objects(const SceneGraph& gt, const SceneGraph& pred,
                          const MatchConfig& cfg) {
  MatchResult result;
  if (gt.objects.empty() || pred.objects.empty()) return result;

  const Eigen::MatrixXd cost = object_cost_matrix(gt, pred, cfg);
  Assignment assignment = hungarian(cost);
  result.assignment = std::move(assignment.pairs);
  result.total_cost = assignment.total_cost;

  for (const auto& [i, j] : result.assignment) {
    const SceneObject& g = gt.objects[static_cast<std::size_t>(i)];
    const SceneObject& p = pred.objects[static_cast<std::size_t>(j)];
    ObjectPairScore score;
    score.gt_index = i;
    score.pred_index = j;
    score.similarity = g.label == p.label ? 1.0 : 0.0;
    score.iou = iou(g.box, p.box);
    score.giou = giou(g.box, p.box);
    score.l1 = l1_box(g.box, p.box, cfg.image_width, cfg.image_height);
    score.matched =
        score.similarity == 1.0 &&
        (!cfg.require_iou_for_match || score.iou >= cfg.iou_threshold);
    if (score.matched) ++result.matched_objects;
    result.per_pair.push_back(score);
  }
  return result;
}

std::vector<std::ptrdiff_t> max_bipartite_matching(
    const std::vector<std::vector<std::size_t>>& adjacency,
    std::size_t right_size) {
  std::vector<std::ptrdiff_t> match_left(adjacency.size(), -1);
  std::vector<std::ptrdiff_t> match_right(right_size, -1);

  // Kuhn's augmenting-path search from each left vertex in index order.
  std::vector<char> visited;
  auto augment = [&](auto&& self, std::size_t left) -> bool {
    for (std::size_t right : adjacency[left]) {
      if (right >= right_size || visited[right]) continue;
      visited[right] = 1;
      if (match_right[right] < 0 ||
          self(self, static_cast<std::size_t>(match_right[right]))) {
        match_left[left] = static_cast<std::ptrdiff_t>(right);
        match_right[right] = static_cast<std::ptrdiff_t>(left);
        return true;
      }
    }
    return false;
  };

  for (std::size_t left = 0; left < adjacency.size(); ++left) {
    visited.assign(right_size, 0);
    augment(augment, left);
  }
  return match_left;
}

namespace {

struct Endpoints {
  const SceneObject* subject = nullptr;
  const SceneObject* object = nullptr;
};

Endpoints resolve(const SceneGraph& graph, const Relation& rel) {
  return {graph.find_object(rel.subject_id), graph.find_object(rel.object_id)};
}

}  // namespace

RelationMatch match_relations(const SceneGraph& gt, const SceneGraph& pred,
                              const MatchConfig& cfg) {
  RelationMatch result;
  if (gt.relations.empty() || pred.relations.empty()) return result;

  std::vector<Endpoints> gt_ends(gt.relations.size());
  std::vector<Endpoints> pred_ends(pred.relations.size());
  for (std::size_t i = 0; i < gt.relations.size(); ++i) {
    gt_ends[i] = resolve(gt, gt.relations[i]);
  }
  for (std::size_t j = 0; j < pred.relations.size(); ++j) {
    pred_ends[j] = resolve(pred, pred.relations[j]);
  }

  std::vector<std::vector<std::size_t>> eligible(gt.relations.size());
  for (std::size_t i = 0; i < gt.relations.size(); ++i) {
    const Relation& g = gt.relations[i];
    if (!gt_ends[i].subject || !gt_ends[i].object) continue;
    for (std::size_t j = 0; j < pred.relations.size(); ++j) {
      const Relation& p = pred.relations[j];
      if (!pred_ends[j].subject || !pred_ends[j].object) continue;
      if (g.predicate != p.predicate || g.group != p.group) continue;
      if (gt_ends[i].subject->label != pred_ends[j].subject->label) continue;
      if (gt_ends[i].object->label != pred_ends[j].object->label) continue;
      if (iou(gt_ends[i].subject->box, pred_ends[j].subject->box) <
          cfg.iou_threshold) {
        continue;
      }
      if (iou(gt_ends[i].object->box, pred_ends[j].object->box) <
          cfg.iou_threshold) {
        continue;
      }
      eligible[i].push_back(j);
    }
  }

  const std::vector<std::ptrdiff_t> match =
      max_bipartite_matching(eligible, pred.relations.size());
  for (std::size_t i = 0; i < match.size(); ++i) {
    if (match[i] >= 0) {
      result.pairs.emplace_back(i, static_cast<std::size_t>(match[i]));
    }
  }
  result.matched_relations = result.pairs.size();
  return result;
}

}  // namespace sgg
