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

#ifndef SGG_MATCHING_HPP
#define SGG_MATCHING_HPP

#include <Eigen/Core>
#include <cstddef>
#include <utility>
#include <vector>

#include "sgg/geometry.hpp"
#include "sgg/graph.hpp"

namespace sgg {

struct ObjectPairScore {
  Eigen::Index gt_index = 0;
  Eigen::Index pred_index = 0;
  double similarity = 0.0;  // exact label equality, 0 or 1
  double iou = 0.0;
  double giou = 0.0;
  double l1 = 0.0;
  bool matched = false;  // counts toward matched_objects
};

/// The optimal object assignment and everything the reward and metrics need
/// from it. The assignment covers min(|gt|, |pred|) pairs; matched_objects
/// counts the assigned pairs with equal labels that pass the IoU gate.
struct MatchResult {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> assignment;
  std::vector<ObjectPairScore> per_pair;
  std::size_t matched_objects = 0;
  double total_cost = 0.0;
};

/// Hungarian assignment between ground-truth and predicted objects under the
/// matching cost (label disagreement + GIoU gap + normalized L1). Empty
/// graphs yield an empty assignment.
MatchResult match_objects(const SceneGraph& gt, const SceneGraph& pred,
                          const MatchConfig& cfg = {});

struct RelationMatch {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (gt idx, pred idx)
  std::size_t matched_relations = 0;
};

/// Strict one-to-one relation matching: a predicted relation is eligible for
/// a ground-truth relation iff subject label, predicate (and group, when
/// present), and object label are equal, and both endpoint box pairs reach
/// the IoU threshold. One-to-one resolution is maximum bipartite matching on
/// the eligibility graph.
RelationMatch match_relations(const SceneGraph& gt, const SceneGraph& pred,
                              const MatchConfig& cfg = {});

/// Maximum bipartite matching via augmenting paths. adjacency[i] lists the
/// right-side vertices eligible for left vertex i; iteration order is fixed,
/// so the result is deterministic. Returns the matched right vertex per left
/// vertex, or -1.
std::vector<std::ptrdiff_t> max_bipartite_matching(
    const std::vector<std::vector<std::size_t>>& adjacency,
    std::size_t right_size);

}  // namespace sgg

#endif  // SGG_MATCHING_HPP
