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

#ifndef SGG_GEOMETRY_HPP
#define SGG_GEOMETRY_HPP

#include <Eigen/Core>

#include "sgg/graph.hpp"

namespace sgg {

/// Intersection over union in [0, 1]. Degenerate (zero-area) boxes have no
/// overlap with anything, including an identical point box.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Generalized IoU in [-1, 1]: IoU minus the fraction of the smallest
/// enclosing box not covered by the union. 0 when the enclosing box itself is
/// degenerate (two coincident point boxes).
double giou(const BoundingBox& a, const BoundingBox& b);

/// L1 distance between boxes on coordinates normalized by the frame size, so
/// the value is scale-comparable with the unit-range GIoU term. Bounded by 4
/// for boxes inside the frame.
double l1_box(const BoundingBox& a, const BoundingBox& b,
              double image_width = 640.0, double image_height = 480.0);

/// Weights and thresholds shared by the assignment cost, the matched-object
/// criterion, and the evaluation protocols.
struct MatchConfig {
  double lambda_sim = 1.0;   // label-disagreement weight in the cost
  double lambda_giou = 1.0;  // (1 - GIoU) weight in the cost
  double lambda_l1 = 1.0;    // normalized L1 weight in the cost
  double iou_threshold = 0.5;
  double epsilon = 1e-6;
  // When false, a matched object needs only label equality, not the IoU gate.
  bool require_iou_for_match = true;
  double image_width = 640.0;
  double image_height = 480.0;
};

/// Pairwise IoU, rows indexed by `a`, columns by `b`.
Eigen::MatrixXd pairwise_iou(const std::vector<SceneObject>& a,
                             const std::vector<SceneObject>& b);

/// Assignment cost between ground-truth objects (rows) and predicted objects
/// (columns):
///   lambda_sim * (1 - [labels equal]) + lambda_giou * (1 - GIoU)
///   + lambda_l1 * L1.
Eigen::MatrixXd object_cost_matrix(const SceneGraph& gt, const SceneGraph& pred,
                                   const MatchConfig& cfg);

}  // namespace sgg

#endif  // SGG_GEOMETRY_HPP
