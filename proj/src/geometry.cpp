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

#include "sgg/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace sgg {

namespace {

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

}  // namespace

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double giou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  const double hull_w = std::max(a.x2, b.x2) - std::min(a.x1, b.x1);
  const double hull_h = std::max(a.y2, b.y2) - std::min(a.y1, b.y1);
  const double hull = hull_w * hull_h;
  if (hull <= 0.0) return 0.0;
  const double overlap = uni <= 0.0 ? 0.0 : inter / uni;
  return overlap - (hull - uni) / hull;
}

double l1_box(const BoundingBox& a, const BoundingBox& b, double image_width,
              double image_height) {
  return std::abs(a.x1 - b.x1) / image_width +
         std::abs(a.y1 - b.y1) / image_height +
         std::abs(a.x2 - b.x2) / image_width +
         std::abs(a.y2 - b.y2) / image_height;
}

Eigen::MatrixXd pairwise_iou(const std::vector<SceneObject>& a,
                             const std::vector<SceneObject>& b) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(a.size()),
                      static_cast<Eigen::Index>(b.size()));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      out(i, j) = iou(a[static_cast<std::size_t>(i)].box,
                      b[static_cast<std::size_t>(j)].box);
    }
  }
  return out;
}

Eigen::MatrixXd object_cost_matrix(const SceneGraph& gt, const SceneGraph& pred,
                                   const MatchConfig& cfg) {
  Eigen::MatrixXd cost(static_cast<Eigen::Index>(gt.objects.size()),
                       static_cast<Eigen::Index>(pred.objects.size()));
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    const SceneObject& g = gt.objects[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      const SceneObject& p = pred.objects[static_cast<std::size_t>(j)];
      const double sim = g.label == p.label ? 1.0 : 0.0;
      cost(i, j) = cfg.lambda_sim * (1.0 - sim) +
                   cfg.lambda_giou * (1.0 - giou(g.box, p.box)) +
                   cfg.lambda_l1 * l1_box(g.box, p.box, cfg.image_width,
                                          cfg.image_height);
    }
  }
  return cost;
}

}  // namespace sgg
