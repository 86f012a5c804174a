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

#include <doctest.h>

#include "sgg/geometry.hpp"
#include "testutil.hpp"

using namespace sgg;

TEST_CASE("iou basics") {
  const BoundingBox a{0, 0, 10, 10};
  CHECK(iou(a, a) == doctest::Approx(1.0));
  CHECK(iou(a, {20, 20, 30, 30}) == 0.0);
  // I = 5*10 = 50, U = 100 + 100 - 50 = 150
  CHECK(iou(a, {5, 0, 15, 10}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("degenerate boxes have no overlap, even with themselves") {
  const BoundingBox point{5, 5, 5, 5};
  CHECK(iou(point, point) == 0.0);
  CHECK(iou(point, {0, 0, 10, 10}) == 0.0);
  // Two coincident points also have a degenerate enclosing box.
  CHECK(giou(point, point) == 0.0);
}

TEST_CASE("giou derived values") {
  const BoundingBox a{0, 0, 1, 1};
  CHECK(giou(a, a) == doctest::Approx(1.0));
  // disjoint: IoU 0, union 2, enclosing 3 -> 0 - (3-2)/3
  CHECK(giou(a, {2, 0, 3, 1}) == doctest::Approx(-1.0 / 3.0));
  // I = 1, U = 7, enclosing 9 -> 1/7 - 2/9 = -5/63
  CHECK(giou({0, 0, 2, 2}, {1, 1, 3, 3}) == doctest::Approx(-5.0 / 63.0));
}

TEST_CASE("l1 on normalized coordinates") {
  const BoundingBox a{10, 10, 100, 100};
  CHECK(l1_box(a, a) == 0.0);
  CHECK(l1_box({10, 10, 100, 100}, {11, 10, 100, 100}) ==
        doctest::Approx(1.0 / 640.0));
  // Full frame vs corner point stays within the normalized bound.
  CHECK(l1_box({0, 0, 640, 480}, {0, 0, 0, 0}) == doctest::Approx(2.0));
  testutil::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const BoundingBox x = testutil::random_box(rng);
    const BoundingBox y = testutil::random_box(rng);
    CHECK(l1_box(x, y) <= 4.0);
  }
}

TEST_CASE("symmetry and the giou <= iou bound") {
  testutil::Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    const BoundingBox a = testutil::random_box(rng, i % 2 == 0);
    const BoundingBox b = testutil::random_box(rng, i % 2 == 0);
    CHECK(iou(a, b) == iou(b, a));
    CHECK(giou(a, b) == giou(b, a));
    CHECK(giou(a, b) <= iou(a, b) + 1e-12);
    CHECK(iou(a, b) >= 0.0);
    CHECK(iou(a, b) <= 1.0);
    CHECK(giou(a, b) >= -1.0);
    CHECK(giou(a, b) <= 1.0);
  }
}

TEST_CASE("giou equals iou when the enclosing box is the union extent") {
  // b inside a: enclosing box == a, union == a.
  const BoundingBox a{0, 0, 100, 100};
  const BoundingBox b{20, 20, 60, 60};
  CHECK(giou(a, b) == doctest::Approx(iou(a, b)));
}

TEST_CASE("cost matrix matches the formula") {
  SceneGraph gt;
  gt.objects.push_back({0, "zebra", {0, 0, 100, 100}});
  SceneGraph pred;
  pred.objects.push_back({0, "zebra", {0, 0, 100, 100}});
  pred.objects.push_back({1, "grass", {0, 0, 100, 100}});

  const MatchConfig cfg;
  const Eigen::MatrixXd cost = object_cost_matrix(gt, pred, cfg);
  REQUIRE(cost.rows() == 1);
  REQUIRE(cost.cols() == 2);
  CHECK(cost(0, 0) == doctest::Approx(0.0));          // identical, same label
  CHECK(cost(0, 1) == doctest::Approx(cfg.lambda_sim));  // label mismatch only
}
