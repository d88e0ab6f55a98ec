// Copyright 2026 The Auto-GDA Authors.
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

#include "autogda/embed_space.h"

#include <random>

#include <gtest/gtest.h>

namespace autogda {
namespace {

EmbeddingVector vec(std::initializer_list<double> xs) {
  EmbeddingVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

TEST(Distance, MetricProperties) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    EmbeddingVector a(8), b(8), c(8);
    for (int i = 0; i < 8; ++i) {
      a[i] = n(gen);
      b[i] = n(gen);
      c[i] = n(gen);
    }
    EXPECT_EQ(distance(a, a), 0.0);
    EXPECT_EQ(distance(a, b), distance(b, a));
    EXPECT_GE(distance(a, b), 0.0);
    EXPECT_LE(distance(a, c), distance(a, b) + distance(b, c) + 1e-12);
  }
}

TEST(Distance, KnownValueAndMismatch) {
  EXPECT_DOUBLE_EQ(distance(vec({0, 0}), vec({3, 4})), 5.0);
  EXPECT_THROW(distance(vec({0, 0}), vec({1, 2, 3})), DimensionError);
}

TEST(TargetIndex, NearestAndTieBreak) {
  TargetIndex index;
  index.add("e1", {"zeta", "alpha", "far"},
            {vec({1, 0}), vec({-1, 0}), vec({10, 10})});
  // Equidistant from "zeta" and "alpha": the smaller text wins.
  NearestTarget n = index.nearest_target(vec({0, 0}), "e1");
  EXPECT_EQ(n.claim, "alpha");
  EXPECT_DOUBLE_EQ(n.distance, 1.0);
  n = index.nearest_target(vec({9, 9}), "e1");
  EXPECT_EQ(n.claim, "far");
  EXPECT_NEAR(n.distance, std::sqrt(2.0), 1e-15);
}

TEST(TargetIndex, DimensionAndEvidenceChecks) {
  TargetIndex index;
  index.add("e1", {"a"}, {vec({1, 2})});
  EXPECT_EQ(index.dim(), 2);
  EXPECT_THROW(index.add("e2", {"b"}, {vec({1, 2, 3})}), DimensionError);
  EXPECT_THROW(index.nearest_target(vec({1, 2, 3}), "e1"), DimensionError);
  EXPECT_THROW(index.nearest_target(vec({1, 2}), "missing"), std::out_of_range);
  EXPECT_TRUE(index.contains("e1"));
  EXPECT_FALSE(index.contains("e2"));
}

TEST(TargetIndex, AgreesWithBruteForce) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<std::string> claims;
  std::vector<EmbeddingVector> points;
  for (int i = 0; i < 40; ++i) {
    claims.push_back("c" + std::to_string(i));
    EmbeddingVector p(5);
    for (int d = 0; d < 5; ++d) p[d] = n(gen);
    points.push_back(p);
  }
  TargetIndex index;
  index.add("e", claims, points);
  for (int q = 0; q < 100; ++q) {
    EmbeddingVector x(5);
    for (int d = 0; d < 5; ++d) x[d] = n(gen);
    double best = INFINITY;
    std::string best_claim;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double dist = distance(x, points[i]);
      if (dist < best) {
        best = dist;
        best_claim = claims[i];
      }
    }
    const NearestTarget got = index.nearest_target(x, "e");
    EXPECT_EQ(got.claim, best_claim);
    EXPECT_NEAR(got.distance, best, 1e-12);
  }
}

}  // namespace
}  // namespace autogda
