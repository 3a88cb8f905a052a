/*
 * Copyright 2026 The seefew Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "seefew/losses.hpp"

using namespace seefew;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("smooth_l1 values") {
  CHECK(smooth_l1(0.7, 0.7) == 0.0);
  CHECK_THAT(smooth_l1(1.0, 0.5), WithinAbs(0.125, 1e-15));
  CHECK_THAT(smooth_l1(2.0, 0.0), WithinAbs(1.5, 1e-15));
  CHECK_THAT(smooth_l1(0.0, 2.0), WithinAbs(1.5, 1e-15));
}

TEST_CASE("seeding_loss sums SmoothL1 over aligned lists") {
  CHECK(seeding_loss({0.1, 0.9}, {0.1, 0.9}) == 0.0);
  CHECK_THAT(seeding_loss({0.5}, {1.0}), WithinAbs(0.125, 1e-15));
  CHECK_THROWS_AS(seeding_loss({0.5}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("expansion_loss sums over both offsets") {
  const std::vector<OffsetPair> pred{{0.0, 0.0}};
  CHECK_THAT(expansion_loss(pred, {{1.0, -1.0}}), WithinAbs(1.0, 1e-15));
  CHECK_THAT(expansion_loss(pred, {{3.0, 0.0}}), WithinAbs(2.5, 1e-15));
  CHECK(expansion_loss(pred, {{0.0, 0.0}}) == 0.0);
  CHECK_THROWS_AS(expansion_loss(pred, {}), std::invalid_argument);
}

TEST_CASE("focal loss hand values") {
  // gamma = 0 reduces to plain cross-entropy.
  CHECK_THAT(focal_loss(0.8, EntailLabel::kEntail, 0.0),
             WithinAbs(0.2231435513, 1e-9));
  // -(0.1)^2 * log(0.9), hand-evaluated.
  CHECK_THAT(focal_loss(0.9, EntailLabel::kEntail, 2.0),
             WithinAbs(1.0536051565782630e-3, 1e-9));
  // Loss vanishes as the prediction approaches the label.
  CHECK(focal_loss(1.0 - 1e-9, EntailLabel::kEntail, 2.0) < 1e-15);
  CHECK(focal_loss(1e-9, EntailLabel::kNotEntail, 2.0) < 1e-15);
}

TEST_CASE("focal loss rejects out-of-range probabilities") {
  CHECK_THROWS_AS(focal_loss(0.0, EntailLabel::kEntail, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(focal_loss(1.0, EntailLabel::kEntail, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(focal_loss(-0.1, EntailLabel::kNotEntail, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(focal_loss(0.5, EntailLabel::kEntail, -1.0), std::invalid_argument);
}

TEST_CASE("focal loss with gamma 0 equals binary cross-entropy") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> p_dist(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 1000; ++i) {
    const double p = p_dist(rng);
    const double bce_pos = -std::log(p);
    const double bce_neg = -std::log(1.0 - p);
    CHECK_THAT(focal_loss(p, EntailLabel::kEntail, 0.0), WithinAbs(bce_pos, 1e-9));
    CHECK_THAT(focal_loss(p, EntailLabel::kNotEntail, 0.0), WithinAbs(bce_neg, 1e-9));
  }
}

TEST_CASE("focal gradient matches central finite differences") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> p_dist(0.02, 0.98);
  const double h = 1e-6;
  for (const double gamma : {0.0, 1.0, 2.0, 3.5}) {
    for (const auto label : {EntailLabel::kEntail, EntailLabel::kNotEntail}) {
      for (int i = 0; i < 20; ++i) {
        const double p = p_dist(rng);
        const double numeric =
            (focal_loss(p + h, label, gamma) - focal_loss(p - h, label, gamma)) /
            (2.0 * h);
        const double analytic = focal_loss_grad(p, label, gamma);
        CHECK_THAT(analytic, WithinRel(numeric, 1e-4));
      }
    }
  }
}

TEST_CASE("smooth_l1 gradient matches central finite differences") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  const double h = 1e-6;
  int checked = 0;
  while (checked < 20) {
    const double target = dist(rng);
    const double pred = dist(rng);
    // Stay away from the |diff| = 1 kink where the derivative jumps.
    if (std::abs(std::abs(target - pred) - 1.0) < 1e-2) continue;
    const double numeric =
        (smooth_l1(target, pred + h) - smooth_l1(target, pred - h)) / (2.0 * h);
    const double analytic = smooth_l1_grad_pred(target, pred);
    if (std::abs(numeric) > 1e-12) {
      CHECK_THAT(analytic, WithinRel(numeric, 1e-4));
    } else {
      CHECK_THAT(analytic, WithinAbs(numeric, 1e-9));
    }
    ++checked;
  }
}

TEST_CASE("clamp_prob keeps probabilities inside the open interval") {
  CHECK(clamp_prob(0.0) == kProbEpsilon);
  CHECK(clamp_prob(1.0) == 1.0 - kProbEpsilon);
  CHECK(clamp_prob(0.5) == 0.5);
}
