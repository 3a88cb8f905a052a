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
#ifndef SEEFEW_LOSSES_HPP_
#define SEEFEW_LOSSES_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "seefew/span.hpp"

namespace seefew {

/// SmoothL1 on the difference d = target - pred: 0.5 d^2 inside |d| < 1,
/// |d| - 0.5 outside. Transition point fixed at 1.
inline double smooth_l1(double target, double pred) {
  const double d = target - pred;
  const double ad = std::abs(d);
  return ad < 1.0 ? 0.5 * d * d : ad - 0.5;
}

/// d(smooth_l1)/d(pred).
inline double smooth_l1_grad_pred(double target, double pred) {
  const double d = target - pred;
  if (std::abs(d) < 1.0) return -d;
  return d > 0.0 ? -1.0 : 1.0;
}

/// Sum of SmoothL1 over aligned prediction/target lists (the seed head's
/// regression loss).
inline double seeding_loss(const std::vector<double>& pred_scores,
                           const std::vector<double>& gold_scores) {
  if (pred_scores.size() != gold_scores.size()) {
    throw std::invalid_argument("seeding_loss: prediction/target length mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pred_scores.size(); ++i) {
    total += smooth_l1(gold_scores[i], pred_scores[i]);
  }
  return total;
}

/// Sum of SmoothL1 over both boundary offsets of aligned pairs. Targets exist
/// only for seeds that overlap an entity; callers filter before this call.
inline double expansion_loss(const std::vector<OffsetPair>& pred,
                             const std::vector<OffsetPair>& gold) {
  if (pred.size() != gold.size()) {
    throw std::invalid_argument("expansion_loss: prediction/target length mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    total += smooth_l1(gold[i].o_l, pred[i].o_l);
    total += smooth_l1(gold[i].o_r, pred[i].o_r);
  }
  return total;
}

enum class EntailLabel { kEntail, kNotEntail };

/// Focal loss on the entail-class probability p:
///   entail:     -(1-p)^gamma * log(p)
///   not entail: -p^gamma * log(1-p)
/// gamma = 0 reduces to binary cross-entropy. p must lie strictly inside
/// (0,1); callers clamp upstream with epsilon 1e-7.
inline double focal_loss(double p_entail, EntailLabel label, double gamma) {
  if (!(p_entail > 0.0 && p_entail < 1.0)) {
    throw std::invalid_argument("focal_loss: p must be in (0,1)");
  }
  if (gamma < 0.0) throw std::invalid_argument("focal_loss: gamma must be >= 0");
  if (label == EntailLabel::kEntail) {
    return -std::pow(1.0 - p_entail, gamma) * std::log(p_entail);
  }
  return -std::pow(p_entail, gamma) * std::log(1.0 - p_entail);
}

/// d(focal_loss)/dp.
inline double focal_loss_grad(double p_entail, EntailLabel label, double gamma) {
  if (!(p_entail > 0.0 && p_entail < 1.0)) {
    throw std::invalid_argument("focal_loss_grad: p must be in (0,1)");
  }
  const double p = p_entail;
  if (label == EntailLabel::kEntail) {
    // d/dp [-(1-p)^g log p] = g (1-p)^(g-1) log p - (1-p)^g / p
    const double pow_g = std::pow(1.0 - p, gamma);
    double out = -pow_g / p;
    if (gamma > 0.0) out += gamma * std::pow(1.0 - p, gamma - 1.0) * std::log(p);
    return out;
  }
  // d/dp [-p^g log(1-p)] = -g p^(g-1) log(1-p) + p^g / (1-p)
  const double pow_g = std::pow(p, gamma);
  double out = pow_g / (1.0 - p);
  if (gamma > 0.0) out -= gamma * std::pow(p, gamma - 1.0) * std::log(1.0 - p);
  return out;
}

constexpr double kProbEpsilon = 1e-7;

inline double clamp_prob(double p) {
  if (p < kProbEpsilon) return kProbEpsilon;
  if (p > 1.0 - kProbEpsilon) return 1.0 - kProbEpsilon;
  return p;
}

}  // namespace seefew

#endif  // SEEFEW_LOSSES_HPP_
