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
#ifndef SEEFEW_INFERENCE_HPP_
#define SEEFEW_INFERENCE_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "seefew/inventory.hpp"
#include "seefew/span.hpp"

namespace seefew {

struct ScoredPrediction {
  Span span;
  std::string type_name;  // always a member of T+, never the non-entity type
  double score = 0.0;
};

/// Assigns each candidate its argmax type (ties to the earlier column), drops
/// non-entity winners, then resolves overlaps greedily: survivors sorted by
/// score descending (ties: smaller l, then smaller r), a span is kept only if
/// it overlaps no kept span.
inline std::vector<ScoredPrediction> decode(
    const std::vector<Span>& candidates,
    const std::vector<std::vector<double>>& pair_scores,
    const TypeInventory& inventory) {
  if (candidates.size() != pair_scores.size()) {
    throw std::invalid_argument("decode: candidate/score count mismatch");
  }
  std::vector<ScoredPrediction> typed;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& scores = pair_scores[i];
    if (static_cast<int>(scores.size()) != inventory.v()) {
      throw std::invalid_argument("decode: candidate needs exactly v scores");
    }
    int best = 0;
    for (int t = 1; t < inventory.v(); ++t) {
      if (scores[static_cast<std::size_t>(t)] > scores[static_cast<std::size_t>(best)]) {
        best = t;
      }
    }
    if (best == inventory.none_index()) continue;
    typed.push_back({candidates[i], inventory.name_at(best),
                     scores[static_cast<std::size_t>(best)]});
  }

  std::sort(typed.begin(), typed.end(),
            [](const ScoredPrediction& a, const ScoredPrediction& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.span.l != b.span.l) return a.span.l < b.span.l;
              return a.span.r < b.span.r;
            });

  std::vector<ScoredPrediction> kept;
  for (const auto& p : typed) {
    bool clashes = false;
    for (const auto& k : kept) clashes |= spans_overlap(p.span, k.span);
    if (!clashes) kept.push_back(p);
  }
  return kept;
}

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
};

/// Exact span+type micro metrics over aligned sentence lists. Empty
/// prediction sets score P = 0 by convention.
inline MetricsReport evaluate(
    const std::vector<std::vector<ScoredPrediction>>& predictions,
    const std::vector<std::vector<Entity>>& gold) {
  if (predictions.size() != gold.size()) {
    throw std::invalid_argument("evaluate: sentence count mismatch");
  }
  MetricsReport rep;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    rep.predicted += predictions[i].size();
    rep.gold += gold[i].size();
    for (const auto& p : predictions[i]) {
      for (const auto& g : gold[i]) {
        if (p.span == g.span && p.type_name == g.type_name) {
          ++rep.true_positives;
          break;
        }
      }
    }
  }
  rep.precision = rep.predicted == 0
                      ? 0.0
                      : static_cast<double>(rep.true_positives) /
                            static_cast<double>(rep.predicted);
  rep.recall = rep.gold == 0 ? 0.0
                             : static_cast<double>(rep.true_positives) /
                                   static_cast<double>(rep.gold);
  rep.f1 = rep.precision + rep.recall > 0.0
               ? 2.0 * rep.precision * rep.recall / (rep.precision + rep.recall)
               : 0.0;
  return rep;
}

struct AggregateMetrics {
  MetricsReport mean;
  MetricsReport stddev;  // population standard deviation
  std::size_t groups = 0;
};

/// Mean and population standard deviation of P/R/F1 across group runs.
inline AggregateMetrics aggregate_groups(const std::vector<MetricsReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("aggregate_groups: no reports");
  AggregateMetrics agg;
  agg.groups = reports.size();
  const double n = static_cast<double>(reports.size());
  auto mean_of = [&](auto field) {
    double total = 0.0;
    for (const auto& r : reports) total += r.*field;
    return total / n;
  };
  auto std_of = [&](auto field, double mu) {
    double total = 0.0;
    for (const auto& r : reports) {
      const double d = r.*field - mu;
      total += d * d;
    }
    return std::sqrt(total / n);
  };
  agg.mean.precision = mean_of(&MetricsReport::precision);
  agg.mean.recall = mean_of(&MetricsReport::recall);
  agg.mean.f1 = mean_of(&MetricsReport::f1);
  agg.stddev.precision = std_of(&MetricsReport::precision, agg.mean.precision);
  agg.stddev.recall = std_of(&MetricsReport::recall, agg.mean.recall);
  agg.stddev.f1 = std_of(&MetricsReport::f1, agg.mean.f1);
  return agg;
}

}  // namespace seefew

#endif  // SEEFEW_INFERENCE_HPP_
