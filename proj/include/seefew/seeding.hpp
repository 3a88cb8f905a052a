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
#ifndef SEEFEW_SEEDING_HPP_
#define SEEFEW_SEEDING_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "seefew/encoder.hpp"
#include "seefew/nn/layers.hpp"
#include "seefew/span.hpp"

namespace seefew {

/// Scores every unigram and bigram with sigmoid(MLP(concat(span mean-pool,
/// sentence summary))). Scores regress toward the span's IoF with its closest
/// entity; spans above the threshold become seeds.
class SeedHead {
 public:
  SeedHead() = default;
  SeedHead(int hidden_dim, double dropout_rate, nn::Rng& rng)
      : mlp_("seed", 2 * hidden_dim, hidden_dim, 1, rng), dropout_(dropout_rate) {}

  /// Column of scores (one per span), in (0,1).
  nn::Var scores_var(nn::Graph& g, nn::Var word_reps, nn::Var summary,
                     const std::vector<Span>& spans, bool training, nn::Rng& rng) {
    if (spans.empty()) throw std::invalid_argument("seed scores: no spans");
    std::vector<nn::Var> rows;
    rows.reserve(spans.size());
    for (const auto& s : spans) {
      nn::Var pooled = g.rows_mean(word_reps, s.l - 1, s.r - 1);
      rows.push_back(g.concat_cols(pooled, summary));
    }
    nn::Var feats = g.dropout(g.stack_rows(rows), dropout_, rng, training);
    return g.sigmoid(mlp_(g, feats));
  }

  void collect(std::vector<nn::Param*>& params) { mlp_.collect(params); }

 private:
  nn::Mlp mlp_;
  double dropout_ = 0.5;
};

/// One score per n-gram of the encoded sentence, aligned with
/// enumerate_ngrams order.
inline std::vector<double> seed_scores(SeedHead& head, const EncodedSentence& enc) {
  nn::Graph g(/*track_gradients=*/false);
  nn::Rng rng(0);
  const int n = static_cast<int>(enc.token_reps.rows());
  const auto spans = enumerate_ngrams(n);
  nn::Var reps = g.constant(enc.token_reps);
  nn::Var summary = g.constant(enc.summary);
  const nn::Var scores =
      head.scores_var(g, reps, summary, spans, /*training=*/false, rng);
  std::vector<double> out(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    out[i] = scores.value()(static_cast<Eigen::Index>(i), 0);
  }
  return out;
}

/// Spans whose score is strictly above alpha, original order preserved.
inline std::vector<Span> select_seeds(const std::vector<Span>& spans,
                                      const std::vector<double>& scores,
                                      double alpha) {
  if (spans.size() != scores.size()) {
    throw std::invalid_argument("select_seeds: span/score length mismatch");
  }
  std::vector<Span> out;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (scores[i] > alpha) out.push_back(spans[i]);
  }
  return out;
}

/// Gold seed scores for all n-grams of a sentence, in enumerate_ngrams order.
inline std::vector<double> gold_seed_scores(int n, const std::vector<Entity>& entities,
                                            SeedMetric metric = SeedMetric::kIoF) {
  const auto spans = enumerate_ngrams(n);
  std::vector<double> out(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    out[i] = gold_seed_score(spans[i], entities, metric);
  }
  return out;
}

}  // namespace seefew

#endif  // SEEFEW_SEEDING_HPP_
