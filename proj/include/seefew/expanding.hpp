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
#ifndef SEEFEW_EXPANDING_HPP_
#define SEEFEW_EXPANDING_HPP_

#include <optional>
#include <stdexcept>
#include <vector>

#include "seefew/encoder.hpp"
#include "seefew/nn/layers.hpp"
#include "seefew/span.hpp"

namespace seefew {

/// Regresses per-seed boundary offsets from concat(seed mean-pool, window
/// mean-pool). The MLP output is mapped through lambda * (2 sigmoid - 1), so
/// both offsets live in (-lambda, lambda).
class ExpandHead {
 public:
  ExpandHead() = default;
  ExpandHead(int hidden_dim, double dropout_rate, nn::Rng& rng)
      : mlp_("expand", 2 * hidden_dim, hidden_dim, 2, rng), dropout_(dropout_rate) {}

  /// m x 2 offsets for m seeds.
  nn::Var offsets_var(nn::Graph& g, nn::Var word_reps, const std::vector<Span>& seeds,
                      const ExpansionConfig& cfg, int n, bool training,
                      nn::Rng& rng) {
    if (seeds.empty()) throw std::invalid_argument("predict_offsets: no seeds");
    std::vector<nn::Var> rows;
    rows.reserve(seeds.size());
    for (const auto& s : seeds) {
      const auto geom = expansion_window(s, cfg, n);
      nn::Var seed_pool = g.rows_mean(word_reps, s.l - 1, s.r - 1);
      nn::Var win_pool =
          g.rows_mean(word_reps, geom.window.l - 1, geom.window.r - 1);
      rows.push_back(g.concat_cols(seed_pool, win_pool));
    }
    nn::Var feats = g.dropout(g.stack_rows(rows), dropout_, rng, training);
    nn::Var squeezed = g.sigmoid(mlp_(g, feats));
    const double lam = static_cast<double>(cfg.lambda);
    nn::Var shift = g.constant(
        nn::Mat::Constant(static_cast<Eigen::Index>(seeds.size()), 2, -lam));
    return g.add(g.scale(squeezed, 2.0 * lam), shift);
  }

  void collect(std::vector<nn::Param*>& params) { mlp_.collect(params); }

 private:
  nn::Mlp mlp_;
  double dropout_ = 0.5;
};

/// Per-seed offsets from an already-encoded sentence.
inline std::vector<OffsetPair> predict_offsets(ExpandHead& head,
                                               const EncodedSentence& enc,
                                               const std::vector<Span>& seeds,
                                               const ExpansionConfig& cfg) {
  if (seeds.empty()) return {};
  nn::Graph g(/*track_gradients=*/false);
  nn::Rng rng(0);
  const int n = static_cast<int>(enc.token_reps.rows());
  nn::Var reps = g.constant(enc.token_reps);
  const nn::Var offsets =
      head.offsets_var(g, reps, seeds, cfg, n, /*training=*/false, rng);
  std::vector<OffsetPair> out(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    out[i] = {offsets.value()(idx, 0), offsets.value()(idx, 1)};
  }
  return out;
}

struct CandidateProvenance {
  Span seed;
  OffsetPair raw_offsets;
};

/// Deduplicated candidate spans plus, per span, the seed they came from.
struct CandidateSet {
  std::vector<Span> spans;
  std::vector<CandidateProvenance> provenance;

  bool contains(const Span& s) const {
    for (const auto& c : spans) {
      if (c == s) return true;
    }
    return false;
  }
};

/// Applies offsets to each seed, discards inverted results, and keeps the
/// first occurrence of every distinct span (seed order).
inline CandidateSet expand_to_candidates(const std::vector<Span>& seeds,
                                         const std::vector<OffsetPair>& offsets,
                                         int n) {
  if (seeds.size() != offsets.size()) {
    throw std::invalid_argument("expand_to_candidates: seed/offset length mismatch");
  }
  CandidateSet out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto span = apply_offsets(seeds[i], offsets[i], n);
    if (!span || out.contains(*span)) continue;
    out.spans.push_back(*span);
    out.provenance.push_back({seeds[i], offsets[i]});
  }
  return out;
}

}  // namespace seefew

#endif  // SEEFEW_EXPANDING_HPP_
