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
#ifndef SEEFEW_MODEL_HPP_
#define SEEFEW_MODEL_HPP_

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seefew/corpus.hpp"
#include "seefew/encoder.hpp"
#include "seefew/entailing.hpp"
#include "seefew/expanding.hpp"
#include "seefew/inference.hpp"
#include "seefew/inventory.hpp"
#include "seefew/seeding.hpp"
#include "seefew/span.hpp"

namespace seefew {

struct PipelineOptions {
  double alpha = 0.5;
  int lambda = 5;
  double gamma = 2.0;
  int entail_chunk = 16;
  double head_dropout = 0.5;
  // ablation switches
  bool no_seeding = false;       // every n-gram becomes a seed
  bool no_expanding = false;     // seeds pass through as candidates
  bool multiclass_head = false;  // v-way classifier instead of entailment
  SeedMetric seed_metric = SeedMetric::kIoF;
};

/// Per-sentence losses built inside one graph, plus pipeline diagnostics.
struct StepLosses {
  nn::Var seed_loss;
  nn::Var expansion_loss;
  nn::Var entail_loss;
  std::size_t seed_count = 0;
  std::size_t candidate_count = 0;
  std::size_t pair_count = 0;
  bool offsets_clipped = false;  // a gold offset exceeded the lambda range
};

struct SentencePrediction {
  std::string sentence_id;
  std::vector<Span> ngrams;
  std::vector<Span> seeds;
  CandidateSet candidates;
  std::vector<std::vector<double>> type_scores;  // per candidate, v columns
  std::vector<ScoredPrediction> entities;
};

/// The full pipeline: one shared text encoder feeding the seed, expand and
/// entail heads. Heads are constructed around the encoder instance, so all
/// three train over the same representation.
class SeeFewModel {
 public:
  SeeFewModel(std::shared_ptr<TextEncoder> encoder, TypeInventory inventory,
              PipelineOptions options, std::uint64_t init_seed = 7)
      : encoder_(std::move(encoder)),
        inventory_(std::move(inventory)),
        opts_(options) {
    if (!encoder_) throw std::invalid_argument("model needs an encoder");
    nn::Rng rng(init_seed);
    const int d = encoder_->hidden_dim();
    seed_head_ = SeedHead(d, opts_.head_dropout, rng);
    expand_head_ = ExpandHead(d, opts_.head_dropout, rng);
    entail_head_ = EntailHead(d, opts_.head_dropout, rng);
    if (opts_.multiclass_head) {
      multiclass_ = nn::Mlp("multiclass", 2 * d, d, inventory_.v(), rng);
    }
  }

  TextEncoder& encoder() { return *encoder_; }
  const TypeInventory& inventory() const { return inventory_; }
  const PipelineOptions& options() const { return opts_; }
  SeedHead& seed_head() { return seed_head_; }
  ExpandHead& expand_head() { return expand_head_; }
  EntailHead& entail_head() { return entail_head_; }

  std::vector<nn::Param*> parameters() {
    std::vector<nn::Param*> params;
    encoder_->collect(params);
    seed_head_.collect(params);
    expand_head_.collect(params);
    entail_head_.collect(params);
    if (opts_.multiclass_head) multiclass_->collect(params);
    return params;
  }

  /// Builds the three training losses for one sentence in graph g.
  StepLosses train_losses(nn::Graph& g, const Sentence& sentence, nn::Rng& rng) {
    const bool training = true;
    auto enc = encoder_->encode_sentence_vars(g, sentence.tokens, training, rng);
    const int n = enc.word_count;
    const auto entities = entities_within(sentence, n);
    const auto ngrams = enumerate_ngrams(n);
    const ExpansionConfig exp_cfg(opts_.lambda);

    StepLosses out;

    // Seeding: every n-gram regresses toward its gold overlap score.
    nn::Var scores = seed_head_.scores_var(g, enc.word_reps, enc.summary, ngrams,
                                           training, rng);
    nn::Mat seed_target(static_cast<Eigen::Index>(ngrams.size()), 1);
    for (std::size_t i = 0; i < ngrams.size(); ++i) {
      seed_target(static_cast<Eigen::Index>(i), 0) =
          gold_seed_score(ngrams[i], entities, opts_.seed_metric);
    }
    out.seed_loss = g.smooth_l1_sum(scores, seed_target);

    // Expanding: targets exist for every n-gram overlapping an entity,
    // regardless of the current seed selection.
    std::vector<Span> target_spans;
    std::vector<OffsetPair> target_offsets;
    for (const auto& s : ngrams) {
      if (auto o = gold_offsets(s, entities, exp_cfg)) {
        const auto t = expansion_target(s, entities);
        out.offsets_clipped |= t->span.l - s.l != static_cast<int>(o->o_l) ||
                               t->span.r - s.r != static_cast<int>(o->o_r);
        target_spans.push_back(s);
        target_offsets.push_back(*o);
      }
    }
    if (!opts_.no_expanding && !target_spans.empty()) {
      nn::Var pred = expand_head_.offsets_var(g, enc.word_reps, target_spans,
                                              exp_cfg, n, training, rng);
      nn::Mat gold(static_cast<Eigen::Index>(target_offsets.size()), 2);
      for (std::size_t i = 0; i < target_offsets.size(); ++i) {
        gold(static_cast<Eigen::Index>(i), 0) = target_offsets[i].o_l;
        gold(static_cast<Eigen::Index>(i), 1) = target_offsets[i].o_r;
      }
      out.expansion_loss = g.smooth_l1_sum(pred, gold);
    } else {
      out.expansion_loss = g.constant(nn::Mat::Zero(1, 1));
    }

    // Pipeline under current weights, then gold augmentation.
    const auto seeds = pick_seeds(ngrams, scores.value());
    out.seed_count = seeds.size();
    CandidateSet candidates =
        make_candidates(g, enc, seeds, exp_cfg, n, training, rng);
    out.candidate_count = candidates.spans.size();

    if (opts_.multiclass_head) {
      out.entail_loss =
          multiclass_loss(g, enc, candidates, entities, n, training, rng);
      out.pair_count = candidates.spans.size() + entities.size();
      return out;
    }

    Sentence clipped = sentence;
    clipped.tokens.resize(static_cast<std::size_t>(n));
    const auto pairs = build_pairs(clipped, candidates, inventory_, entities,
                                   /*training=*/true);
    out.pair_count = pairs.size();
    if (pairs.empty()) {
      out.entail_loss = g.constant(nn::Mat::Zero(1, 1));
      return out;
    }
    std::vector<nn::Var> pair_losses;
    pair_losses.reserve(pairs.size());
    const std::size_t chunk = static_cast<std::size_t>(opts_.entail_chunk);
    for (std::size_t base = 0; base < pairs.size(); base += chunk) {
      const std::size_t end = std::min(pairs.size(), base + chunk);
      for (std::size_t i = base; i < end; ++i) {
        nn::Var summary = encoder_->encode_pair_vars(
            g, pairs[i].premise_tokens, pairs[i].hypothesis_tokens, training, rng);
        nn::Var probs = entail_head_.probs_var(g, summary, training, rng);
        nn::Var p = g.clamp(g.pick(probs, 0, 0), kProbEpsilon, 1.0 - kProbEpsilon);
        pair_losses.push_back(g.focal(p, *pairs[i].label, opts_.gamma));
      }
    }
    out.entail_loss = g.sum(pair_losses);
    return out;
  }

  /// Runs the inference pipeline on one sentence.
  SentencePrediction predict(const Sentence& sentence) {
    nn::Graph g(/*track_gradients=*/false);
    nn::Rng rng(0);
    const bool training = false;
    auto enc = encoder_->encode_sentence_vars(g, sentence.tokens, training, rng);
    const int n = enc.word_count;
    const ExpansionConfig exp_cfg(opts_.lambda);

    SentencePrediction out;
    out.sentence_id = sentence.id;
    out.ngrams = enumerate_ngrams(n);

    nn::Var scores = seed_head_.scores_var(g, enc.word_reps, enc.summary,
                                           out.ngrams, training, rng);
    out.seeds = pick_seeds(out.ngrams, scores.value());
    out.candidates = make_candidates(g, enc, out.seeds, exp_cfg, n, training, rng);
    if (out.candidates.spans.empty()) return out;

    if (opts_.multiclass_head) {
      out.type_scores = multiclass_scores(g, enc, out.candidates, training, rng);
    } else {
      Sentence clipped = sentence;
      clipped.tokens.resize(static_cast<std::size_t>(n));
      const auto pairs =
          build_pairs(clipped, out.candidates, inventory_, {}, /*training=*/false);
      const auto probs =
          entail_probs(pairs, *encoder_, entail_head_, opts_.entail_chunk);
      const auto v = static_cast<std::size_t>(inventory_.v());
      out.type_scores.resize(out.candidates.spans.size());
      for (std::size_t c = 0; c < out.candidates.spans.size(); ++c) {
        out.type_scores[c].assign(probs.begin() + static_cast<std::ptrdiff_t>(c * v),
                                  probs.begin() + static_cast<std::ptrdiff_t>((c + 1) * v));
      }
    }
    out.entities = decode(out.candidates.spans, out.type_scores, inventory_);
    return out;
  }

 private:
  static std::vector<Entity> entities_within(const Sentence& sentence, int n) {
    std::vector<Entity> out;
    for (const auto& e : sentence.entities) {
      if (e.span.r <= n) out.push_back(e);
    }
    return out;
  }

  std::vector<Span> pick_seeds(const std::vector<Span>& ngrams,
                               const nn::Mat& score_col) const {
    if (opts_.no_seeding) return ngrams;
    std::vector<double> scores(ngrams.size());
    for (std::size_t i = 0; i < ngrams.size(); ++i) {
      scores[i] = score_col(static_cast<Eigen::Index>(i), 0);
    }
    return select_seeds(ngrams, scores, opts_.alpha);
  }

  CandidateSet make_candidates(nn::Graph& g, const SentenceEncoding& enc,
                               const std::vector<Span>& seeds,
                               const ExpansionConfig& exp_cfg, int n,
                               bool training, nn::Rng& rng) {
    CandidateSet out;
    if (seeds.empty()) return out;
    if (opts_.no_expanding) {
      for (const auto& s : seeds) {
        out.spans.push_back(s);
        out.provenance.push_back({s, OffsetPair{}});
      }
      return out;
    }
    nn::Var pred =
        expand_head_.offsets_var(g, enc.word_reps, seeds, exp_cfg, n, training, rng);
    std::vector<OffsetPair> offsets(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      offsets[i] = {pred.value()(idx, 0), pred.value()(idx, 1)};
    }
    return expand_to_candidates(seeds, offsets, n);
  }

  /// Ablation path: v-way focal classification of candidate representations.
  nn::Var multiclass_loss(nn::Graph& g, const SentenceEncoding& enc,
                          const CandidateSet& candidates,
                          const std::vector<Entity>& entities, int n, bool training,
                          nn::Rng& rng) {
    std::vector<Span> spans = candidates.spans;
    for (const auto& e : entities) {
      bool present = false;
      for (const auto& c : spans) present |= c == e.span;
      if (!present) spans.push_back(e.span);
    }
    (void)n;
    if (spans.empty()) return g.constant(nn::Mat::Zero(1, 1));
    std::vector<nn::Var> losses;
    losses.reserve(spans.size());
    for (const auto& span : spans) {
      int label = inventory_.none_index();
      for (const auto& e : entities) {
        if (e.span == span) label = inventory_.index_of(e.type_name);
      }
      nn::Var probs = multiclass_probs_var(g, enc, span, training, rng);
      nn::Var p = g.clamp(g.pick(probs, 0, label), kProbEpsilon, 1.0 - kProbEpsilon);
      losses.push_back(g.focal(p, EntailLabel::kEntail, opts_.gamma));
    }
    return g.sum(losses);
  }

  std::vector<std::vector<double>> multiclass_scores(nn::Graph& g,
                                                     const SentenceEncoding& enc,
                                                     const CandidateSet& candidates,
                                                     bool training, nn::Rng& rng) {
    std::vector<std::vector<double>> out;
    out.reserve(candidates.spans.size());
    for (const auto& span : candidates.spans) {
      nn::Var probs = multiclass_probs_var(g, enc, span, training, rng);
      std::vector<double> row(static_cast<std::size_t>(inventory_.v()));
      for (int t = 0; t < inventory_.v(); ++t) row[static_cast<std::size_t>(t)] =
          probs.value()(0, t);
      out.push_back(std::move(row));
    }
    return out;
  }

  nn::Var multiclass_probs_var(nn::Graph& g, const SentenceEncoding& enc,
                               const Span& span, bool training, nn::Rng& rng) {
    nn::Var pooled = g.rows_mean(enc.word_reps, span.l - 1, span.r - 1);
    nn::Var feats = g.dropout(g.concat_cols(pooled, enc.summary),
                              opts_.head_dropout, rng, training);
    return g.softmax_rows((*multiclass_)(g, feats));
  }

  std::shared_ptr<TextEncoder> encoder_;
  TypeInventory inventory_;
  PipelineOptions opts_;
  SeedHead seed_head_;
  ExpandHead expand_head_;
  EntailHead entail_head_;
  std::optional<nn::Mlp> multiclass_;
};

}  // namespace seefew

#endif  // SEEFEW_MODEL_HPP_
