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
#ifndef SEEFEW_ENTAILING_HPP_
#define SEEFEW_ENTAILING_HPP_

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seefew/corpus.hpp"
#include "seefew/encoder.hpp"
#include "seefew/expanding.hpp"
#include "seefew/inventory.hpp"
#include "seefew/losses.hpp"
#include "seefew/nn/layers.hpp"
#include "seefew/text.hpp"

namespace seefew {

/// One textual-entailment instance: the sentence as premise, a rendered type
/// hypothesis, and (during training) the gold label.
struct EntailmentPair {
  std::string premise_text;
  std::vector<std::string> premise_tokens;
  std::string hypothesis_text;
  std::vector<std::string> hypothesis_tokens;
  Span candidate;
  std::string type_name;  // TypeInventory::kNoneName for the non-entity type
  std::optional<EntailLabel> label;
};

namespace detail {

inline std::vector<std::string> hypothesis_tokens(const std::string& text,
                                                  const TypeInventory& inventory) {
  if (inventory.chinese()) return utf8_chars(text);
  std::vector<std::string> tokens;
  std::istringstream ss(text);
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace detail

/// Builds |candidates| x v pairs, candidate-major with types in inventory
/// order and the non-entity type last. During training, gold entities missing
/// from the candidates are appended first, and labels follow the exact
/// span+type rule: a gold span entails its own type only; any other span
/// entails only the non-entity type.
inline std::vector<EntailmentPair> build_pairs(const Sentence& sentence,
                                               const CandidateSet& candidates,
                                               const TypeInventory& inventory,
                                               const std::vector<Entity>& gold_entities,
                                               bool training) {
  std::vector<Span> spans = candidates.spans;
  if (training) {
    for (const auto& e : gold_entities) {
      bool present = false;
      for (const auto& c : spans) present |= c == e.span;
      if (!present) spans.push_back(e.span);
    }
  }

  const std::string sep = inventory.separator();
  const std::string premise = sentence.text(sep);
  std::vector<EntailmentPair> pairs;
  pairs.reserve(spans.size() * static_cast<std::size_t>(inventory.v()));

  for (const auto& span : spans) {
    const std::string surface = sentence.span_text(span, sep);
    const Entity* gold = nullptr;
    for (const auto& e : gold_entities) {
      if (e.span == span) gold = &e;
    }
    for (int t = 0; t < inventory.v(); ++t) {
      EntailmentPair pair;
      pair.premise_text = premise;
      pair.premise_tokens = sentence.tokens;
      pair.type_name = inventory.name_at(t);
      pair.hypothesis_text = inventory.hypothesis(surface, pair.type_name);
      pair.hypothesis_tokens = detail::hypothesis_tokens(pair.hypothesis_text, inventory);
      pair.candidate = span;
      if (training) {
        const bool entails = gold ? inventory.index_of(gold->type_name) == t
                                  : t == inventory.none_index();
        pair.label = entails ? EntailLabel::kEntail : EntailLabel::kNotEntail;
      }
      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

/// Binary entailment classifier on the pair summary vector.
class EntailHead {
 public:
  EntailHead() = default;
  EntailHead(int hidden_dim, double dropout_rate, nn::Rng& rng)
      : mlp_("entail", hidden_dim, hidden_dim, 2, rng), dropout_(dropout_rate) {}

  /// 1 x 2 softmax distribution; column 0 is the entail probability.
  nn::Var probs_var(nn::Graph& g, nn::Var pair_summary, bool training,
                    nn::Rng& rng) {
    nn::Var x = g.dropout(pair_summary, dropout_, rng, training);
    return g.softmax_rows(mlp_(g, x));
  }

  void collect(std::vector<nn::Param*>& params) { mlp_.collect(params); }

 private:
  nn::Mlp mlp_;
  double dropout_ = 0.5;
};

/// Entail probability per pair, processed in chunks of `chunk` pairs.
inline std::vector<double> entail_probs(const std::vector<EntailmentPair>& pairs,
                                        TextEncoder& encoder, EntailHead& head,
                                        int chunk = 16) {
  if (chunk < 1) throw std::invalid_argument("entail_probs: chunk must be >= 1");
  std::vector<double> out;
  out.reserve(pairs.size());
  nn::Rng rng(0);
  for (std::size_t base = 0; base < pairs.size();
       base += static_cast<std::size_t>(chunk)) {
    const std::size_t end =
        std::min(pairs.size(), base + static_cast<std::size_t>(chunk));
    nn::Graph g(/*track_gradients=*/false);
    for (std::size_t i = base; i < end; ++i) {
      nn::Var summary = encoder.encode_pair_vars(
          g, pairs[i].premise_tokens, pairs[i].hypothesis_tokens,
          /*training=*/false, rng);
      nn::Var probs = head.probs_var(g, summary, /*training=*/false, rng);
      out.push_back(probs.value()(0, 0));
    }
  }
  return out;
}

}  // namespace seefew

#endif  // SEEFEW_ENTAILING_HPP_
