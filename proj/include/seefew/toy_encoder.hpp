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
#ifndef SEEFEW_TOY_ENCODER_HPP_
#define SEEFEW_TOY_ENCODER_HPP_

#include <iostream>
#include <string>
#include <vector>

#include "seefew/encoder.hpp"
#include "seefew/nn/transformer.hpp"
#include "seefew/text.hpp"

namespace seefew {

/// Small trainable transformer with a hash-based vocabulary: words map onto a
/// fixed-size embedding table by FNV-1a hash, so no tokenizer assets are
/// needed. Used for desk-scale experiments and tests where real gradient flow
/// through all heads matters more than pretrained knowledge.
class ToyEncoder : public TextEncoder {
 public:
  explicit ToyEncoder(const EncoderConfig& cfg) : cfg_(cfg) {
    nn::TransformerConfig tc;
    tc.vocab_size = cfg.toy_vocab_hash;
    tc.hidden = cfg.toy_hidden;
    tc.layers = cfg.toy_layers;
    tc.heads = cfg.toy_heads;
    tc.ffn = cfg.toy_ffn;
    tc.max_positions = cfg.max_length;
    tc.dropout = cfg.dropout;
    nn::Rng init_rng(cfg.toy_init_seed);
    stack_ = nn::TransformerEncoder(tc, init_rng);
  }

  int hidden_dim() const override { return cfg_.toy_hidden; }

  SentenceEncoding encode_sentence_vars(nn::Graph& g,
                                        const std::vector<std::string>& words,
                                        bool training, nn::Rng& rng) override {
    if (words.empty()) throw std::invalid_argument("encode_sentence: empty input");
    const int capacity = cfg_.max_length - 2;  // [CLS] ... [SEP]
    int n = static_cast<int>(words.size());
    if (n > capacity) {
      std::cerr << "seefew: warning: sentence of " << n << " words truncated to "
                << capacity << "\n";
      n = capacity;
    }
    std::vector<int> ids;
    ids.reserve(static_cast<std::size_t>(n) + 2);
    ids.push_back(kClsId);
    for (int i = 0; i < n; ++i) ids.push_back(word_id(words[static_cast<std::size_t>(i)]));
    ids.push_back(kSepId);
    const std::vector<int> types(ids.size(), 0);

    nn::Var h = stack_.forward(g, ids, types, training, rng);
    SentenceEncoding enc;
    enc.word_reps = g.rows(h, 1, n);
    enc.summary = g.row(h, 0);
    enc.word_count = n;
    return enc;
  }

  nn::Var encode_pair_vars(nn::Graph& g, const std::vector<std::string>& premise,
                           const std::vector<std::string>& hypothesis,
                           bool training, nn::Rng& rng) override {
    if (premise.empty() || hypothesis.empty()) {
      throw std::invalid_argument("encode_pair: empty premise or hypothesis");
    }
    // [CLS] premise [SEP] hypothesis [SEP]; premise truncated from the right.
    const int budget = cfg_.max_length - 3 - static_cast<int>(hypothesis.size());
    if (budget < 1) {
      throw std::invalid_argument("encode_pair: hypothesis exceeds max length");
    }
    const int np = std::min<int>(static_cast<int>(premise.size()), budget);

    std::vector<int> ids;
    std::vector<int> types;
    ids.push_back(kClsId);
    types.push_back(0);
    for (int i = 0; i < np; ++i) {
      ids.push_back(word_id(premise[static_cast<std::size_t>(i)]));
      types.push_back(0);
    }
    ids.push_back(kSepId);
    types.push_back(0);
    for (const auto& w : hypothesis) {
      ids.push_back(word_id(w));
      types.push_back(1);
    }
    ids.push_back(kSepId);
    types.push_back(1);

    nn::Var h = stack_.forward(g, ids, types, training, rng);
    return g.row(h, 0);
  }

  void collect(std::vector<nn::Param*>& params) override { stack_.collect(params); }

  int word_id(const std::string& word) const {
    const int buckets = cfg_.toy_vocab_hash - kReservedIds;
    return kReservedIds + static_cast<int>(fnv1a_hash(word) % buckets);
  }

 private:
  static constexpr int kClsId = 0;
  static constexpr int kSepId = 1;
  static constexpr int kReservedIds = 2;

  EncoderConfig cfg_;
  nn::TransformerEncoder stack_;
};

}  // namespace seefew

#endif  // SEEFEW_TOY_ENCODER_HPP_
