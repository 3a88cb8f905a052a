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
#ifndef SEEFEW_ENCODER_HPP_
#define SEEFEW_ENCODER_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "seefew/nn/autograd.hpp"
#include "seefew/span.hpp"

namespace seefew {

struct EncoderConfig {
  std::string backend = "toy";  // "toy" or "pretrained"
  std::string model_name;       // checkpoint directory (pretrained only)
  int max_length = 512;
  double dropout = 0.1;
  // toy backend
  int toy_vocab_hash = 4096;
  int toy_hidden = 32;
  int toy_layers = 2;
  int toy_heads = 4;
  int toy_ffn = 64;
  std::uint64_t toy_init_seed = 1;
};

/// Word-level sentence representation: one row per input word (subword
/// vectors mean-pooled per word) plus the sentence summary vector.
struct EncodedSentence {
  nn::Mat token_reps;          // n x d
  Eigen::RowVectorXd summary;  // 1 x d
};

/// Graph-side view of the same encoding, used while recording gradients.
struct SentenceEncoding {
  nn::Var word_reps;  // n x d
  nn::Var summary;    // 1 x d
  int word_count = 0;
};

/// Arithmetic mean of the rows covered by a 1-indexed inclusive span.
inline Eigen::RowVectorXd mean_pool(const EncodedSentence& enc, const Span& s) {
  if (s.r > enc.token_reps.rows()) {
    throw std::out_of_range("mean_pool: span exceeds encoded sentence");
  }
  return enc.token_reps.middleRows(s.l - 1, s.length()).colwise().mean();
}

/// Contextual text encoder shared by the seed, expand and entail heads. One
/// instance serves all three so the heads learn over one representation.
class TextEncoder {
 public:
  virtual ~TextEncoder() = default;

  virtual int hidden_dim() const = 0;

  virtual SentenceEncoding encode_sentence_vars(nn::Graph& g,
                                                const std::vector<std::string>& words,
                                                bool training, nn::Rng& rng) = 0;

  /// Summary vector of the pair "premise [SEP] hypothesis" in the encoder's
  /// native pair format. Over-length pairs lose premise tokens from the
  /// right; the hypothesis always survives intact.
  virtual nn::Var encode_pair_vars(nn::Graph& g,
                                   const std::vector<std::string>& premise,
                                   const std::vector<std::string>& hypothesis,
                                   bool training, nn::Rng& rng) = 0;

  virtual void collect(std::vector<nn::Param*>& params) = 0;

  EncodedSentence encode_sentence(const std::vector<std::string>& words) {
    nn::Graph g(/*track_gradients=*/false);
    nn::Rng rng(0);
    const auto enc = encode_sentence_vars(g, words, /*training=*/false, rng);
    return {enc.word_reps.value(), enc.summary.value().row(0)};
  }

  Eigen::RowVectorXd encode_pair(const std::vector<std::string>& premise,
                                 const std::vector<std::string>& hypothesis) {
    nn::Graph g(/*track_gradients=*/false);
    nn::Rng rng(0);
    return encode_pair_vars(g, premise, hypothesis, /*training=*/false, rng)
        .value()
        .row(0);
  }

  std::vector<nn::Param*> parameters() {
    std::vector<nn::Param*> params;
    collect(params);
    return params;
  }
};

}  // namespace seefew

#endif  // SEEFEW_ENCODER_HPP_
