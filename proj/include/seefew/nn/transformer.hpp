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
#ifndef SEEFEW_NN_TRANSFORMER_HPP_
#define SEEFEW_NN_TRANSFORMER_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "seefew/nn/autograd.hpp"
#include "seefew/nn/layers.hpp"

namespace seefew::nn {

struct TransformerConfig {
  int vocab_size = 0;
  int hidden = 768;
  int layers = 12;
  int heads = 12;
  int ffn = 3072;
  int max_positions = 512;
  int type_vocab = 2;
  double dropout = 0.1;
  double ln_eps = 1e-12;
};

/// Post-norm transformer encoder (BERT layout): summed word/position/segment
/// embeddings, then L blocks of multi-head self-attention and a GELU feed
/// forward, each followed by residual + layer norm. Sequences are processed
/// one at a time, so no attention mask is needed.
class TransformerEncoder {
 public:
  TransformerEncoder() = default;

  TransformerEncoder(const TransformerConfig& cfg, Rng& rng) : cfg_(cfg) {
    if (cfg.hidden % cfg.heads != 0) {
      throw std::invalid_argument("hidden size must divide evenly into heads");
    }
    word_emb_ = Param("emb.word", normal_init(rng, cfg.vocab_size, cfg.hidden));
    pos_emb_ = Param("emb.pos", normal_init(rng, cfg.max_positions, cfg.hidden));
    type_emb_ = Param("emb.type", normal_init(rng, cfg.type_vocab, cfg.hidden));
    emb_norm_ = LayerNorm("emb.norm", cfg.hidden, cfg.ln_eps);
    blocks_.reserve(static_cast<std::size_t>(cfg.layers));
    for (int i = 0; i < cfg.layers; ++i) {
      blocks_.emplace_back("layer" + std::to_string(i), cfg, rng);
    }
  }

  const TransformerConfig& config() const { return cfg_; }

  /// Hidden states for one sequence of token ids, shape len x hidden.
  Var forward(Graph& g, const std::vector<int>& ids,
              const std::vector<int>& type_ids, bool training, Rng& rng) {
    if (ids.empty()) throw std::invalid_argument("transformer: empty sequence");
    if (ids.size() != type_ids.size()) {
      throw std::invalid_argument("transformer: ids/type_ids length mismatch");
    }
    if (static_cast<int>(ids.size()) > cfg_.max_positions) {
      throw std::invalid_argument("transformer: sequence exceeds max positions");
    }
    std::vector<int> positions(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) positions[i] = static_cast<int>(i);

    Var h = g.add(g.add(g.gather_rows(g.param(word_emb_), ids),
                        g.gather_rows(g.param(pos_emb_), positions)),
                  g.gather_rows(g.param(type_emb_), type_ids));
    h = emb_norm_(g, h);
    h = g.dropout(h, cfg_.dropout, rng, training);
    for (auto& block : blocks_) {
      h = block.forward(g, h, cfg_, training, rng);
    }
    return h;
  }

  void collect(std::vector<Param*>& params) {
    params.push_back(&word_emb_);
    params.push_back(&pos_emb_);
    params.push_back(&type_emb_);
    emb_norm_.collect(params);
    for (auto& block : blocks_) block.collect(params);
  }

  struct Block {
    Linear q, k, v, attn_out;
    LayerNorm attn_norm;
    Linear ffn_in, ffn_out;
    LayerNorm ffn_norm;

    Block(const std::string& name, const TransformerConfig& cfg, Rng& rng)
        : q(name + ".attn.q", cfg.hidden, cfg.hidden, rng),
          k(name + ".attn.k", cfg.hidden, cfg.hidden, rng),
          v(name + ".attn.v", cfg.hidden, cfg.hidden, rng),
          attn_out(name + ".attn.out", cfg.hidden, cfg.hidden, rng),
          attn_norm(name + ".attn.norm", cfg.hidden, cfg.ln_eps),
          ffn_in(name + ".ffn.in", cfg.hidden, cfg.ffn, rng),
          ffn_out(name + ".ffn.out", cfg.ffn, cfg.hidden, rng),
          ffn_norm(name + ".ffn.norm", cfg.hidden, cfg.ln_eps) {}

    Var forward(Graph& g, Var h, const TransformerConfig& cfg, bool training,
                Rng& rng) {
      const Eigen::Index dk = cfg.hidden / cfg.heads;
      const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(dk));
      Var qs = q(g, h), ks = k(g, h), vs = v(g, h);
      Var merged{};
      for (int head = 0; head < cfg.heads; ++head) {
        const Eigen::Index c0 = head * dk;
        Var qh = g.cols(qs, c0, dk);
        Var kh = g.cols(ks, c0, dk);
        Var vh = g.cols(vs, c0, dk);
        Var scores = g.scale(g.matmul(qh, g.transpose(kh)), inv_sqrt_dk);
        Var ctx = g.matmul(g.softmax_rows(scores), vh);
        merged = head == 0 ? ctx : g.concat_cols(merged, ctx);
      }
      Var attn = g.dropout(attn_out(g, merged), cfg.dropout, rng, training);
      h = attn_norm(g, g.add(h, attn));
      Var ff = ffn_out(g, g.gelu(ffn_in(g, h)));
      ff = g.dropout(ff, cfg.dropout, rng, training);
      return ffn_norm(g, g.add(h, ff));
    }

    void collect(std::vector<Param*>& params) {
      q.collect(params);
      k.collect(params);
      v.collect(params);
      attn_out.collect(params);
      attn_norm.collect(params);
      ffn_in.collect(params);
      ffn_out.collect(params);
      ffn_norm.collect(params);
    }
  };

 private:
  TransformerConfig cfg_;
  Param word_emb_, pos_emb_, type_emb_;
  LayerNorm emb_norm_;
  std::vector<Block> blocks_;
};

}  // namespace seefew::nn

#endif  // SEEFEW_NN_TRANSFORMER_HPP_
