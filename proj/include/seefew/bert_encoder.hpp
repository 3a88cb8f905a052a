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
#ifndef SEEFEW_BERT_ENCODER_HPP_
#define SEEFEW_BERT_ENCODER_HPP_

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seefew/encoder.hpp"
#include "seefew/nn/transformer.hpp"
#include "seefew/safetensors.hpp"
#include "seefew/toy_encoder.hpp"
#include "seefew/wordpiece.hpp"

namespace seefew {

/// BERT-style encoder loaded from a published checkpoint directory holding
/// config.json, vocab.txt and model.safetensors. Word-level spans are bridged
/// to subwords by mean-pooling each word's piece representations.
class PretrainedEncoder : public TextEncoder {
 public:
  explicit PretrainedEncoder(const EncoderConfig& cfg)
      : cfg_(cfg), vocab_(load_vocab(cfg.model_name)) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.model_name);

    std::ifstream cfg_in(dir / "config.json");
    if (!cfg_in) {
      throw std::runtime_error("pretrained checkpoint is missing config.json in " +
                               cfg.model_name);
    }
    nlohmann::json jc = nlohmann::json::parse(cfg_in);

    nn::TransformerConfig tc;
    tc.vocab_size = jc.at("vocab_size").get<int>();
    tc.hidden = jc.at("hidden_size").get<int>();
    tc.layers = jc.at("num_hidden_layers").get<int>();
    tc.heads = jc.at("num_attention_heads").get<int>();
    tc.ffn = jc.at("intermediate_size").get<int>();
    tc.max_positions = jc.at("max_position_embeddings").get<int>();
    tc.type_vocab = jc.value("type_vocab_size", 2);
    tc.ln_eps = jc.value("layer_norm_eps", 1e-12);
    tc.dropout = jc.value("hidden_dropout_prob", cfg.dropout);
    tcfg_ = tc;
    max_len_ = std::min(cfg.max_length, tc.max_positions);

    nn::Rng init_rng(0);
    stack_ = nn::TransformerEncoder(tc, init_rng);
    load_weights((dir / "model.safetensors").string());
  }

  int hidden_dim() const override { return tcfg_.hidden; }
  const WordPieceVocab& vocab() const { return vocab_; }

  SentenceEncoding encode_sentence_vars(nn::Graph& g,
                                        const std::vector<std::string>& words,
                                        bool training, nn::Rng& rng) override {
    if (words.empty()) throw std::invalid_argument("encode_sentence: empty input");

    std::vector<int> ids{vocab_.cls_id()};
    std::vector<std::pair<int, int>> ranges;  // piece index range per word
    int kept = 0;
    for (const auto& word : words) {
      const auto pieces = vocab_.word_pieces(word);
      if (static_cast<int>(ids.size() + pieces.size()) > max_len_ - 1) break;
      ranges.emplace_back(static_cast<int>(ids.size()),
                          static_cast<int>(ids.size() + pieces.size() - 1));
      ids.insert(ids.end(), pieces.begin(), pieces.end());
      ++kept;
    }
    if (kept == 0) {
      throw std::invalid_argument("encode_sentence: first word alone exceeds max length");
    }
    if (kept < static_cast<int>(words.size())) {
      std::cerr << "seefew: warning: sentence truncated to " << kept << " of "
                << words.size() << " words\n";
    }
    ids.push_back(vocab_.sep_id());
    const std::vector<int> types(ids.size(), 0);

    nn::Var h = stack_.forward(g, ids, types, training, rng);
    std::vector<nn::Var> word_rows;
    word_rows.reserve(ranges.size());
    for (const auto& [lo, hi] : ranges) {
      word_rows.push_back(g.rows_mean(h, lo, hi));
    }
    SentenceEncoding enc;
    enc.word_reps = g.stack_rows(word_rows);
    enc.summary = g.row(h, 0);
    enc.word_count = kept;
    return enc;
  }

  nn::Var encode_pair_vars(nn::Graph& g, const std::vector<std::string>& premise,
                           const std::vector<std::string>& hypothesis,
                           bool training, nn::Rng& rng) override {
    if (premise.empty() || hypothesis.empty()) {
      throw std::invalid_argument("encode_pair: empty premise or hypothesis");
    }
    std::vector<int> prem_ids;
    for (const auto& w : premise) {
      const auto p = vocab_.word_pieces(w);
      prem_ids.insert(prem_ids.end(), p.begin(), p.end());
    }
    std::vector<int> hyp_ids;
    for (const auto& w : hypothesis) {
      const auto p = vocab_.word_pieces(w);
      hyp_ids.insert(hyp_ids.end(), p.begin(), p.end());
    }
    const int budget = max_len_ - 3 - static_cast<int>(hyp_ids.size());
    if (budget < 1) {
      throw std::invalid_argument("encode_pair: hypothesis exceeds max length");
    }
    if (static_cast<int>(prem_ids.size()) > budget) prem_ids.resize(budget);

    std::vector<int> ids{vocab_.cls_id()};
    std::vector<int> types{0};
    for (int id : prem_ids) {
      ids.push_back(id);
      types.push_back(0);
    }
    ids.push_back(vocab_.sep_id());
    types.push_back(0);
    for (int id : hyp_ids) {
      ids.push_back(id);
      types.push_back(1);
    }
    ids.push_back(vocab_.sep_id());
    types.push_back(1);

    return g.row(stack_.forward(g, ids, types, training, rng), 0);
  }

  /// Piece-level hidden states, for diagnostics and pooling checks.
  nn::Mat raw_hidden_states(const std::vector<int>& ids,
                            const std::vector<int>& types) {
    nn::Graph g(/*track_gradients=*/false);
    nn::Rng rng(0);
    return stack_.forward(g, ids, types, /*training=*/false, rng).value();
  }

  void collect(std::vector<nn::Param*>& params) override { stack_.collect(params); }

 private:
  static WordPieceVocab load_vocab(const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path vocab_path = fs::path(dir) / "vocab.txt";
    bool lower = dir.find("cased") == std::string::npos ||
                 dir.find("uncased") != std::string::npos;
    const fs::path tok_cfg = fs::path(dir) / "tokenizer_config.json";
    if (fs::exists(tok_cfg)) {
      std::ifstream in(tok_cfg);
      const auto j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
      if (!j.is_discarded() && j.contains("do_lower_case")) {
        lower = j["do_lower_case"].get<bool>();
      }
    }
    return WordPieceVocab::load_file(vocab_path.string(), lower);
  }

  void load_weights(const std::string& path) {
    auto tensors = load_safetensors(path);

    // Checkpoints exported with a task head carry a "bert." prefix.
    auto find = [&](const std::string& name) -> const nn::Mat* {
      auto it = tensors.find(name);
      if (it == tensors.end()) it = tensors.find("bert." + name);
      return it == tensors.end() ? nullptr : &it->second;
    };
    auto fetch = [&](const std::string& name) -> const nn::Mat& {
      const nn::Mat* m = find(name);
      if (!m) throw std::runtime_error("checkpoint is missing tensor " + name);
      return *m;
    };
    auto fetch_norm = [&](const std::string& base,
                          const char* modern, const char* legacy) -> const nn::Mat& {
      if (const nn::Mat* m = find(base + "." + modern)) return *m;
      return fetch(base + "." + legacy);
    };

    std::unordered_map<std::string, nn::Param*> by_name;
    for (nn::Param* p : parameters()) by_name[p->name] = p;

    auto assign = [&](const std::string& mine, const nn::Mat& value, bool transpose) {
      const auto it = by_name.find(mine);
      if (it == by_name.end()) throw std::logic_error("unknown parameter " + mine);
      nn::Mat v = transpose ? nn::Mat(value.transpose()) : value;
      if (v.rows() != it->second->value.rows() || v.cols() != it->second->value.cols()) {
        throw std::runtime_error("checkpoint tensor shape mismatch for " + mine);
      }
      it->second->value = std::move(v);
    };

    assign("emb.word", fetch("embeddings.word_embeddings.weight"), false);
    assign("emb.pos", fetch("embeddings.position_embeddings.weight"), false);
    assign("emb.type", fetch("embeddings.token_type_embeddings.weight"), false);
    assign("emb.norm.gain", fetch_norm("embeddings.LayerNorm", "weight", "gamma"), false);
    assign("emb.norm.bias", fetch_norm("embeddings.LayerNorm", "bias", "beta"), false);

    for (int i = 0; i < tcfg_.layers; ++i) {
      const std::string hf = "encoder.layer." + std::to_string(i);
      const std::string mine = "layer" + std::to_string(i);
      const std::pair<std::string, std::string> linears[] = {
          {".attn.q", ".attention.self.query"},
          {".attn.k", ".attention.self.key"},
          {".attn.v", ".attention.self.value"},
          {".attn.out", ".attention.output.dense"},
          {".ffn.in", ".intermediate.dense"},
          {".ffn.out", ".output.dense"},
      };
      for (const auto& [ours, theirs] : linears) {
        assign(mine + ours + ".w", fetch(hf + theirs + ".weight"), true);
        assign(mine + ours + ".b", fetch(hf + theirs + ".bias"), false);
      }
      assign(mine + ".attn.norm.gain",
             fetch_norm(hf + ".attention.output.LayerNorm", "weight", "gamma"), false);
      assign(mine + ".attn.norm.bias",
             fetch_norm(hf + ".attention.output.LayerNorm", "bias", "beta"), false);
      assign(mine + ".ffn.norm.gain",
             fetch_norm(hf + ".output.LayerNorm", "weight", "gamma"), false);
      assign(mine + ".ffn.norm.bias",
             fetch_norm(hf + ".output.LayerNorm", "bias", "beta"), false);
    }
  }

  EncoderConfig cfg_;
  WordPieceVocab vocab_;
  nn::TransformerConfig tcfg_;
  nn::TransformerEncoder stack_;
  int max_len_ = 512;
};

/// Builds the encoder named by the config.
inline std::shared_ptr<TextEncoder> make_encoder(const EncoderConfig& cfg) {
  if (cfg.backend == "toy") return std::make_shared<ToyEncoder>(cfg);
  if (cfg.backend == "pretrained") {
    if (cfg.model_name.empty()) {
      throw std::invalid_argument("pretrained backend requires a model path");
    }
    return std::make_shared<PretrainedEncoder>(cfg);
  }
  throw std::invalid_argument("unknown encoder backend '" + cfg.backend + "'");
}

}  // namespace seefew

#endif  // SEEFEW_BERT_ENCODER_HPP_
