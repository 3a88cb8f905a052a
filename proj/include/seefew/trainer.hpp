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
#ifndef SEEFEW_TRAINER_HPP_
#define SEEFEW_TRAINER_HPP_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "seefew/bert_encoder.hpp"
#include "seefew/io.hpp"
#include "seefew/model.hpp"
#include "seefew/nn/optim.hpp"
#include "seefew/safetensors.hpp"

namespace seefew {

/// Eq-19 combination of the three module losses.
inline double joint_loss(double l_seed, double l_exp, double l_entail,
                         const std::array<double, 3>& betas) {
  return betas[0] * l_seed + betas[1] * l_exp + betas[2] * l_entail;
}

struct EpochStats {
  int epoch = 0;  // 1-based
  double seed_loss = 0.0;
  double expansion_loss = 0.0;
  double entail_loss = 0.0;
  double joint = 0.0;
  MetricsReport validation;
};

struct TrainResult {
  std::vector<EpochStats> history;
  int best_epoch = 0;
  double best_val_f1 = 0.0;
  bool clipped_offsets_seen = false;
};

/// Called after each epoch; return false to stop early (the best checkpoint
/// so far is still restored).
using EpochHook = std::function<bool(const EpochStats&, SeeFewModel&)>;

inline PipelineOptions pipeline_options(const TrainConfig& cfg) {
  PipelineOptions opts;
  opts.alpha = cfg.alpha;
  opts.lambda = cfg.lambda;
  opts.gamma = cfg.gamma;
  opts.entail_chunk = cfg.entail_chunk;
  opts.head_dropout = cfg.dropout;
  opts.no_seeding = cfg.no_seeding;
  opts.no_expanding = cfg.no_expanding;
  opts.multiclass_head = cfg.multiclass_head;
  opts.seed_metric = cfg.seed_metric == "iou" ? SeedMetric::kIoU : SeedMetric::kIoF;
  return opts;
}

inline MetricsReport evaluate_model(SeeFewModel& model,
                                    const std::vector<Sentence>& sentences) {
  std::vector<std::vector<ScoredPrediction>> preds;
  std::vector<std::vector<Entity>> golds;
  preds.reserve(sentences.size());
  golds.reserve(sentences.size());
  for (const auto& s : sentences) {
    preds.push_back(model.predict(s).entities);
    golds.push_back(s.entities);
  }
  return evaluate(preds, golds);
}

/// Joint training: one sentence per step (sentence_batch accumulates), AdamW
/// with linear warmup-decay, validation after every epoch, best-F1 weights
/// restored at the end.
inline TrainResult train(SeeFewModel& model, const FewShotSplit& split,
                         const TrainConfig& cfg, const EpochHook& hook = {}) {
  cfg.validate();
  if (split.train.empty()) throw std::invalid_argument("train: empty training set");

  const auto params = model.parameters();
  nn::AdamW optimizer(cfg.weight_decay);
  nn::Rng rng(cfg.rng_seed);

  const auto steps_per_epoch = static_cast<std::int64_t>(
      (split.train.size() + static_cast<std::size_t>(cfg.sentence_batch) - 1) /
      static_cast<std::size_t>(cfg.sentence_batch));
  const std::int64_t total_steps = steps_per_epoch * cfg.epochs;
  const auto warmup_steps =
      static_cast<std::int64_t>(cfg.warmup_fraction * static_cast<double>(total_steps));

  TrainResult result;
  std::vector<nn::Mat> best_values;
  std::int64_t step = 0;

  std::vector<std::size_t> order(split.train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochStats stats;
    stats.epoch = epoch;

    std::size_t in_batch = 0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const Sentence& sentence = split.train[order[pos]];
      nn::Graph g(/*track_gradients=*/true);
      StepLosses losses = model.train_losses(g, sentence, rng);
      result.clipped_offsets_seen |= losses.offsets_clipped;

      nn::Var joint = g.sum({g.scale(losses.seed_loss, cfg.betas[0]),
                             g.scale(losses.expansion_loss, cfg.betas[1]),
                             g.scale(losses.entail_loss, cfg.betas[2])});
      if (!std::isfinite(joint.scalar())) {
        throw std::runtime_error("training diverged: non-finite loss at epoch " +
                                 std::to_string(epoch) + ", sentence " + sentence.id);
      }
      stats.seed_loss += losses.seed_loss.scalar();
      stats.expansion_loss += losses.expansion_loss.scalar();
      stats.entail_loss += losses.entail_loss.scalar();
      stats.joint += joint.scalar();

      g.backward(joint);
      if (++in_batch == static_cast<std::size_t>(cfg.sentence_batch) ||
          pos + 1 == order.size()) {
        optimizer.step(params, nn::lr_at(step, total_steps, warmup_steps,
                                         cfg.learning_rate));
        ++step;
        in_batch = 0;
      }
    }
    const double denom = static_cast<double>(split.train.size());
    stats.seed_loss /= denom;
    stats.expansion_loss /= denom;
    stats.entail_loss /= denom;
    stats.joint /= denom;

    if (!split.valid.empty()) {
      stats.validation = evaluate_model(model, split.valid);
    }
    result.history.push_back(stats);

    // With no validation set there is no selection signal; keep the latest.
    if (split.valid.empty() || result.best_epoch == 0 ||
        stats.validation.f1 > result.best_val_f1) {
      result.best_epoch = epoch;
      result.best_val_f1 = stats.validation.f1;
      best_values.clear();
      for (const nn::Param* p : params) best_values.push_back(p->value);
    }
    if (hook && !hook(stats, model)) break;
  }

  if (best_values.size() == params.size()) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      params[i]->value = best_values[i];
    }
  }
  return result;
}

struct Checkpoint {
  TrainConfig train_config;
  EncoderConfig encoder_config;
  nlohmann::json inventory;
  int best_epoch = 0;
  double best_val_f1 = 0.0;
};

inline void save_checkpoint(const std::string& dir, SeeFewModel& model,
                            const TrainConfig& train_cfg,
                            const EncoderConfig& encoder_cfg,
                            const TrainResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  std::map<std::string, nn::Mat> tensors;
  for (const nn::Param* p : model.parameters()) {
    if (!tensors.emplace(p->name, p->value).second) {
      throw std::logic_error("duplicate parameter name " + p->name);
    }
  }
  save_safetensors((fs::path(dir) / "weights.safetensors").string(), tensors);

  nlohmann::json j;
  j["format"] = "seefew-checkpoint";
  j["train"] = to_json(train_cfg);
  j["encoder"] = to_json(encoder_cfg);
  j["inventory"] = model.inventory().to_json();
  j["best_epoch"] = result.best_epoch;
  j["best_val_f1"] = result.best_val_f1;
  std::ofstream out(fs::path(dir) / "config.json");
  if (!out) throw std::runtime_error("cannot write checkpoint config in " + dir);
  out << j.dump(2) << "\n";
}

inline void write_metrics_log(const std::string& dir, const TrainResult& result) {
  std::ofstream out(std::filesystem::path(dir) / "metrics.log");
  if (!out) throw std::runtime_error("cannot write metrics log in " + dir);
  for (const auto& e : result.history) {
    out << "epoch=" << e.epoch << " seed_loss=" << e.seed_loss
        << " expansion_loss=" << e.expansion_loss
        << " entail_loss=" << e.entail_loss << " joint=" << e.joint
        << " val_precision=" << e.validation.precision
        << " val_recall=" << e.validation.recall
        << " val_f1=" << e.validation.f1 << "\n";
  }
  out << "best_epoch=" << result.best_epoch << " best_val_f1=" << result.best_val_f1
      << "\n";
}

struct LoadedCheckpoint {
  std::unique_ptr<SeeFewModel> model;
  Checkpoint info;
};

inline LoadedCheckpoint load_checkpoint(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream in(fs::path(dir) / "config.json");
  if (!in) throw std::runtime_error("cannot open checkpoint config in " + dir);
  const auto j = nlohmann::json::parse(in);
  if (j.value("format", "") != "seefew-checkpoint") {
    throw std::runtime_error("not a seefew checkpoint: " + dir);
  }

  LoadedCheckpoint out;
  out.info.train_config = train_config_from_json(j.at("train"));
  out.info.encoder_config = encoder_config_from_json(j.at("encoder"));
  out.info.inventory = j.at("inventory");
  out.info.best_epoch = j.value("best_epoch", 0);
  out.info.best_val_f1 = j.value("best_val_f1", 0.0);

  auto encoder = make_encoder(out.info.encoder_config);
  out.model = std::make_unique<SeeFewModel>(
      encoder, TypeInventory::from_json(out.info.inventory),
      pipeline_options(out.info.train_config),
      out.info.train_config.head_init_seed);

  auto tensors = load_safetensors((fs::path(dir) / "weights.safetensors").string());
  for (nn::Param* p : out.model->parameters()) {
    const auto it = tensors.find(p->name);
    if (it == tensors.end()) {
      throw std::runtime_error("checkpoint/config mismatch: missing tensor " +
                               p->name);
    }
    if (it->second.rows() != p->value.rows() || it->second.cols() != p->value.cols()) {
      throw std::runtime_error("checkpoint/config mismatch: shape of " + p->name);
    }
    p->value = it->second;
  }
  return out;
}

}  // namespace seefew

#endif  // SEEFEW_TRAINER_HPP_
