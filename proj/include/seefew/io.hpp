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
#ifndef SEEFEW_IO_HPP_
#define SEEFEW_IO_HPP_

#include <array>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "seefew/corpus.hpp"
#include "seefew/encoder.hpp"
#include "seefew/inference.hpp"

namespace seefew {

struct TrainConfig {
  int epochs = 35;
  std::array<double, 3> betas{1.0, 1.0, 1.0};  // seed, expand, entail loss weights
  double gamma = 2.0;
  double alpha = 0.5;
  int lambda = 5;
  double learning_rate = 3e-5;
  double warmup_fraction = 0.1;
  int sentence_batch = 1;
  int entail_chunk = 16;
  double dropout = 0.5;
  std::uint64_t rng_seed = 42;
  double weight_decay = 0.01;
  std::uint64_t head_init_seed = 7;
  // ablation switches
  bool no_seeding = false;
  bool no_expanding = false;
  bool multiclass_head = false;
  std::string seed_metric = "iof";

  void validate() const {
    if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
    if (gamma < 0) throw std::invalid_argument("config: gamma must be >= 0");
    if (alpha < 0 || alpha >= 1) throw std::invalid_argument("config: alpha must be in [0,1)");
    if (lambda < 1) throw std::invalid_argument("config: lambda must be >= 1");
    if (learning_rate <= 0) throw std::invalid_argument("config: learning_rate must be > 0");
    if (warmup_fraction < 0 || warmup_fraction >= 1) {
      throw std::invalid_argument("config: warmup_fraction must be in [0,1)");
    }
    if (sentence_batch < 1) throw std::invalid_argument("config: sentence_batch must be >= 1");
    if (entail_chunk < 1) throw std::invalid_argument("config: entail_chunk must be >= 1");
    if (dropout < 0 || dropout >= 1) throw std::invalid_argument("config: dropout must be in [0,1)");
    for (double b : betas) {
      if (b < 0) throw std::invalid_argument("config: betas must be >= 0");
    }
    if (seed_metric != "iof" && seed_metric != "iou") {
      throw std::invalid_argument("config: seed_metric must be iof or iou");
    }
  }
};

inline nlohmann::json to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"betas", c.betas},
          {"gamma", c.gamma},
          {"alpha", c.alpha},
          {"lambda", c.lambda},
          {"learning_rate", c.learning_rate},
          {"warmup_fraction", c.warmup_fraction},
          {"sentence_batch", c.sentence_batch},
          {"entail_chunk", c.entail_chunk},
          {"dropout", c.dropout},
          {"rng_seed", c.rng_seed},
          {"weight_decay", c.weight_decay},
          {"head_init_seed", c.head_init_seed},
          {"no_seeding", c.no_seeding},
          {"no_expanding", c.no_expanding},
          {"multiclass_head", c.multiclass_head},
          {"seed_metric", c.seed_metric}};
}

inline TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  static const std::vector<std::string> known = {
      "epochs", "betas", "gamma", "alpha", "lambda", "learning_rate",
      "warmup_fraction", "sentence_batch", "entail_chunk", "dropout",
      "rng_seed", "weight_decay", "head_init_seed", "no_seeding",
      "no_expanding", "multiclass_head", "seed_metric"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("config: unknown field '" + key + "'");
    }
  }
  c.epochs = j.value("epochs", c.epochs);
  if (j.contains("betas")) c.betas = j.at("betas").get<std::array<double, 3>>();
  c.gamma = j.value("gamma", c.gamma);
  c.alpha = j.value("alpha", c.alpha);
  c.lambda = j.value("lambda", c.lambda);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.warmup_fraction = j.value("warmup_fraction", c.warmup_fraction);
  c.sentence_batch = j.value("sentence_batch", c.sentence_batch);
  c.entail_chunk = j.value("entail_chunk", c.entail_chunk);
  c.dropout = j.value("dropout", c.dropout);
  c.rng_seed = j.value("rng_seed", c.rng_seed);
  c.weight_decay = j.value("weight_decay", c.weight_decay);
  c.head_init_seed = j.value("head_init_seed", c.head_init_seed);
  c.no_seeding = j.value("no_seeding", c.no_seeding);
  c.no_expanding = j.value("no_expanding", c.no_expanding);
  c.multiclass_head = j.value("multiclass_head", c.multiclass_head);
  c.seed_metric = j.value("seed_metric", c.seed_metric);
  c.validate();
  return c;
}

inline nlohmann::json to_json(const EncoderConfig& c) {
  return {{"backend", c.backend},
          {"model_name", c.model_name},
          {"max_length", c.max_length},
          {"dropout", c.dropout},
          {"toy_vocab_hash", c.toy_vocab_hash},
          {"toy_hidden", c.toy_hidden},
          {"toy_layers", c.toy_layers},
          {"toy_heads", c.toy_heads},
          {"toy_ffn", c.toy_ffn},
          {"toy_init_seed", c.toy_init_seed}};
}

inline EncoderConfig encoder_config_from_json(const nlohmann::json& j) {
  EncoderConfig c;
  c.backend = j.value("backend", c.backend);
  c.model_name = j.value("model_name", c.model_name);
  c.max_length = j.value("max_length", c.max_length);
  c.dropout = j.value("dropout", c.dropout);
  c.toy_vocab_hash = j.value("toy_vocab_hash", c.toy_vocab_hash);
  c.toy_hidden = j.value("toy_hidden", c.toy_hidden);
  c.toy_layers = j.value("toy_layers", c.toy_layers);
  c.toy_heads = j.value("toy_heads", c.toy_heads);
  c.toy_ffn = j.value("toy_ffn", c.toy_ffn);
  c.toy_init_seed = j.value("toy_init_seed", c.toy_init_seed);
  return c;
}

/// Split manifest: which sentences of a corpus form the K-shot train and
/// validation sets. The test set is the complement, so the manifest plus the
/// corpus reproduces the split exactly. No timestamps, so reruns are
/// byte-identical.
struct SplitManifest {
  std::string corpus_path;
  int k = 0;
  std::uint64_t rng_seed = 0;
  int group_index = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> valid_ids;

  static SplitManifest from_split(const FewShotSplit& split,
                                  const std::string& corpus_path) {
    SplitManifest m;
    m.corpus_path = corpus_path;
    m.k = split.k;
    m.rng_seed = split.sampling_seed;
    m.group_index = split.group_index;
    for (const auto& s : split.train) m.train_ids.push_back(s.id);
    for (const auto& s : split.valid) m.valid_ids.push_back(s.id);
    return m;
  }

  nlohmann::json to_json() const {
    return {{"format", "seefew-split"}, {"corpus", corpus_path},
            {"k", k},                   {"rng_seed", rng_seed},
            {"group_index", group_index}, {"train_ids", train_ids},
            {"valid_ids", valid_ids}};
  }

  static SplitManifest from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "seefew-split") {
      throw std::invalid_argument("not a split manifest");
    }
    SplitManifest m;
    m.corpus_path = j.at("corpus").get<std::string>();
    m.k = j.at("k").get<int>();
    m.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    m.group_index = j.at("group_index").get<int>();
    m.train_ids = j.at("train_ids").get<std::vector<std::string>>();
    m.valid_ids = j.at("valid_ids").get<std::vector<std::string>>();
    return m;
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write split manifest: " + path);
    out << to_json().dump(2) << "\n";
  }

  static SplitManifest load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open split manifest: " + path);
    return from_json(nlohmann::json::parse(in));
  }

  /// Rebuilds the split from the manifest against its corpus.
  FewShotSplit materialize(const std::vector<Sentence>& sentences) const {
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < sentences.size(); ++i) by_id[sentences[i].id] = i;
    auto lookup = [&](const std::string& id) -> const Sentence& {
      const auto it = by_id.find(id);
      if (it == by_id.end()) {
        throw std::runtime_error("split manifest references unknown sentence " + id);
      }
      return sentences[it->second];
    };
    FewShotSplit split;
    split.k = k;
    split.sampling_seed = rng_seed;
    split.group_index = group_index;
    std::unordered_map<std::string, bool> used;
    for (const auto& id : train_ids) {
      split.train.push_back(lookup(id));
      used[id] = true;
    }
    for (const auto& id : valid_ids) {
      split.valid.push_back(lookup(id));
      used[id] = true;
    }
    for (const auto& s : sentences) {
      if (!used.count(s.id)) split.test.push_back(s);
    }
    return split;
  }
};

/// Line-delimited prediction records: one JSON object per sentence.
struct PredictionRecord {
  std::string sentence_id;
  std::vector<ScoredPrediction> entities;
};

inline void write_predictions(std::ostream& out,
                              const std::vector<PredictionRecord>& records) {
  for (const auto& rec : records) {
    nlohmann::json ents = nlohmann::json::array();
    for (const auto& e : rec.entities) {
      ents.push_back({{"l", e.span.l},
                      {"r", e.span.r},
                      {"type", e.type_name},
                      {"score", e.score}});
    }
    out << nlohmann::json{{"id", rec.sentence_id}, {"entities", ents}}.dump()
        << "\n";
  }
}

inline void write_predictions_file(const std::string& path,
                                   const std::vector<PredictionRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write predictions: " + path);
  write_predictions(out, records);
}

inline std::vector<PredictionRecord> read_predictions_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open predictions: " + path);
  std::vector<PredictionRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    PredictionRecord rec;
    rec.sentence_id = j.at("id").get<std::string>();
    for (const auto& e : j.at("entities")) {
      rec.entities.push_back({Span(e.at("l").get<int>(), e.at("r").get<int>()),
                              e.at("type").get<std::string>(),
                              e.at("score").get<double>()});
    }
    records.push_back(std::move(rec));
  }
  return records;
}

inline nlohmann::json to_json(const MetricsReport& r) {
  return {{"precision", r.precision}, {"recall", r.recall},       {"f1", r.f1},
          {"true_positives", r.true_positives}, {"predicted", r.predicted},
          {"gold", r.gold}};
}

inline nlohmann::json to_json(const AggregateMetrics& a) {
  return {{"groups", a.groups},
          {"mean", {{"precision", a.mean.precision},
                    {"recall", a.mean.recall},
                    {"f1", a.mean.f1}}},
          {"std", {{"precision", a.stddev.precision},
                   {"recall", a.stddev.recall},
                   {"f1", a.stddev.f1}}}};
}

}  // namespace seefew

#endif  // SEEFEW_IO_HPP_
