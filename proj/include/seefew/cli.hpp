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
#ifndef SEEFEW_CLI_HPP_
#define SEEFEW_CLI_HPP_

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seefew/seefew.hpp"

namespace seefew::cli {

namespace fs = std::filesystem;

inline std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Records what a command ran with and which files it produced; written as
/// run_manifest.json in the output directory.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::string> artifacts;
  std::string out_dir;

  void add_artifact(const std::string& name) { artifacts.push_back(name); }

  void save() const {
    if (out_dir.empty()) return;
    fs::create_directories(out_dir);
    nlohmann::json j;
    j["command"] = command;
    j["argv"] = argv;
    j["inputs"] = inputs;
    j["config"] = config;
    j["artifacts"] = artifacts;
    j["output_dir"] = out_dir;
    j["timestamp"] = iso_timestamp();
    std::ofstream out(fs::path(out_dir) / "run_manifest.json");
    if (!out) throw std::runtime_error("cannot write run manifest in " + out_dir);
    out << j.dump(2) << "\n";
  }
};

struct CommonArgs {
  std::string config_path;
  std::string corpus;
  std::string inventory = "conll03";
  std::string backend = "toy";
  std::string model_dir;
  std::string encoder_config_path;
  std::string out_dir;
  int k = 5;
  int groups = 5;
  std::uint64_t seed = 42;
};

inline TypeInventory resolve_inventory(const std::string& name_or_path) {
  if (fs::exists(name_or_path)) return TypeInventory::load_file(name_or_path);
  return TypeInventory::builtin(name_or_path);
}

inline EncoderConfig resolve_encoder_config(const CommonArgs& args) {
  EncoderConfig cfg;
  if (!args.encoder_config_path.empty()) {
    std::ifstream in(args.encoder_config_path);
    if (!in) {
      throw std::runtime_error("cannot open encoder config: " +
                               args.encoder_config_path);
    }
    cfg = encoder_config_from_json(nlohmann::json::parse(in));
  }
  cfg.backend = args.backend;
  if (!args.model_dir.empty()) cfg.model_name = args.model_dir;
  return cfg;
}

inline int cmd_sample(const CommonArgs& args) {
  const auto sentences = parse_bio_file(args.corpus);
  RunManifest manifest;
  manifest.command = "sample";
  manifest.out_dir = args.out_dir;
  manifest.inputs = {{"corpus", args.corpus},
                     {"k", args.k},
                     {"groups", args.groups},
                     {"seed", args.seed}};
  fs::create_directories(args.out_dir);
  for (int g = 0; g < args.groups; ++g) {
    const auto split = greedy_sample(sentences, args.k, args.seed + static_cast<std::uint64_t>(g), g);
    const auto sm = SplitManifest::from_split(split, args.corpus);
    const std::string file = "group_" + std::to_string(g) + ".split.json";
    sm.save((fs::path(args.out_dir) / file).string());
    manifest.add_artifact(file);
    std::cout << file << ": train=" << split.train.size()
              << " valid=" << split.valid.size() << " test=" << split.test.size()
              << "\n";
  }
  manifest.save();
  return 0;
}

struct TrainArgs {
  CommonArgs common;
  std::string split_path;
  // direct overrides; negative sentinel = not set on the command line
  double alpha = -1.0;
  int lambda = -1;
  double gamma = -1.0;
  int epochs = -1;
  double learning_rate = -1.0;
  bool no_seeding = false;
  bool no_expanding = false;
  bool multiclass_head = false;
  std::string seed_metric;
  bool seed_set = false;
};

inline TrainConfig resolve_train_config(const TrainArgs& args) {
  TrainConfig cfg;
  if (!args.common.config_path.empty()) {
    std::ifstream in(args.common.config_path);
    if (!in) throw std::runtime_error("cannot open config: " + args.common.config_path);
    cfg = train_config_from_json(nlohmann::json::parse(in));
  }
  if (args.alpha >= 0) cfg.alpha = args.alpha;
  if (args.lambda >= 0) cfg.lambda = args.lambda;
  if (args.gamma >= 0) cfg.gamma = args.gamma;
  if (args.epochs >= 0) cfg.epochs = args.epochs;
  if (args.learning_rate >= 0) cfg.learning_rate = args.learning_rate;
  if (args.seed_set) cfg.rng_seed = args.common.seed;
  cfg.no_seeding |= args.no_seeding;
  cfg.no_expanding |= args.no_expanding;
  cfg.multiclass_head |= args.multiclass_head;
  if (!args.seed_metric.empty()) cfg.seed_metric = args.seed_metric;
  cfg.validate();
  return cfg;
}

inline int cmd_train(const TrainArgs& args) {
  const auto manifest_in = SplitManifest::load(args.split_path);
  const std::string corpus_path =
      args.common.corpus.empty() ? manifest_in.corpus_path : args.common.corpus;
  const auto sentences = parse_bio_file(corpus_path);
  const auto split = manifest_in.materialize(sentences);

  const TrainConfig cfg = resolve_train_config(args);
  const EncoderConfig enc_cfg = resolve_encoder_config(args.common);
  const auto inventory = resolve_inventory(args.common.inventory);

  auto encoder = make_encoder(enc_cfg);
  SeeFewModel model(encoder, inventory, pipeline_options(cfg), cfg.head_init_seed);

  std::cout << "training: " << split.train.size() << " train / "
            << split.valid.size() << " valid sentences, " << cfg.epochs
            << " epochs\n";
  const auto result = train(model, split, cfg, [](const EpochStats& e, SeeFewModel&) {
    std::cout << "epoch " << e.epoch << ": joint=" << e.joint
              << " val_f1=" << e.validation.f1 << "\n";
    return true;
  });

  save_checkpoint(args.common.out_dir, model, cfg, enc_cfg, result);
  write_metrics_log(args.common.out_dir, result);

  RunManifest manifest;
  manifest.command = "train";
  manifest.out_dir = args.common.out_dir;
  manifest.inputs = {{"split", args.split_path},
                     {"corpus", corpus_path},
                     {"inventory", args.common.inventory}};
  manifest.config = {{"train", to_json(cfg)}, {"encoder", to_json(enc_cfg)}};
  manifest.add_artifact("weights.safetensors");
  manifest.add_artifact("config.json");
  manifest.add_artifact("metrics.log");
  manifest.save();

  std::cout << "best epoch " << result.best_epoch << " val_f1 "
            << result.best_val_f1 << "\n";
  return 0;
}

struct PredictArgs {
  std::string checkpoint;
  std::string data;
  std::string out_dir;
};

struct PredictionRun {
  std::vector<PredictionRecord> records;
  std::size_t candidate_total = 0;
  std::size_t ngram_total = 0;
  std::size_t sentence_count = 0;
};

inline PredictionRun run_predictions(SeeFewModel& model,
                                     const std::vector<Sentence>& sentences) {
  PredictionRun run;
  run.sentence_count = sentences.size();
  for (const auto& s : sentences) {
    auto pred = model.predict(s);
    run.candidate_total += pred.candidates.spans.size();
    run.ngram_total += pred.ngrams.size();
    run.records.push_back({s.id, std::move(pred.entities)});
  }
  return run;
}

inline nlohmann::json candidate_diagnostics(const PredictionRun& run) {
  return {{"candidates", run.candidate_total},
          {"candidates_per_sentence",
           run.sentence_count == 0
               ? 0.0
               : static_cast<double>(run.candidate_total) /
                     static_cast<double>(run.sentence_count)},
          {"ngrams", run.ngram_total},
          {"candidate_ngram_ratio",
           run.ngram_total == 0 ? 0.0
                                : static_cast<double>(run.candidate_total) /
                                      static_cast<double>(run.ngram_total)}};
}

inline int cmd_predict(const PredictArgs& args) {
  auto loaded = load_checkpoint(args.checkpoint);
  const auto sentences = parse_bio_file(args.data);
  auto run = run_predictions(*loaded.model, sentences);

  fs::create_directories(args.out_dir);
  const std::string pred_file = "predictions.jsonl";
  write_predictions_file((fs::path(args.out_dir) / pred_file).string(), run.records);

  const auto diag = candidate_diagnostics(run);
  std::cout << diag.dump() << "\n";

  RunManifest manifest;
  manifest.command = "predict";
  manifest.out_dir = args.out_dir;
  manifest.inputs = {{"checkpoint", args.checkpoint}, {"data", args.data}};
  manifest.config = {{"diagnostics", diag}};
  manifest.add_artifact(pred_file);
  manifest.save();
  return 0;
}

struct EvaluateArgs {
  std::vector<std::string> checkpoints;
  std::vector<std::string> prediction_files;
  std::string data;
  std::string out_dir;
};

inline MetricsReport score_records(const std::vector<PredictionRecord>& records,
                                   const std::vector<Sentence>& sentences) {
  std::unordered_map<std::string, const PredictionRecord*> by_id;
  for (const auto& r : records) by_id[r.sentence_id] = &r;
  std::vector<std::vector<ScoredPrediction>> preds;
  std::vector<std::vector<Entity>> golds;
  for (const auto& s : sentences) {
    const auto it = by_id.find(s.id);
    preds.push_back(it == by_id.end() ? std::vector<ScoredPrediction>{}
                                      : it->second->entities);
    golds.push_back(s.entities);
  }
  return evaluate(preds, golds);
}

inline int cmd_evaluate(const EvaluateArgs& args) {
  if (args.checkpoints.empty() == args.prediction_files.empty()) {
    throw std::invalid_argument(
        "evaluate needs either --checkpoint or --preds (not both)");
  }
  const auto sentences = parse_bio_file(args.data);

  std::vector<MetricsReport> reports;
  nlohmann::json group_json = nlohmann::json::array();
  for (const auto& ckpt : args.checkpoints) {
    auto loaded = load_checkpoint(ckpt);
    auto run = run_predictions(*loaded.model, sentences);
    auto rep = score_records(run.records, sentences);
    reports.push_back(rep);
    nlohmann::json g = to_json(rep);
    g["checkpoint"] = ckpt;
    g["diagnostics"] = candidate_diagnostics(run);
    group_json.push_back(g);
  }
  for (const auto& file : args.prediction_files) {
    auto rep = score_records(read_predictions_file(file), sentences);
    reports.push_back(rep);
    nlohmann::json g = to_json(rep);
    g["predictions"] = file;
    group_json.push_back(g);
  }

  nlohmann::json out;
  out["groups"] = group_json;
  if (reports.size() > 1) out["aggregate"] = to_json(aggregate_groups(reports));

  std::cout << out.dump(2) << "\n";
  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    std::ofstream f(fs::path(args.out_dir) / "metrics.json");
    f << out.dump(2) << "\n";
    RunManifest manifest;
    manifest.command = "evaluate";
    manifest.out_dir = args.out_dir;
    manifest.inputs = {{"data", args.data},
                       {"checkpoints", args.checkpoints},
                       {"preds", args.prediction_files}};
    manifest.add_artifact("metrics.json");
    manifest.save();
  }
  return 0;
}

inline int cmd_stats(const std::string& corpus) {
  const auto sentences = parse_bio_file(corpus);
  const auto st = dataset_stats(sentences);
  nlohmann::json j;
  j["sentences"] = st.sentence_count;
  j["entities"] = st.entity_count;
  j["entities_per_sentence"] = st.entities_per_sentence;
  j["class_counts"] = st.class_counts;
  std::cout << j.dump(2) << "\n";
  return 0;
}

inline int run(int argc, const char* const* argv) {
  CLI::App app{"seefew: few-shot NER by seeding, expanding and entailing"};
  app.require_subcommand(1);

  CommonArgs common;
  TrainArgs train_args;
  PredictArgs predict_args;
  EvaluateArgs eval_args;
  std::string stats_corpus;

  auto* sample = app.add_subcommand("sample", "build K-shot split manifests");
  sample->add_option("--corpus", common.corpus, "BIO corpus file")->required();
  sample->add_option("--k", common.k, "instances per class (train and valid)");
  sample->add_option("--groups", common.groups, "number of split groups");
  sample->add_option("--seed", common.seed, "base sampling seed");
  sample->add_option("--out", common.out_dir, "output directory")->required();

  auto* train_cmd = app.add_subcommand("train", "train a model on a split");
  train_cmd->add_option("--split", train_args.split_path, "split manifest")->required();
  train_cmd->add_option("--corpus", common.corpus,
                        "BIO corpus (defaults to the manifest's path)");
  train_cmd->add_option("--config", common.config_path, "training config JSON");
  train_cmd->add_option("--inventory", common.inventory,
                        "builtin inventory name or template file");
  train_cmd->add_option("--backend", common.backend, "encoder backend")
      ->check(CLI::IsMember({"toy", "pretrained"}));
  train_cmd->add_option("--model-dir", common.model_dir,
                        "pretrained checkpoint directory");
  train_cmd->add_option("--encoder-config", common.encoder_config_path,
                        "encoder config JSON");
  train_cmd->add_option("--out", common.out_dir, "checkpoint directory")->required();
  train_cmd->add_option("--alpha", train_args.alpha, "seed threshold");
  train_cmd->add_option("--lambda", train_args.lambda, "max boundary offset");
  train_cmd->add_option("--gamma", train_args.gamma, "focal loss exponent");
  train_cmd->add_option("--epochs", train_args.epochs, "training epochs");
  train_cmd->add_option("--learning-rate", train_args.learning_rate, "peak LR");
  auto* seed_opt = train_cmd->add_option("--seed", common.seed, "training rng seed");
  train_cmd->add_flag("--no-seeding", train_args.no_seeding,
                      "use every n-gram as a seed");
  train_cmd->add_flag("--no-expanding", train_args.no_expanding,
                      "pass seeds through as candidates");
  train_cmd->add_flag("--multiclass-head", train_args.multiclass_head,
                      "replace entailment with a v-way classifier");
  train_cmd->add_option("--seed-metric", train_args.seed_metric,
                        "gold seed score metric")
      ->check(CLI::IsMember({"iof", "iou"}));

  auto* predict = app.add_subcommand("predict", "decode entities with a checkpoint");
  predict->add_option("--checkpoint", predict_args.checkpoint, "checkpoint dir")
      ->required();
  predict->add_option("--data", predict_args.data, "BIO file to annotate")->required();
  predict->add_option("--out", predict_args.out_dir, "output directory")->required();

  auto* evaluate = app.add_subcommand("evaluate", "score checkpoints or predictions");
  evaluate->add_option("--checkpoint", eval_args.checkpoints,
                       "checkpoint dir (repeat for groups)");
  evaluate->add_option("--preds", eval_args.prediction_files,
                       "predictions.jsonl (repeat for groups)");
  evaluate->add_option("--data", eval_args.data, "gold BIO file")->required();
  evaluate->add_option("--out", eval_args.out_dir, "output directory");

  auto* stats = app.add_subcommand("stats", "corpus statistics");
  stats->add_option("--corpus", stats_corpus, "BIO corpus file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    if (sample->parsed()) return cmd_sample(common);
    if (train_cmd->parsed()) {
      train_args.common = common;
      train_args.seed_set = seed_opt->count() > 0;
      return cmd_train(train_args);
    }
    if (predict->parsed()) return cmd_predict(predict_args);
    if (evaluate->parsed()) return cmd_evaluate(eval_args);
    if (stats->parsed()) return cmd_stats(stats_corpus);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}

inline int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("seefew");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace seefew::cli

#endif  // SEEFEW_CLI_HPP_
