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
#ifndef SEEFEW_TESTS_HELPERS_HPP_
#define SEEFEW_TESTS_HELPERS_HPP_

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "seefew/corpus.hpp"
#include "seefew/encoder.hpp"
#include "seefew/inventory.hpp"
#include "seefew/io.hpp"

namespace seefew::testing {

inline Sentence make_sentence(const std::string& id,
                              const std::vector<std::string>& tokens,
                              const std::vector<Entity>& entities) {
  Sentence s;
  s.id = id;
  s.tokens = tokens;
  s.entities = entities;
  return s;
}

/// Ten sentences over three entity types with lengths 1 to 3, small enough
/// for a toy encoder to memorize.
inline std::vector<Sentence> overfit_corpus() {
  std::vector<Sentence> out;
  out.push_back(make_sentence("s0", {"alice", "moved", "to", "paris", "."},
                              {{Span(1, 1), "PER"}, {Span(4, 4), "LOC"}}));
  out.push_back(make_sentence("s1", {"bob", "works", "at", "acme", "corp", "."},
                              {{Span(1, 1), "PER"}, {Span(4, 5), "ORG"}}));
  out.push_back(make_sentence("s2", {"carol", "visited", "new", "york", "city", "."},
                              {{Span(1, 1), "PER"}, {Span(3, 5), "LOC"}}));
  out.push_back(make_sentence("s3", {"dave", "joined", "acme", "corp", "."},
                              {{Span(1, 1), "PER"}, {Span(3, 4), "ORG"}}));
  out.push_back(make_sentence("s4", {"erin", "lives", "in", "paris", "."},
                              {{Span(1, 1), "PER"}, {Span(4, 4), "LOC"}}));
  out.push_back(make_sentence("s5", {"frank", "toured", "new", "york", "city", "."},
                              {{Span(1, 1), "PER"}, {Span(3, 5), "LOC"}}));
  out.push_back(make_sentence("s6", {"grace", "runs", "beta", "labs", "."},
                              {{Span(1, 1), "PER"}, {Span(3, 4), "ORG"}}));
  out.push_back(make_sentence("s7", {"henry", "saw", "alice", "in", "rome", "."},
                              {{Span(1, 1), "PER"},
                               {Span(3, 3), "PER"},
                               {Span(5, 5), "LOC"}}));
  out.push_back(make_sentence("s8", {"iris", "met", "bob", "at", "beta", "labs", "."},
                              {{Span(1, 1), "PER"},
                               {Span(3, 3), "PER"},
                               {Span(5, 6), "ORG"}}));
  out.push_back(make_sentence("s9", {"jack", "flew", "to", "rome", "."},
                              {{Span(1, 1), "PER"}, {Span(4, 4), "LOC"}}));
  return out;
}

inline TypeInventory overfit_inventory() {
  return TypeInventory({{"PER", "is a person."},
                        {"LOC", "is a location."},
                        {"ORG", "is an organization."}},
                       "is not an entity.", "english");
}

/// d=32 toy encoder sized for fast desk-scale runs.
inline EncoderConfig toy_encoder_config(std::uint64_t init_seed = 1) {
  EncoderConfig cfg;
  cfg.backend = "toy";
  cfg.max_length = 64;
  cfg.toy_vocab_hash = 512;
  cfg.toy_hidden = 32;
  cfg.toy_layers = 2;
  cfg.toy_heads = 4;
  cfg.toy_ffn = 64;
  cfg.toy_init_seed = init_seed;
  return cfg;
}

/// Synthetic corpus where every sentence holds one entity of one class.
inline std::vector<Sentence> single_entity_corpus(int per_class,
                                                  const std::vector<std::string>& classes) {
  std::vector<Sentence> out;
  int id = 0;
  for (const auto& cls : classes) {
    for (int i = 0; i < per_class; ++i) {
      out.push_back(make_sentence(
          "u" + std::to_string(id++),
          {cls + std::to_string(i), "appears", "here", "."},
          {{Span(1, 1), cls}}));
    }
  }
  return out;
}

/// Mixed corpus: sentences carry one to three entities of random classes.
inline std::vector<Sentence> mixed_corpus(int sentence_count,
                                          const std::vector<std::string>& classes,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> n_entities(1, 3);
  std::uniform_int_distribution<std::size_t> pick_class(0, classes.size() - 1);
  std::vector<Sentence> out;
  for (int i = 0; i < sentence_count; ++i) {
    const int m = n_entities(rng);
    std::vector<std::string> tokens;
    std::vector<Entity> entities;
    int pos = 1;
    for (int e = 0; e < m; ++e) {
      tokens.push_back("w" + std::to_string(i) + "_" + std::to_string(e));
      ++pos;
      const auto& cls = classes[pick_class(rng)];
      tokens.push_back(cls + "ent");
      entities.push_back({Span(pos, pos), cls});
      ++pos;
    }
    tokens.push_back(".");
    out.push_back(make_sentence("m" + std::to_string(i), tokens, entities));
  }
  return out;
}

inline std::string temp_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("seefew_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace seefew::testing

#endif  // SEEFEW_TESTS_HELPERS_HPP_
