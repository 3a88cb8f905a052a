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
#include <catch_amalgamated.hpp>

#include <map>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "seefew/corpus.hpp"

using namespace seefew;

namespace {

std::vector<Sentence> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_bio(in);
}

/// Second, independent BIO decoder: assigns a type per token, then merges
/// runs; a run starts at B- or at an I- that cannot attach to the left.
std::vector<Entity> oracle_decode(const std::vector<std::string>& tags) {
  std::vector<Entity> out;
  int start = -1;
  std::string open_type;
  for (int i = 0; i < static_cast<int>(tags.size()); ++i) {
    const std::string& tag = tags[static_cast<std::size_t>(i)];
    if (tag == "O") {
      if (start >= 0) out.push_back({Span(start + 1, i), open_type});
      start = -1;
      open_type.clear();
      continue;
    }
    const std::string type = tag.substr(2);
    const bool attaches = tag[0] == 'I' && start >= 0 && open_type == type;
    if (!attaches) {
      if (start >= 0) out.push_back({Span(start + 1, i), open_type});
      start = i;
      open_type = type;
    }
  }
  if (start >= 0) {
    out.push_back({Span(start + 1, static_cast<int>(tags.size())), open_type});
  }
  return out;
}

std::map<std::string, int> class_counts(const std::vector<Sentence>& sentences) {
  std::map<std::string, int> counts;
  for (const auto& s : sentences) {
    for (const auto& e : s.entities) ++counts[e.type_name];
  }
  return counts;
}

}  // namespace

TEST_CASE("parse_bio decodes single-token and contiguous entities") {
  const auto s = parse("EU B-ORG\nrejects O\n\nJohn B-PER\nSmith I-PER\n");
  REQUIRE(s.size() == 2);
  REQUIRE(s[0].entities.size() == 1);
  CHECK(s[0].entities[0] == Entity{Span(1, 1), "ORG"});
  REQUIRE(s[1].entities.size() == 1);
  CHECK(s[1].entities[0] == Entity{Span(1, 2), "PER"});
  CHECK(s[0].id == "s0");
  CHECK(s[1].id == "s1");
}

TEST_CASE("parse_bio repairs orphan I- tags as entity starts") {
  const auto s = parse("Smith I-PER\n");
  REQUIRE(s.size() == 1);
  REQUIRE(s[0].entities.size() == 1);
  CHECK(s[0].entities[0] == Entity{Span(1, 1), "PER"});

  // Type switch inside an I- run also starts a new entity.
  const auto t = parse("a B-PER\nb I-ORG\n");
  REQUIRE(t[0].entities.size() == 2);
  CHECK(t[0].entities[0] == Entity{Span(1, 1), "PER"});
  CHECK(t[0].entities[1] == Entity{Span(2, 2), "ORG"});
}

TEST_CASE("parse_bio agrees with an independent decoder on random tags") {
  std::mt19937_64 rng(4242);
  const std::vector<std::string> types{"PER", "LOC", "ORG"};
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> len_dist(1, 15);
    const int n = len_dist(rng);
    std::vector<std::string> tags;
    std::ostringstream text;
    for (int i = 0; i < n; ++i) {
      std::uniform_int_distribution<int> kind(0, 2);
      std::string tag = "O";
      const int k = kind(rng);
      if (k == 1) tag = "B-" + types[rng() % 3];
      if (k == 2) tag = "I-" + types[rng() % 3];
      tags.push_back(tag);
      text << "tok" << i << ' ' << tag << '\n';
    }
    const auto parsed = parse(text.str());
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].entities == oracle_decode(tags));
  }
}

TEST_CASE("parse_bio rejects malformed input with the line number") {
  CHECK_THROWS_MATCHES(parse("a B-PER\nb B-PER extra\n"), ParseError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("line 2")));
  CHECK_THROWS_AS(parse("a X-PER\n"), ParseError);
  CHECK_THROWS_AS(parse("a B\n"), ParseError);
  CHECK_THROWS_AS(parse("a BPER\n"), ParseError);
}

TEST_CASE("emit_bio round-trips parsed corpora") {
  const std::string well_formed =
      "John B-PER\nSmith I-PER\nvisits O\nNew B-LOC\nYork I-LOC\n\nends O\n\n";
  const auto parsed = parse(well_formed);
  std::ostringstream out;
  emit_bio(parsed, out);
  CHECK(out.str() == well_formed);

  // Orphan repair is idempotent: emit of the repaired parse re-parses equal.
  const auto repaired = parse("Smith I-PER\nJones I-PER\n");
  std::ostringstream out2;
  emit_bio(repaired, out2);
  const auto again = parse(out2.str());
  REQUIRE(again.size() == 1);
  CHECK(again[0].entities == repaired[0].entities);
}

TEST_CASE("dataset_stats counts exactly") {
  auto sentences = parse("a B-PER\n\nb B-LOC\nc I-LOC\nd B-PER\n");
  const auto st = dataset_stats(sentences);
  CHECK(st.sentence_count == 2);
  CHECK(st.entity_count == 3);
  CHECK(st.entities_per_sentence == 1.5);
  CHECK(st.class_counts.at("PER") == 2);
  CHECK(st.class_counts.at("LOC") == 1);
  CHECK_THROWS_AS(dataset_stats({}), std::invalid_argument);
}

TEST_CASE("dataset_stats matches a hand count on the fixture corpus") {
  const auto corpus = testing::overfit_corpus();
  const auto st = dataset_stats(corpus);
  CHECK(st.sentence_count == 10);
  CHECK(st.entity_count == 17);
  CHECK(st.class_counts.at("PER") == 10);
  CHECK(st.class_counts.at("LOC") == 4);
  CHECK(st.class_counts.at("ORG") == 3);
}

TEST_CASE("greedy_sample picks exactly K when forced") {
  const auto corpus = testing::single_entity_corpus(12, {"PER", "LOC", "ORG"});
  const auto split = greedy_sample(corpus, 5, 99);
  const auto train_counts = class_counts(split.train);
  for (const auto& [cls, count] : train_counts) {
    INFO(cls);
    CHECK(count == 5);
  }
  CHECK(split.train.size() == 15);
  const auto valid_counts = class_counts(split.valid);
  for (const auto& [cls, count] : valid_counts) CHECK(count == 5);
}

TEST_CASE("greedy_sample is deterministic in its seed") {
  const auto corpus = testing::mixed_corpus(120, {"PER", "LOC", "ORG"}, 7);
  const auto a = greedy_sample(corpus, 5, 31);
  const auto b = greedy_sample(corpus, 5, 31);
  REQUIRE(a.train.size() == b.train.size());
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    CHECK(a.train[i].id == b.train[i].id);
  }
  for (std::size_t i = 0; i < a.valid.size(); ++i) {
    CHECK(a.valid[i].id == b.valid[i].id);
  }
  const auto c = greedy_sample(corpus, 5, 32);
  bool any_difference = a.train.size() != c.train.size();
  for (std::size_t i = 0; !any_difference && i < a.train.size(); ++i) {
    any_difference = a.train[i].id != c.train[i].id;
  }
  CHECK(any_difference);
}

TEST_CASE("greedy_sample guarantees K per class, recounted independently") {
  for (const int k : {5, 10, 20}) {
    const auto corpus = testing::mixed_corpus(400, {"PER", "LOC", "ORG", "MISC"}, 11);
    const auto split = greedy_sample(corpus, k, 5);
    for (const auto& [cls, count] : class_counts(split.train)) {
      INFO("train " << cls << " k=" << k);
      CHECK(count >= k);
    }
    for (const auto& [cls, count] : class_counts(split.valid)) {
      INFO("valid " << cls << " k=" << k);
      CHECK(count >= k);
    }
    // Disjointness by id.
    std::set<std::string> train_ids, valid_ids;
    for (const auto& s : split.train) train_ids.insert(s.id);
    for (const auto& s : split.valid) valid_ids.insert(s.id);
    for (const auto& s : split.test) {
      CHECK_FALSE(train_ids.count(s.id));
      CHECK_FALSE(valid_ids.count(s.id));
    }
    for (const auto& id : valid_ids) CHECK_FALSE(train_ids.count(id));
  }
}

TEST_CASE("greedy_sample names the unsatisfiable class") {
  const auto corpus = testing::single_entity_corpus(3, {"PER", "RARE"});
  try {
    greedy_sample(corpus, 5, 1);
    FAIL("expected SamplingError");
  } catch (const SamplingError& e) {
    CHECK((e.class_name() == "PER" || e.class_name() == "RARE"));
    CHECK(std::string(e.what()).find(e.class_name()) != std::string::npos);
  }
}

TEST_CASE("greedy_sample rejects K < 1") {
  CHECK_THROWS_AS(greedy_sample(testing::overfit_corpus(), 0, 1),
                  std::invalid_argument);
}
