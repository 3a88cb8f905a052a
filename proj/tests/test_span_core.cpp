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

#include <random>
#include <set>

#include "seefew/span.hpp"

using namespace seefew;

namespace {

// Independent token-set oracles: spans as explicit index sets.
std::set<int> token_set(const Span& s) {
  std::set<int> out;
  for (int i = s.l; i <= s.r; ++i) out.insert(i);
  return out;
}

double oracle_iof(const Span& a, const Span& b) {
  const auto sa = token_set(a), sb = token_set(b);
  int inter = 0;
  for (int t : sa) inter += sb.count(t);
  return static_cast<double>(inter) / static_cast<double>(sa.size());
}

double oracle_iou(const Span& a, const Span& b) {
  const auto sa = token_set(a), sb = token_set(b);
  std::set<int> uni = sa;
  uni.insert(sb.begin(), sb.end());
  int inter = 0;
  for (int t : sa) inter += sb.count(t);
  return static_cast<double>(inter) / static_cast<double>(uni.size());
}

// Scan-based floor(x + 1/2), independent of std::floor.
int oracle_round_half_up(double x) {
  int k = -1000;
  while (!(static_cast<double>(k) <= x + 0.5 && x + 0.5 < static_cast<double>(k + 1))) {
    ++k;
  }
  return k;
}

Span random_span(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> start(1, n);
  const int l = start(rng);
  std::uniform_int_distribution<int> stop(l, n);
  return Span(l, stop(rng));
}

}  // namespace

TEST_CASE("enumerate_ngrams lists unigrams then bigrams") {
  CHECK(enumerate_ngrams(1) == std::vector<Span>{Span(1, 1)});
  CHECK(enumerate_ngrams(3) == std::vector<Span>{Span(1, 1), Span(2, 2), Span(3, 3),
                                                 Span(1, 2), Span(2, 3)});
  CHECK_THROWS_AS(enumerate_ngrams(0), std::invalid_argument);
}

TEST_CASE("enumerate_ngrams matches brute-force enumeration") {
  const int n = 50;
  const auto got = enumerate_ngrams(n);
  REQUIRE(got.size() == 2 * n - 1);
  // Brute force: every (l, r) with r - l <= 1, sorted unigrams first.
  std::vector<Span> expected;
  for (int len = 1; len <= 2; ++len) {
    for (int l = 1; l + len - 1 <= n; ++l) expected.emplace_back(l, l + len - 1);
  }
  CHECK(got == expected);
}

TEST_CASE("iof and iou reproduce the bigram-inside-entity anchor") {
  const Span bigram(6, 7);
  const Span entity(6, 10);
  CHECK(iof(bigram, entity) == 1.0);
  CHECK_THAT(iou(bigram, entity), Catch::Matchers::WithinAbs(0.4, 1e-12));
}

TEST_CASE("iof basics") {
  CHECK(iof(Span(3, 5), Span(3, 5)) == 1.0);
  CHECK(iof(Span(5, 6), Span(6, 10)) == oracle_iof(Span(5, 6), Span(6, 10)));
  CHECK(iof(Span(5, 6), Span(6, 10)) == 0.5);
}

TEST_CASE("iou basics") {
  CHECK(iou(Span(1, 2), Span(5, 9)) == 0.0);
  CHECK(iou(Span(2, 4), Span(2, 4)) == 1.0);
}

TEST_CASE("iof and iou agree with token-set oracles on random spans") {
  std::mt19937_64 rng(177);
  for (int trial = 0; trial < 2000; ++trial) {
    std::uniform_int_distribution<int> n_dist(1, 40);
    const int n = n_dist(rng);
    const Span a = random_span(rng, n);
    const Span b = random_span(rng, n);
    CHECK(iof(a, b) == oracle_iof(a, b));
    CHECK(iou(a, b) == oracle_iou(a, b));
    // 0 <= iou <= iof <= 1, and iof = 1 exactly when a is inside b.
    CHECK(iou(a, b) >= 0.0);
    CHECK(iou(a, b) <= iof(a, b));
    CHECK(iof(a, b) <= 1.0);
    CHECK((iof(a, b) == 1.0) == b.contains(a));
  }
}

TEST_CASE("gold_seed_score takes the best overlap") {
  const std::vector<Entity> entities{{Span(6, 10), "LOC"}, {Span(1, 2), "PER"}};
  CHECK(gold_seed_score(Span(7, 7), entities) == 1.0);
  CHECK(gold_seed_score(Span(5, 6), entities) == 0.5);
  CHECK(gold_seed_score(Span(3, 4), entities) == 0.0);
}

TEST_CASE("gold_seed_score with the iou metric") {
  // Bigram half inside a 5-token entity: 1 / (2 + 5 - 1).
  const std::vector<Entity> entities{{Span(6, 10), "LOC"}};
  CHECK_THAT(gold_seed_score(Span(5, 6), entities, SeedMetric::kIoU),
             Catch::Matchers::WithinAbs(1.0 / 6.0, 1e-12));
}

TEST_CASE("gold_offsets point at the argmax-IoF entity") {
  const ExpansionConfig cfg(5);
  const std::vector<Entity> entities{{Span(6, 10), "LOC"}};
  const auto o = gold_offsets(Span(7, 8), entities, cfg);
  REQUIRE(o.has_value());
  CHECK(o->o_l == -1.0);
  CHECK(o->o_r == 2.0);
}

TEST_CASE("gold_offsets clip to the lambda box") {
  const ExpansionConfig cfg(5);
  const std::vector<Entity> entities{{Span(1, 20), "LOC"}};
  const auto o = gold_offsets(Span(7, 8), entities, cfg);
  REQUIRE(o.has_value());
  CHECK(o->o_l == -5.0);
  CHECK(o->o_r == 5.0);
}

TEST_CASE("gold_offsets absent without overlap") {
  const ExpansionConfig cfg(5);
  CHECK_FALSE(gold_offsets(Span(1, 1), {{Span(5, 6), "PER"}}, cfg).has_value());
}

TEST_CASE("gold_offsets ties break to the nearer left boundary") {
  const ExpansionConfig cfg(5);
  // Bigram straddling two adjacent entities with equal IoF 0.5.
  const std::vector<Entity> entities{{Span(3, 5), "A"}, {Span(6, 8), "B"}};
  const auto o = gold_offsets(Span(5, 6), entities, cfg);
  REQUIRE(o.has_value());
  // |3-5| = 2 vs |6-5| = 1: entity B wins.
  CHECK(o->o_l == 1.0);
  CHECK(o->o_r == 2.0);
}

TEST_CASE("unclipped gold offsets round-trip through apply_offsets") {
  std::mt19937_64 rng(93);
  const ExpansionConfig cfg(5);
  int checked = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::uniform_int_distribution<int> n_dist(2, 40);
    const int n = n_dist(rng);
    const Span entity = random_span(rng, n);
    const auto ngrams = enumerate_ngrams(n);
    for (const auto& s : ngrams) {
      const std::vector<Entity> entities{{entity, "X"}};
      const auto o = gold_offsets(s, entities, cfg);
      if (!o) continue;
      const bool clipped = entity.l - s.l != static_cast<int>(o->o_l) ||
                           entity.r - s.r != static_cast<int>(o->o_r);
      if (clipped) continue;
      const auto back = apply_offsets(s, *o, n);
      REQUIRE(back.has_value());
      CHECK(*back == entity);
      ++checked;
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("expansion_window clamps to the sentence") {
  const ExpansionConfig cfg(5);
  auto w = expansion_window(Span(10, 11), cfg, 30);
  CHECK(w.exp_max == Span(5, 16));
  CHECK(w.window == Span(1, 21));

  w = expansion_window(Span(1, 1), cfg, 4);
  CHECK(w.exp_max == Span(1, 4));
  CHECK(w.window == Span(1, 4));

  w = expansion_window(Span(3, 4), cfg, 100);
  CHECK(w.window == Span(1, 14));
}

TEST_CASE("expansion_window nesting invariant") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::uniform_int_distribution<int> n_dist(1, 64);
    std::uniform_int_distribution<int> lam_dist(1, 8);
    const int n = n_dist(rng);
    const Span s = random_span(rng, n);
    const auto w = expansion_window(s, ExpansionConfig(lam_dist(rng)), n);
    CHECK(w.exp_max.contains(s));
    CHECK(w.window.contains(w.exp_max));
  }
}

TEST_CASE("apply_offsets rounds half up and clamps") {
  auto r = apply_offsets(Span(10, 11), {-2.4, 3.6}, 30);
  REQUIRE(r.has_value());
  CHECK(*r == Span(8, 15));

  r = apply_offsets(Span(10, 11), {0.0, 0.0}, 30);
  REQUIRE(r.has_value());
  CHECK(*r == Span(10, 11));

  CHECK_FALSE(apply_offsets(Span(3, 3), {4.9, -4.9}, 10).has_value());
}

TEST_CASE("round_half_up handles negatives") {
  CHECK(round_half_up(-2.4) == -2);
  CHECK(round_half_up(-1.9) == -1);
  CHECK(round_half_up(-2.5) == -2);
  CHECK(round_half_up(2.5) == 3);
  CHECK(round_half_up(0.49) == 0);
}

TEST_CASE("apply_offsets output stays in bounds") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 4000; ++trial) {
    std::uniform_int_distribution<int> n_dist(1, 64);
    std::uniform_int_distribution<int> lam_dist(1, 8);
    const int n = n_dist(rng);
    const int lam = lam_dist(rng);
    std::uniform_real_distribution<double> o_dist(-lam, lam);
    // Unigram or bigram input.
    std::uniform_int_distribution<int> l_dist(1, n);
    const int l = l_dist(rng);
    const int r = std::min(n, l + (rng() % 2 == 0 ? 0 : 1));
    const Span s(l, r);
    const OffsetPair o{o_dist(rng), o_dist(rng)};
    const auto out = apply_offsets(s, o, n);
    if (!out) continue;
    CHECK(out->l >= 1);
    CHECK(out->r <= n);
    CHECK(out->l <= out->r);
    CHECK(out->length() <= 2 + 2 * lam);
    // Independent rounding route.
    const int el = std::max(1, s.l + oracle_round_half_up(o.o_l));
    const int er = std::min(n, s.r + oracle_round_half_up(o.o_r));
    CHECK(out->l == el);
    CHECK(out->r == er);
  }
}
