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
#ifndef SEEFEW_SPAN_HPP_
#define SEEFEW_SPAN_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace seefew {

/// Inclusive token interval, 1-indexed. (3,5) covers tokens 3, 4 and 5.
struct Span {
  int l = 1;
  int r = 1;

  Span() = default;
  Span(int left, int right) : l(left), r(right) {
    if (left < 1 || left > right) {
      throw std::invalid_argument("Span requires 1 <= l <= r, got (" +
                                  std::to_string(left) + "," +
                                  std::to_string(right) + ")");
    }
  }

  int length() const { return r - l + 1; }
  bool contains(const Span& other) const { return l <= other.l && other.r <= r; }
  bool operator==(const Span& other) const { return l == other.l && r == other.r; }
  bool operator!=(const Span& other) const { return !(*this == other); }
  bool operator<(const Span& other) const {
    return l != other.l ? l < other.l : r < other.r;
  }
};

struct Entity {
  Span span;
  std::string type_name;

  bool operator==(const Entity& other) const {
    return span == other.span && type_name == other.type_name;
  }
};

/// Max per-side boundary offset for expansion. Longest reachable entity from
/// a bigram seed is 2 + 2*lambda tokens.
struct ExpansionConfig {
  int lambda = 5;

  explicit ExpansionConfig(int lam = 5) : lambda(lam) {
    if (lam < 1) throw std::invalid_argument("lambda must be >= 1");
  }
};

/// Real-valued (left, right) boundary offsets, each in [-lambda, lambda].
struct OffsetPair {
  double o_l = 0.0;
  double o_r = 0.0;
};

inline int overlap_tokens(const Span& a, const Span& b) {
  return std::max(0, std::min(a.r, b.r) - std::max(a.l, b.l) + 1);
}

inline bool spans_overlap(const Span& a, const Span& b) {
  return overlap_tokens(a, b) > 0;
}

/// All unigrams followed by all bigrams of an n-token sentence: 2n-1 spans.
inline std::vector<Span> enumerate_ngrams(int n) {
  if (n < 1) throw std::invalid_argument("sentence length must be >= 1");
  std::vector<Span> spans;
  spans.reserve(static_cast<std::size_t>(2 * n - 1));
  for (int i = 1; i <= n; ++i) spans.emplace_back(i, i);
  for (int i = 1; i < n; ++i) spans.emplace_back(i, i + 1);
  return spans;
}

/// Intersection over Foreground: overlap(a,b) / |a|. 1 means a lies inside b.
inline double iof(const Span& a, const Span& b) {
  return static_cast<double>(overlap_tokens(a, b)) / a.length();
}

/// Intersection over Union: overlap(a,b) / |a U b| counted over token indices.
inline double iou(const Span& a, const Span& b) {
  const int inter = overlap_tokens(a, b);
  const int uni = a.length() + b.length() - inter;
  return static_cast<double>(inter) / uni;
}

enum class SeedMetric { kIoF, kIoU };

/// Regression target of the seed head: max IoF (or IoU) with any gold entity.
inline double gold_seed_score(const Span& s, const std::vector<Entity>& entities,
                              SeedMetric metric = SeedMetric::kIoF) {
  double best = 0.0;
  for (const auto& e : entities) {
    const double v = metric == SeedMetric::kIoF ? iof(s, e.span) : iou(s, e.span);
    best = std::max(best, v);
  }
  return best;
}

/// Entity the expansion head should grow s into: argmax IoF, ties broken by
/// the nearer left boundary and then the smaller l. Empty when nothing
/// overlaps s.
inline std::optional<Entity> expansion_target(const Span& s,
                                              const std::vector<Entity>& entities) {
  std::optional<Entity> best;
  double best_iof = 0.0;
  for (const auto& e : entities) {
    const double v = iof(s, e.span);
    if (v <= 0.0) continue;
    if (!best) {
      best = e;
      best_iof = v;
      continue;
    }
    if (v > best_iof) {
      best = e;
      best_iof = v;
    } else if (v == best_iof) {
      const int d_new = std::abs(e.span.l - s.l);
      const int d_old = std::abs(best->span.l - s.l);
      if (d_new < d_old || (d_new == d_old && e.span.l < best->span.l)) {
        best = e;
      }
    }
  }
  return best;
}

/// Gold boundary offsets toward the expansion target, clipped to
/// [-lambda, lambda]. Empty when no entity overlaps s.
inline std::optional<OffsetPair> gold_offsets(const Span& s,
                                              const std::vector<Entity>& entities,
                                              const ExpansionConfig& cfg) {
  const auto target = expansion_target(s, entities);
  if (!target) return std::nullopt;
  const double lam = cfg.lambda;
  OffsetPair o;
  o.o_l = std::clamp(static_cast<double>(target->span.l - s.l), -lam, lam);
  o.o_r = std::clamp(static_cast<double>(target->span.r - s.r), -lam, lam);
  return o;
}

struct ExpansionWindow {
  Span exp_max;  // furthest reachable expansion of the seed
  Span window;   // context pooled by the expand head, twice as wide
};

inline ExpansionWindow expansion_window(const Span& s, const ExpansionConfig& cfg,
                                        int n) {
  if (s.r > n) throw std::invalid_argument("span exceeds sentence length");
  const int lam = cfg.lambda;
  ExpansionWindow w;
  w.exp_max = Span(std::max(1, s.l - lam), std::min(n, s.r + lam));
  w.window = Span(std::max(1, s.l - 2 * lam), std::min(n, s.r + 2 * lam));
  return w;
}

/// floor(x + 1/2): round half up for all signs.
inline int round_half_up(double x) {
  return static_cast<int>(std::floor(x + 0.5));
}

/// New boundaries l' = max(1, l + round(o_l)), r' = min(n, r + round(o_r)).
/// Empty when the result is inverted (l' > r'), which callers discard.
inline std::optional<Span> apply_offsets(const Span& s, const OffsetPair& o, int n) {
  const int l2 = std::max(1, s.l + round_half_up(o.o_l));
  const int r2 = std::min(n, s.r + round_half_up(o.o_r));
  if (l2 > r2) return std::nullopt;
  return Span(l2, r2);
}

}  // namespace seefew

#endif  // SEEFEW_SPAN_HPP_
