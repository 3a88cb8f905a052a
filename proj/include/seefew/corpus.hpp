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
#ifndef SEEFEW_CORPUS_HPP_
#define SEEFEW_CORPUS_HPP_

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "seefew/span.hpp"

namespace seefew {

struct Sentence {
  std::vector<std::string> tokens;
  std::vector<Entity> entities;  // pairwise non-overlapping, spans in [1, n]
  std::string id;

  int length() const { return static_cast<int>(tokens.size()); }

  std::string text(const std::string& sep = " ") const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += sep;
      out += tokens[i];
    }
    return out;
  }

  /// Surface text of a span, joined with `sep` ("" for character corpora).
  std::string span_text(const Span& s, const std::string& sep = " ") const {
    if (s.r > length()) throw std::out_of_range("span exceeds sentence");
    std::string out;
    for (int i = s.l; i <= s.r; ++i) {
      if (i > s.l) out += sep;
      out += tokens[static_cast<std::size_t>(i - 1)];
    }
    return out;
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> cols;
  std::istringstream ss(line);
  std::string col;
  while (ss >> col) cols.push_back(col);
  return cols;
}

inline void flush_entity(std::vector<Entity>& out, std::optional<Entity>& open) {
  if (open) {
    out.push_back(*open);
    open.reset();
  }
}

}  // namespace detail

/// Parses BIO-tagged text: one "token tag" pair per line, blank line between
/// sentences. Tags are O, B-TYPE or I-TYPE. An I- tag without a preceding
/// B-/I- of the same type opens a new entity (repaired as B-).
inline std::vector<Sentence> parse_bio(std::istream& in) {
  std::vector<Sentence> sentences;
  Sentence cur;
  std::optional<Entity> open;
  std::size_t line_no = 0;
  std::string line;

  auto finish_sentence = [&]() {
    detail::flush_entity(cur.entities, open);
    if (!cur.tokens.empty()) {
      cur.id = "s" + std::to_string(sentences.size());
      sentences.push_back(std::move(cur));
      cur = Sentence{};
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto cols = detail::split_ws(line);
    if (cols.empty()) {
      finish_sentence();
      continue;
    }
    if (cols.size() != 2) {
      throw ParseError(line_no, "expected 'token tag', got " +
                                    std::to_string(cols.size()) + " columns");
    }
    const std::string& token = cols[0];
    const std::string& tag = cols[1];
    cur.tokens.push_back(token);
    const int pos = cur.length();

    if (tag == "O") {
      detail::flush_entity(cur.entities, open);
    } else if (tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-') {
      const std::string type = tag.substr(2);
      const bool continues =
          tag[0] == 'I' && open && open->type_name == type && open->span.r == pos - 1;
      if (continues) {
        open->span.r = pos;
      } else {
        detail::flush_entity(cur.entities, open);
        open = Entity{Span(pos, pos), type};
      }
    } else {
      throw ParseError(line_no, "unknown tag '" + tag + "'");
    }
  }
  finish_sentence();
  return sentences;
}

inline std::vector<Sentence> parse_bio_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return parse_bio(in);
}

/// Inverse of parse_bio for well-formed sentences.
inline void emit_bio(const std::vector<Sentence>& sentences, std::ostream& out) {
  for (const auto& sent : sentences) {
    std::vector<std::string> tags(sent.tokens.size(), "O");
    for (const auto& e : sent.entities) {
      tags[static_cast<std::size_t>(e.span.l - 1)] = "B-" + e.type_name;
      for (int i = e.span.l + 1; i <= e.span.r; ++i) {
        tags[static_cast<std::size_t>(i - 1)] = "I-" + e.type_name;
      }
    }
    for (std::size_t i = 0; i < sent.tokens.size(); ++i) {
      out << sent.tokens[i] << ' ' << tags[i] << '\n';
    }
    out << '\n';
  }
}

struct DatasetStats {
  std::size_t sentence_count = 0;
  std::size_t entity_count = 0;
  std::map<std::string, std::size_t> class_counts;
  double entities_per_sentence = 0.0;
};

inline DatasetStats dataset_stats(const std::vector<Sentence>& sentences) {
  if (sentences.empty()) throw std::invalid_argument("dataset_stats: empty corpus");
  DatasetStats st;
  st.sentence_count = sentences.size();
  for (const auto& sent : sentences) {
    st.entity_count += sent.entities.size();
    for (const auto& e : sent.entities) ++st.class_counts[e.type_name];
  }
  st.entities_per_sentence =
      static_cast<double>(st.entity_count) / static_cast<double>(st.sentence_count);
  return st;
}

struct FewShotSplit {
  std::vector<Sentence> train;
  std::vector<Sentence> valid;
  std::vector<Sentence> test;
  int k = 0;
  std::uint64_t sampling_seed = 0;
  int group_index = 0;
};

class SamplingError : public std::runtime_error {
 public:
  SamplingError(const std::string& class_name, const std::string& what)
      : std::runtime_error(what), class_name_(class_name) {}
  const std::string& class_name() const { return class_name_; }

 private:
  std::string class_name_;
};

namespace detail {

/// Greedy support-set selection: classes visited in ascending corpus
/// frequency; each pick maximizes instances of the pending class and
/// minimizes spill into already-satisfied classes, remaining ties resolved by
/// a seed-shuffled sentence order. Returns indices into `sentences`.
inline std::vector<std::size_t> greedy_select(
    const std::vector<Sentence>& sentences, const std::vector<bool>& available,
    int k, std::mt19937_64& rng) {
  std::map<std::string, std::size_t> pool_counts;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (!available[i]) continue;
    for (const auto& e : sentences[i].entities) ++pool_counts[e.type_name];
  }
  for (const auto& [cls, count] : pool_counts) {
    if (count < static_cast<std::size_t>(k)) {
      throw SamplingError(cls, "class '" + cls + "' has only " +
                                   std::to_string(count) + " instances, need " +
                                   std::to_string(k));
    }
  }

  // Rarest classes first; name breaks frequency ties.
  std::vector<std::pair<std::size_t, std::string>> order;
  for (const auto& [cls, count] : pool_counts) order.emplace_back(count, cls);
  std::sort(order.begin(), order.end());

  std::vector<std::size_t> shuffled(sentences.size());
  std::iota(shuffled.begin(), shuffled.end(), std::size_t{0});
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::vector<std::size_t> shuffle_rank(sentences.size());
  for (std::size_t pos = 0; pos < shuffled.size(); ++pos) {
    shuffle_rank[shuffled[pos]] = pos;
  }

  std::map<std::string, int> counts;
  std::vector<bool> taken(sentences.size(), false);
  std::vector<std::size_t> selected;

  auto count_of = [&](const Sentence& s, const std::string& cls) {
    int c = 0;
    for (const auto& e : s.entities) c += e.type_name == cls;
    return c;
  };

  for (const auto& [freq, cls] : order) {
    (void)freq;
    while (counts[cls] < k) {
      std::size_t best = sentences.size();
      int best_gain = 0;
      int best_spill = 0;
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (!available[i] || taken[i]) continue;
        const int gain = count_of(sentences[i], cls);
        if (gain == 0) continue;
        int spill = 0;
        for (const auto& e : sentences[i].entities) {
          if (e.type_name != cls && counts[e.type_name] >= k) ++spill;
        }
        const bool better =
            best == sentences.size() || gain > best_gain ||
            (gain == best_gain &&
             (spill < best_spill ||
              (spill == best_spill && shuffle_rank[i] < shuffle_rank[best])));
        if (better) {
          best = i;
          best_gain = gain;
          best_spill = spill;
        }
      }
      if (best == sentences.size()) {
        throw SamplingError(cls, "class '" + cls +
                                     "' cannot reach K from distinct sentences");
      }
      taken[best] = true;
      selected.push_back(best);
      for (const auto& e : sentences[best].entities) ++counts[e.type_name];
    }
  }
  return selected;
}

}  // namespace detail

/// Builds a K-shot split: train and valid each hold >= K instances of every
/// class, sampled greedily; test is the untouched remainder. Pure function of
/// (sentences, k, seed, group_index).
inline FewShotSplit greedy_sample(const std::vector<Sentence>& sentences, int k,
                                  std::uint64_t rng_seed, int group_index = 0) {
  if (k < 1) throw std::invalid_argument("greedy_sample: K must be >= 1");
  std::mt19937_64 rng(rng_seed);

  std::vector<bool> available(sentences.size(), true);
  const auto train_idx = detail::greedy_select(sentences, available, k, rng);
  for (auto i : train_idx) available[i] = false;
  const auto valid_idx = detail::greedy_select(sentences, available, k, rng);
  for (auto i : valid_idx) available[i] = false;

  FewShotSplit split;
  split.k = k;
  split.sampling_seed = rng_seed;
  split.group_index = group_index;
  for (auto i : train_idx) split.train.push_back(sentences[i]);
  for (auto i : valid_idx) split.valid.push_back(sentences[i]);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (available[i]) split.test.push_back(sentences[i]);
  }
  return split;
}

}  // namespace seefew

#endif  // SEEFEW_CORPUS_HPP_
