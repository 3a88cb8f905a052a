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
#ifndef SEEFEW_WORDPIECE_HPP_
#define SEEFEW_WORDPIECE_HPP_

#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "seefew/text.hpp"

namespace seefew {

/// WordPiece vocabulary with BERT-style basic tokenization: optional ASCII
/// lowercasing, punctuation and CJK characters split off, then greedy
/// longest-prefix matching with "##" continuations.
class WordPieceVocab {
 public:
  static WordPieceVocab load_file(const std::string& path, bool lowercase) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open vocab file: " + path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      tokens.push_back(line);
    }
    return WordPieceVocab(tokens, lowercase);
  }

  WordPieceVocab(const std::vector<std::string>& tokens, bool lowercase)
      : lowercase_(lowercase) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      token_to_id_.emplace(tokens[i], static_cast<int>(i));
    }
    cls_id_ = require("[CLS]");
    sep_id_ = require("[SEP]");
    unk_id_ = require("[UNK]");
  }

  int size() const { return static_cast<int>(token_to_id_.size()); }
  int cls_id() const { return cls_id_; }
  int sep_id() const { return sep_id_; }
  int unk_id() const { return unk_id_; }

  /// Piece ids for one whitespace-delimited word.
  std::vector<int> word_pieces(const std::string& word) const {
    std::vector<int> out;
    for (const auto& chunk : basic_split(word)) {
      wordpiece(chunk, out);
    }
    if (out.empty()) out.push_back(unk_id_);
    return out;
  }

 private:
  int require(const std::string& token) const {
    const auto it = token_to_id_.find(token);
    if (it == token_to_id_.end()) {
      throw std::runtime_error("vocab is missing required token " + token);
    }
    return it->second;
  }

  /// Splits a word at punctuation and CJK boundaries, lowercasing first when
  /// configured.
  std::vector<std::string> basic_split(const std::string& word) const {
    const std::string w = lowercase_ ? ascii_lower(word) : word;
    std::vector<std::string> chunks;
    std::string cur;
    for (const auto& ch : utf8_chars(w)) {
      const bool standalone =
          (ch.size() == 1 && is_ascii_punct(ch[0])) ||
          is_cjk_codepoint(utf8_codepoint(ch));
      if (standalone) {
        if (!cur.empty()) chunks.push_back(std::move(cur));
        cur.clear();
        chunks.push_back(ch);
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) chunks.push_back(std::move(cur));
    return chunks;
  }

  void wordpiece(const std::string& chunk, std::vector<int>& out) const {
    const auto chars = utf8_chars(chunk);
    if (chars.empty()) return;
    if (chars.size() > 100) {
      out.push_back(unk_id_);
      return;
    }
    std::vector<int> pieces;
    std::size_t start = 0;
    while (start < chars.size()) {
      std::size_t end = chars.size();
      int found = -1;
      while (end > start) {
        std::string sub = start > 0 ? "##" : "";
        for (std::size_t i = start; i < end; ++i) sub += chars[i];
        const auto it = token_to_id_.find(sub);
        if (it != token_to_id_.end()) {
          found = it->second;
          break;
        }
        --end;
      }
      if (found < 0) {
        out.push_back(unk_id_);
        return;
      }
      pieces.push_back(found);
      start = end;
    }
    out.insert(out.end(), pieces.begin(), pieces.end());
  }

  std::unordered_map<std::string, int> token_to_id_;
  bool lowercase_;
  int cls_id_ = 0;
  int sep_id_ = 0;
  int unk_id_ = 0;
};

}  // namespace seefew

#endif  // SEEFEW_WORDPIECE_HPP_
