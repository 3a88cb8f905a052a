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
#ifndef SEEFEW_TEXT_HPP_
#define SEEFEW_TEXT_HPP_

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

namespace seefew {

inline std::uint64_t fnv1a_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Splits a UTF-8 string into individual code points (as byte strings).
/// Invalid lead bytes are passed through one byte at a time.
inline std::vector<std::string> utf8_chars(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if ((c & 0xE0) == 0xC0) len = 2;
    else if ((c & 0xF0) == 0xE0) len = 3;
    else if ((c & 0xF8) == 0xF0) len = 4;
    if (i + len > s.size()) len = 1;
    out.push_back(s.substr(i, len));
    i += len;
  }
  return out;
}

inline std::uint32_t utf8_codepoint(const std::string& ch) {
  if (ch.empty()) return 0;
  const unsigned char c0 = static_cast<unsigned char>(ch[0]);
  if (c0 < 0x80) return c0;
  if ((c0 & 0xE0) == 0xC0 && ch.size() >= 2) {
    return ((c0 & 0x1Fu) << 6) | (static_cast<unsigned char>(ch[1]) & 0x3Fu);
  }
  if ((c0 & 0xF0) == 0xE0 && ch.size() >= 3) {
    return ((c0 & 0x0Fu) << 12) | ((static_cast<unsigned char>(ch[1]) & 0x3Fu) << 6) |
           (static_cast<unsigned char>(ch[2]) & 0x3Fu);
  }
  if ((c0 & 0xF8) == 0xF0 && ch.size() >= 4) {
    return ((c0 & 0x07u) << 18) | ((static_cast<unsigned char>(ch[1]) & 0x3Fu) << 12) |
           ((static_cast<unsigned char>(ch[2]) & 0x3Fu) << 6) |
           (static_cast<unsigned char>(ch[3]) & 0x3Fu);
  }
  return c0;
}

inline bool is_cjk_codepoint(std::uint32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
         (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x20000 && cp <= 0x2A6DF);
}

inline std::string ascii_lower(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

inline bool is_ascii_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

}  // namespace seefew

#endif  // SEEFEW_TEXT_HPP_
