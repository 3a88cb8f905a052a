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
#ifndef SEEFEW_SAFETENSORS_HPP_
#define SEEFEW_SAFETENSORS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace seefew {

/// Reads a .safetensors file into named row-major matrices. 1-D tensors load
/// as 1 x n. Supports F32 and F64 payloads, which covers published BERT-style
/// checkpoints.
inline std::map<std::string, Eigen::MatrixXd> load_safetensors(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open safetensors file: " + path);

  std::uint64_t header_len = 0;
  in.read(reinterpret_cast<char*>(&header_len), 8);
  if (!in || header_len == 0 || header_len > (1ull << 30)) {
    throw std::runtime_error("safetensors: bad header length in " + path);
  }
  std::string header(header_len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw std::runtime_error("safetensors: truncated header in " + path);

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("safetensors: invalid header JSON: " +
                             std::string(e.what()));
  }

  std::vector<char> data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());

  std::map<std::string, Eigen::MatrixXd> tensors;
  for (const auto& [name, info] : meta.items()) {
    if (name == "__metadata__") continue;
    const std::string dtype = info.at("dtype").get<std::string>();
    const auto shape = info.at("shape").get<std::vector<std::int64_t>>();
    const auto offsets = info.at("data_offsets").get<std::vector<std::uint64_t>>();
    if (offsets.size() != 2 || offsets[1] > data.size() || offsets[0] > offsets[1]) {
      throw std::runtime_error("safetensors: bad offsets for tensor " + name);
    }
    Eigen::Index rows = 1, cols = 1;
    if (shape.size() == 1) {
      cols = shape[0];
    } else if (shape.size() == 2) {
      rows = shape[0];
      cols = shape[1];
    } else {
      throw std::runtime_error("safetensors: tensor " + name +
                               " has unsupported rank " +
                               std::to_string(shape.size()));
    }
    const std::size_t count = static_cast<std::size_t>(rows * cols);
    const char* src = data.data() + offsets[0];
    const std::size_t bytes = offsets[1] - offsets[0];
    Eigen::MatrixXd m(rows, cols);
    if (dtype == "F32") {
      if (bytes != count * 4) {
        throw std::runtime_error("safetensors: size mismatch for " + name);
      }
      for (std::size_t i = 0; i < count; ++i) {
        float f;
        std::memcpy(&f, src + i * 4, 4);
        m(static_cast<Eigen::Index>(i) / cols, static_cast<Eigen::Index>(i) % cols) =
            static_cast<double>(f);
      }
    } else if (dtype == "F64") {
      if (bytes != count * 8) {
        throw std::runtime_error("safetensors: size mismatch for " + name);
      }
      for (std::size_t i = 0; i < count; ++i) {
        double d;
        std::memcpy(&d, src + i * 8, 8);
        m(static_cast<Eigen::Index>(i) / cols, static_cast<Eigen::Index>(i) % cols) = d;
      }
    } else {
      throw std::runtime_error("safetensors: unsupported dtype " + dtype +
                               " for tensor " + name);
    }
    tensors.emplace(name, std::move(m));
  }
  return tensors;
}

/// Writes matrices as an F64 safetensors file (used for fine-tuned weights
/// and test fixtures).
inline void save_safetensors(const std::string& path,
                             const std::map<std::string, Eigen::MatrixXd>& tensors) {
  nlohmann::json meta = nlohmann::json::object();
  std::uint64_t offset = 0;
  for (const auto& [name, m] : tensors) {
    const std::uint64_t bytes = static_cast<std::uint64_t>(m.size()) * 8;
    meta[name] = {{"dtype", "F64"},
                  {"shape", {m.rows(), m.cols()}},
                  {"data_offsets", {offset, offset + bytes}}};
    offset += bytes;
  }
  const std::string header = meta.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write safetensors file: " + path);
  const std::uint64_t header_len = header.size();
  out.write(reinterpret_cast<const char*>(&header_len), 8);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const auto& [name, m] : tensors) {
    (void)name;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double d = m(i, j);
        out.write(reinterpret_cast<const char*>(&d), 8);
      }
    }
  }
}

}  // namespace seefew

#endif  // SEEFEW_SAFETENSORS_HPP_
