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
#ifndef SEEFEW_NN_LAYERS_HPP_
#define SEEFEW_NN_LAYERS_HPP_

#include <string>
#include <utility>
#include <vector>

#include "seefew/nn/autograd.hpp"

namespace seefew::nn {

/// y = x W + b with W stored input-major (d_in x d_out).
struct Linear {
  Param w;
  Param b;

  Linear() = default;
  Linear(const std::string& name, Eigen::Index d_in, Eigen::Index d_out, Rng& rng)
      : w(name + ".w", normal_init(rng, d_in, d_out)),
        b(name + ".b", Mat::Zero(1, d_out), /*skip_decay=*/true) {}

  Var operator()(Graph& g, Var x) {
    return g.add_rowwise(g.matmul(x, g.param(w)), g.param(b));
  }

  void collect(std::vector<Param*>& out) {
    out.push_back(&w);
    out.push_back(&b);
  }
};

/// Two-layer perceptron, GELU before the final projection.
struct Mlp {
  Linear hidden;
  Linear out;

  Mlp() = default;
  Mlp(const std::string& name, Eigen::Index d_in, Eigen::Index d_hidden,
      Eigen::Index d_out, Rng& rng)
      : hidden(name + ".hidden", d_in, d_hidden, rng),
        out(name + ".out", d_hidden, d_out, rng) {}

  Var operator()(Graph& g, Var x) { return out(g, g.gelu(hidden(g, x))); }

  void collect(std::vector<Param*>& params) {
    hidden.collect(params);
    out.collect(params);
  }
};

struct LayerNorm {
  Param gain;
  Param bias;
  double eps = 1e-12;

  LayerNorm() = default;
  LayerNorm(const std::string& name, Eigen::Index d, double epsilon = 1e-12)
      : gain(name + ".gain", Mat::Ones(1, d), /*skip_decay=*/true),
        bias(name + ".bias", Mat::Zero(1, d), /*skip_decay=*/true),
        eps(epsilon) {}

  Var operator()(Graph& g, Var x) {
    return g.layer_norm(x, g.param(gain), g.param(bias), eps);
  }

  void collect(std::vector<Param*>& params) {
    params.push_back(&gain);
    params.push_back(&bias);
  }
};

}  // namespace seefew::nn

#endif  // SEEFEW_NN_LAYERS_HPP_
