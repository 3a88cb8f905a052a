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

#include <functional>
#include <random>

#include "seefew/nn/autograd.hpp"
#include "seefew/nn/layers.hpp"
#include "seefew/nn/optim.hpp"
#include "seefew/nn/transformer.hpp"

using namespace seefew;
using nn::Graph;
using nn::Mat;
using nn::Param;
using nn::Var;

namespace {

using Forward = std::function<Var(Graph&)>;

double eval_loss(const Forward& fwd) {
  Graph g(/*track_gradients=*/false);
  return fwd(g).scalar();
}

/// Compares analytic gradients against central finite differences on up to
/// `samples` entries per parameter.
void check_grads(const std::vector<Param*>& params, const Forward& fwd,
                 int samples = 16, double h = 1e-6) {
  for (Param* p : params) p->grad.setZero();
  Graph g(/*track_gradients=*/true);
  Var loss = fwd(g);
  g.backward(loss);

  std::mt19937_64 pick(99);
  for (Param* p : params) {
    const Eigen::Index total = p->value.size();
    for (int s = 0; s < std::min<Eigen::Index>(samples, total); ++s) {
      const Eigen::Index flat =
          total <= samples ? s : static_cast<Eigen::Index>(pick() % total);
      const Eigen::Index i = flat / p->value.cols();
      const Eigen::Index j = flat % p->value.cols();
      const double keep = p->value(i, j);
      p->value(i, j) = keep + h;
      const double up = eval_loss(fwd);
      p->value(i, j) = keep - h;
      const double dn = eval_loss(fwd);
      p->value(i, j) = keep;
      const double numeric = (up - dn) / (2.0 * h);
      const double analytic = p->grad(i, j);
      INFO(p->name << "(" << i << "," << j << ") numeric=" << numeric
                   << " analytic=" << analytic);
      if (std::abs(numeric) > 1e-7) {
        CHECK_THAT(analytic, Catch::Matchers::WithinRel(numeric, 1e-5));
      } else {
        CHECK_THAT(analytic, Catch::Matchers::WithinAbs(numeric, 1e-7));
      }
    }
  }
}

/// Linear scalar readout so any-shaped output becomes a loss.
Var readout(Graph& g, Var out, std::uint64_t seed) {
  nn::Rng rng(seed);
  Var left = g.constant(nn::normal_init(rng, 1, out.rows(), 1.0));
  Var right = g.constant(nn::normal_init(rng, out.cols(), 1, 1.0));
  return g.matmul(g.matmul(left, out), right);
}

Param make_param(const std::string& name, Eigen::Index r, Eigen::Index c,
                 std::uint64_t seed) {
  nn::Rng rng(seed);
  return Param(name, nn::normal_init(rng, r, c, 0.5));
}

}  // namespace

TEST_CASE("gradients: affine + sigmoid chain") {
  Param w = make_param("w", 4, 3, 1);
  Param b = make_param("b", 1, 3, 2);
  Param x = make_param("x", 5, 4, 3);
  const Forward fwd = [&](Graph& g) {
    Var y = g.sigmoid(g.add_rowwise(g.matmul(g.param(x), g.param(w)), g.param(b)));
    return readout(g, y, 10);
  };
  check_grads({&w, &b, &x}, fwd);
}

TEST_CASE("gradients: gelu and tanh") {
  Param x = make_param("x", 3, 4, 4);
  check_grads({&x}, [&](Graph& g) { return readout(g, g.gelu(g.param(x)), 11); });
  check_grads({&x}, [&](Graph& g) { return readout(g, g.tanh(g.param(x)), 12); });
}

TEST_CASE("gradients: softmax rows") {
  Param x = make_param("x", 4, 5, 5);
  check_grads({&x},
              [&](Graph& g) { return readout(g, g.softmax_rows(g.param(x)), 13); });
}

TEST_CASE("gradients: layer norm") {
  Param x = make_param("x", 4, 6, 6);
  Param gain = make_param("gain", 1, 6, 7);
  Param bias = make_param("bias", 1, 6, 8);
  check_grads({&x, &gain, &bias}, [&](Graph& g) {
    return readout(g, g.layer_norm(g.param(x), g.param(gain), g.param(bias)), 14);
  });
}

TEST_CASE("gradients: slicing, pooling and stacking") {
  Param x = make_param("x", 6, 4, 9);
  const Forward fwd = [&](Graph& g) {
    Var v = g.param(x);
    Var a = g.rows_mean(v, 1, 3);
    Var b = g.row(v, 5);
    Var c = g.concat_cols(a, b);                       // 1 x 8
    Var d = g.stack_rows({c, g.concat_cols(b, a)});    // 2 x 8
    Var e = g.cols(d, 2, 5);
    Var f = g.rows(d, 0, 2);
    Var t = g.transpose(e);                            // 5 x 2
    Var merged = g.matmul(t, f);                       // 5 x 8
    Var picked = g.pick(merged, 2, 3);
    return g.sum({readout(g, merged, 15), g.scale(picked, 0.7)});
  };
  check_grads({&x}, fwd);
}

TEST_CASE("gradients: sub and add") {
  Param a = make_param("a", 3, 3, 20);
  Param b = make_param("b", 3, 3, 21);
  check_grads({&a, &b}, [&](Graph& g) {
    return readout(g, g.sub(g.add(g.param(a), g.param(b)), g.param(b)), 16);
  });
}

TEST_CASE("gradients: embedding gather") {
  Param table = make_param("emb", 7, 5, 10);
  const std::vector<int> ids{3, 0, 3, 6};
  check_grads({&table}, [&](Graph& g) {
    return readout(g, g.gather_rows(g.param(table), ids), 17);
  });
}

TEST_CASE("gradients: loss heads") {
  Param x = make_param("x", 4, 2, 11);
  nn::Rng trng(50);
  const Mat target = nn::normal_init(trng, 4, 2, 0.3);
  check_grads({&x}, [&](Graph& g) {
    return g.smooth_l1_sum(g.param(x), target);
  });

  Param logits = make_param("logits", 1, 2, 12);
  check_grads({&logits}, [&](Graph& g) {
    Var probs = g.softmax_rows(g.param(logits));
    Var p = g.clamp(g.pick(probs, 0, 0), 1e-7, 1.0 - 1e-7);
    Var le = g.focal(p, EntailLabel::kEntail, 2.0);
    Var ln = g.focal(p, EntailLabel::kNotEntail, 0.5);
    return g.sum({le, ln});
  });
}

TEST_CASE("gradients: dropout with a fixed mask") {
  Param x = make_param("x", 5, 5, 13);
  const Forward fwd = [&](Graph& g) {
    nn::Rng rng(123);  // same mask on every evaluation
    Var y = g.dropout(g.param(x), 0.4, rng, /*training=*/true);
    return readout(g, y, 18);
  };
  check_grads({&x}, fwd);
}

TEST_CASE("dropout is identity in eval mode and scales in train mode") {
  Param x = make_param("x", 20, 20, 14);
  Graph g(false);
  nn::Rng rng(1);
  Var eval_out = g.dropout(g.param(x), 0.5, rng, /*training=*/false);
  CHECK(eval_out.value() == x.value);

  Var train_out = g.dropout(g.param(x), 0.5, rng, /*training=*/true);
  int zeros = 0;
  for (Eigen::Index i = 0; i < 20; ++i) {
    for (Eigen::Index j = 0; j < 20; ++j) {
      const double v = train_out.value()(i, j);
      if (v == 0.0) {
        ++zeros;
      } else {
        CHECK_THAT(v, Catch::Matchers::WithinRel(2.0 * x.value(i, j), 1e-12));
      }
    }
  }
  CHECK(zeros > 100);
  CHECK(zeros < 300);
}

TEST_CASE("gradients: tiny transformer end to end") {
  nn::TransformerConfig tc;
  tc.vocab_size = 11;
  tc.hidden = 4;
  tc.layers = 2;
  tc.heads = 2;
  tc.ffn = 8;
  tc.max_positions = 16;
  tc.dropout = 0.0;
  nn::Rng init(3);
  nn::TransformerEncoder enc(tc, init);
  std::vector<Param*> params;
  enc.collect(params);

  const std::vector<int> ids{1, 4, 9, 2};
  const std::vector<int> types{0, 0, 1, 1};
  const Forward fwd = [&](Graph& g) {
    nn::Rng rng(0);
    return readout(g, enc.forward(g, ids, types, /*training=*/false, rng), 19);
  };
  check_grads(params, fwd, /*samples=*/4, /*h=*/1e-5);
}

TEST_CASE("transformer forward is deterministic and shaped") {
  nn::TransformerConfig tc;
  tc.vocab_size = 9;
  tc.hidden = 6;
  tc.layers = 1;
  tc.heads = 3;
  tc.ffn = 12;
  tc.max_positions = 8;
  nn::Rng init(4);
  nn::TransformerEncoder enc(tc, init);

  const std::vector<int> ids{2, 5, 7};
  const std::vector<int> types{0, 0, 0};
  Graph g1(false), g2(false);
  nn::Rng r1(0), r2(0);
  const Mat a = enc.forward(g1, ids, types, false, r1).value();
  const Mat b = enc.forward(g2, ids, types, false, r2).value();
  CHECK(a == b);
  CHECK(a.rows() == 3);
  CHECK(a.cols() == 6);
  CHECK_THROWS_AS(enc.forward(g1, std::vector<int>(9, 1), std::vector<int>(9, 0),
                              false, r1),
                  std::invalid_argument);
}

TEST_CASE("adamw moves parameters against the gradient") {
  Param w("w", Mat::Constant(1, 1, 2.0));
  nn::AdamW opt(/*weight_decay=*/0.0);
  for (int i = 0; i < 200; ++i) {
    Graph g(true);
    // loss = (w - 1)^2 via smooth_l1 on small values: use matmul square.
    Var v = g.param(w);
    Var diff = g.sub(v, g.constant(Mat::Constant(1, 1, 1.0)));
    Var loss = g.matmul(diff, diff);
    g.backward(loss);
    opt.step({&w}, 0.05);
  }
  CHECK_THAT(w.value(0, 0), Catch::Matchers::WithinAbs(1.0, 1e-2));
}

TEST_CASE("lr_at follows linear warmup and decay") {
  CHECK(nn::lr_at(0, 100, 10, 1.0) == 0.0);
  CHECK(nn::lr_at(10, 100, 10, 1.0) == 1.0);
  CHECK_THAT(nn::lr_at(55, 100, 10, 1.0), Catch::Matchers::WithinAbs(0.5, 1e-12));
  CHECK(nn::lr_at(100, 100, 10, 1.0) == 0.0);
  CHECK_THAT(nn::lr_at(5, 100, 10, 3e-5), Catch::Matchers::WithinRel(1.5e-5, 1e-12));
  CHECK_THROWS_AS(nn::lr_at(101, 100, 10, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(nn::lr_at(5, 10, 10, 1.0), std::invalid_argument);
}

TEST_CASE("backward requires a tracked scalar loss") {
  Graph g(false);
  Var c = g.constant(Mat::Zero(1, 1));
  CHECK_THROWS_AS(g.backward(c), std::logic_error);

  Graph g2(true);
  Param w = make_param("w", 2, 2, 30);
  Var m = g2.param(w);
  CHECK_THROWS_AS(g2.backward(m), std::invalid_argument);
}
