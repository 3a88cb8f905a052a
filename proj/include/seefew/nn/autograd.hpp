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
#ifndef SEEFEW_NN_AUTOGRAD_HPP_
#define SEEFEW_NN_AUTOGRAD_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seefew/losses.hpp"

namespace seefew::nn {

using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/// Trainable tensor plus its gradient and AdamW moment buffers.
struct Param {
  Mat value;
  Mat grad;
  Mat m;
  Mat v;
  std::string name;
  bool no_decay = false;  // biases and layer-norm parameters skip weight decay

  Param() = default;
  Param(std::string n, Mat init, bool skip_decay = false)
      : value(std::move(init)), name(std::move(n)), no_decay(skip_decay) {
    grad = Mat::Zero(value.rows(), value.cols());
    m = grad;
    v = grad;
  }
};

inline Mat normal_init(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                       double stddev = 0.02) {
  std::normal_distribution<double> dist(0.0, stddev);
  Mat out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = dist(rng);
  }
  return out;
}

struct Node {
  Mat val;                  // owned output; unused when pval set
  const Mat* pval = nullptr;
  Mat grad;                 // allocated lazily on first accumulation
  Mat* pgrad = nullptr;     // parameter gradient sink
  bool needs = false;       // gradient should flow into this node
  std::function<void(Node&)> back;

  const Mat& value() const { return pval ? *pval : val; }
  bool has_grad() const { return grad.size() != 0; }
};

/// Eager define-by-run tape. Ops compute values immediately so callers can
/// branch on intermediate results (seed selection, candidate rounding) while
/// still recording the backward pass.
class Graph {
 public:
  struct Var {
    Node* node = nullptr;
    const Mat& value() const { return node->value(); }
    double scalar() const { return node->value()(0, 0); }
    Eigen::Index rows() const { return node->value().rows(); }
    Eigen::Index cols() const { return node->value().cols(); }
  };

  explicit Graph(bool track_gradients = true) : track_(track_gradients) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool tracking() const { return track_; }
  std::size_t size() const { return nodes_.size(); }

  Var constant(Mat m) {
    Node* n = make();
    n->val = std::move(m);
    return {n};
  }

  Var param(Param& p) {
    Node* n = make();
    n->pval = &p.value;
    if (track_) {
      n->pgrad = &p.grad;
      n->needs = true;
    }
    return {n};
  }

  Var matmul(Var a, Var b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
    Node* n = make();
    n->val.noalias() = a.value() * b.value();
    if (wire(n, {a, b})) {
      Node *pa = a.node, *pb = b.node;
      n->back = [pa, pb](Node& self) {
        if (pa->needs) gsink(pa).noalias() += self.grad * pb->value().transpose();
        if (pb->needs) gsink(pb).noalias() += pa->value().transpose() * self.grad;
      };
    }
    return {n};
  }

  Var add(Var a, Var b) {
    check_same_shape(a, b, "add");
    Node* n = make();
    n->val = a.value() + b.value();
    if (wire(n, {a, b})) {
      Node *pa = a.node, *pb = b.node;
      n->back = [pa, pb](Node& self) {
        if (pa->needs) gsink(pa) += self.grad;
        if (pb->needs) gsink(pb) += self.grad;
      };
    }
    return {n};
  }

  Var sub(Var a, Var b) {
    check_same_shape(a, b, "sub");
    Node* n = make();
    n->val = a.value() - b.value();
    if (wire(n, {a, b})) {
      Node *pa = a.node, *pb = b.node;
      n->back = [pa, pb](Node& self) {
        if (pa->needs) gsink(pa) += self.grad;
        if (pb->needs) gsink(pb) -= self.grad;
      };
    }
    return {n};
  }

  /// Broadcasts a 1 x d row over every row of a.
  Var add_rowwise(Var a, Var row) {
    if (row.rows() != 1 || row.cols() != a.cols()) {
      throw std::invalid_argument("add_rowwise: shape mismatch");
    }
    Node* n = make();
    n->val = a.value().rowwise() + row.value().row(0);
    if (wire(n, {a, row})) {
      Node *pa = a.node, *pr = row.node;
      n->back = [pa, pr](Node& self) {
        if (pa->needs) gsink(pa) += self.grad;
        if (pr->needs) gsink(pr) += self.grad.colwise().sum();
      };
    }
    return {n};
  }

  Var scale(Var a, double c) {
    Node* n = make();
    n->val = a.value() * c;
    if (wire(n, {a})) {
      Node* pa = a.node;
      n->back = [pa, c](Node& self) { gsink(pa) += self.grad * c; };
    }
    return {n};
  }

  Var transpose(Var a) {
    Node* n = make();
    n->val = a.value().transpose();
    if (wire(n, {a})) {
      Node* pa = a.node;
      n->back = [pa](Node& self) { gsink(pa) += self.grad.transpose(); };
    }
    return {n};
  }

  Var concat_cols(Var a, Var b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("concat_cols: row mismatch");
    Node* n = make();
    n->val.resize(a.rows(), a.cols() + b.cols());
    n->val << a.value(), b.value();
    if (wire(n, {a, b})) {
      Node *pa = a.node, *pb = b.node;
      const Eigen::Index ca = a.cols(), cb = b.cols();
      n->back = [pa, pb, ca, cb](Node& self) {
        if (pa->needs) gsink(pa) += self.grad.leftCols(ca);
        if (pb->needs) gsink(pb) += self.grad.rightCols(cb);
      };
    }
    return {n};
  }

  /// Stacks m row vectors (each 1 x d) into one m x d matrix.
  Var stack_rows(const std::vector<Var>& rows) {
    if (rows.empty()) throw std::invalid_argument("stack_rows: empty input");
    const Eigen::Index d = rows[0].cols();
    Node* n = make();
    n->val.resize(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].rows() != 1 || rows[i].cols() != d) {
        throw std::invalid_argument("stack_rows: rows must share shape 1 x d");
      }
      n->val.row(static_cast<Eigen::Index>(i)) = rows[i].value().row(0);
    }
    if (wire(n, rows)) {
      std::vector<Node*> parents;
      parents.reserve(rows.size());
      for (auto v : rows) parents.push_back(v.node);
      n->back = [parents](Node& self) {
        for (std::size_t i = 0; i < parents.size(); ++i) {
          if (parents[i]->needs) {
            gsink(parents[i]).row(0) += self.grad.row(static_cast<Eigen::Index>(i));
          }
        }
      };
    }
    return {n};
  }

  /// Mean of rows r0..r1 inclusive (0-based), yielding 1 x d.
  Var rows_mean(Var a, Eigen::Index r0, Eigen::Index r1) {
    if (r0 < 0 || r1 < r0 || r1 >= a.rows()) {
      throw std::out_of_range("rows_mean: row range out of bounds");
    }
    const Eigen::Index cnt = r1 - r0 + 1;
    Node* n = make();
    n->val = a.value().middleRows(r0, cnt).colwise().mean();
    if (wire(n, {a})) {
      Node* pa = a.node;
      n->back = [pa, r0, cnt](Node& self) {
        gsink(pa).middleRows(r0, cnt).rowwise() +=
            (self.grad.row(0) / static_cast<double>(cnt));
      };
    }
    return {n};
  }

  Var row(Var a, Eigen::Index i) {
    if (i < 0 || i >= a.rows()) throw std::out_of_range("row: index out of bounds");
    Node* n = make();
    n->val = a.value().row(i);
    if (wire(n, {a})) {
      Node* pa = a.node;
      n->back = [pa, i](Node& self) { gsink(pa).row(i) += self.grad.row(0); };
    }
    return {n};
  }

  Var rows(Var a, Eigen::Index r0, Eigen::Index len) {
    if (r0 < 0 || len < 1 || r0 + len > a.rows()) {
      throw std::out_of_range("rows: row range out of bounds");
    }
    Node* n = make();
    n->val = a.value().middleRows(r0, len);
    if (wire(n, {a})) {
      Node* pa = a.node;
      n->back = [pa, r0, len](Node& self) {
        gsink(pa).middleRows(r0, len) += self.grad;
      };
    }
    return {n};
  }

  Var cols(Var a, Eigen::Index c0, Eigen::Index len) {
    if (c0 < 0 || len < 1 || c0 + len > a.cols()) {
      throw std::out_of_range("cols: column range out of bounds");
    }
    Node* n = make();
    n->val = a.value().middleCols(c0, len);
    if (wire(n, {a})) {
      Node* pa = a.node;
      n->back = [pa, c0, len](Node& self) {
        gsink(pa).middleCols(c0, len) += self.grad;
      };
    }
    return {n};
  }

  Var pick(Var a, Eigen::Index i, Eigen::Index j) {
    if (i < 0 || i >= a.rows() || j < 0 || j >= a.cols()) {
      throw std::out_of_range("pick: index out of bounds");
    }
    Node* n = make();
    n->val = Mat::Constant(1, 1, a.value()(i, j));
    if (wire(n, {a})) {
      Node* pa = a.node;
      n->back = [pa, i, j](Node& self) { gsink(pa)(i, j) += self.grad(0, 0); };
    }
    return {n};
  }

  Var sigmoid(Var a) {
    Node* n = make();
    n->val = a.value().unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
    if (wire(n, {a})) {
      Node* pa = a.node;
      n->back = [pa](Node& self) {
        const Mat& s = self.value();
        gsink(pa).array() +=
            self.grad.array() * s.array() * (1.0 - s.array());
      };
    }
    return {n};
  }

  Var gelu(Var a) {
    Node* n = make();
    n->val = a.value().unaryExpr(
        [](double x) { return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2)); });
    if (wire(n, {a})) {
      Node* pa = a.node;
      Mat in = a.value();
      n->back = [pa, in = std::move(in)](Node& self) {
        gsink(pa).array() +=
            self.grad.array() *
            in.unaryExpr([](double x) {
                return 0.5 * (1.0 + std::erf(x * kInvSqrt2)) +
                       x * std::exp(-0.5 * x * x) * kInvSqrt2Pi;
              }).array();
      };
    }
    return {n};
  }

  Var tanh(Var a) {
    Node* n = make();
    n->val = a.value().unaryExpr([](double x) { return std::tanh(x); });
    if (wire(n, {a})) {
      Node* pa = a.node;
      n->back = [pa](Node& self) {
        gsink(pa).array() +=
            self.grad.array() * (1.0 - self.value().array().square());
      };
    }
    return {n};
  }

  Var softmax_rows(Var a) {
    Node* n = make();
    n->val = a.value();
    for (Eigen::Index i = 0; i < n->val.rows(); ++i) {
      auto row = n->val.row(i);
      row.array() -= row.maxCoeff();
      row = row.array().exp();
      row /= row.sum();
    }
    if (wire(n, {a})) {
      Node* pa = a.node;
      n->back = [pa](Node& self) {
        Mat& sink = gsink(pa);
        for (Eigen::Index i = 0; i < self.value().rows(); ++i) {
          const auto s = self.value().row(i).array();
          const auto g = self.grad.row(i).array();
          const double dot = (s * g).sum();
          sink.row(i).array() += s * (g - dot);
        }
      };
    }
    return {n};
  }

  /// Per-row layer normalization with learned gain/bias (each 1 x d).
  Var layer_norm(Var a, Var gain, Var bias, double eps = 1e-12) {
    if (gain.rows() != 1 || gain.cols() != a.cols() || bias.rows() != 1 ||
        bias.cols() != a.cols()) {
      throw std::invalid_argument("layer_norm: gain/bias must be 1 x d");
    }
    Node* n = make();
    const Eigen::Index rows = a.rows(), d = a.cols();
    Mat xhat(rows, d);
    Eigen::VectorXd inv_std(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const auto x = a.value().row(i).array();
      const double mu = x.mean();
      const double var = (x - mu).square().mean();
      inv_std(i) = 1.0 / std::sqrt(var + eps);
      xhat.row(i) = ((x - mu) * inv_std(i)).matrix();
    }
    n->val = (xhat.array().rowwise() * gain.value().row(0).array()).matrix();
    n->val.rowwise() += bias.value().row(0);
    if (wire(n, {a, gain, bias})) {
      Node *pa = a.node, *pg = gain.node, *pb = bias.node;
      n->back = [pa, pg, pb, xhat = std::move(xhat),
                 inv_std = std::move(inv_std)](Node& self) {
        const Eigen::Index rows = xhat.rows();
        const double d = static_cast<double>(xhat.cols());
        if (pg->needs) {
          gsink(pg).row(0) += (self.grad.array() * xhat.array()).colwise().sum().matrix();
        }
        if (pb->needs) gsink(pb).row(0) += self.grad.colwise().sum();
        if (pa->needs) {
          Mat& sink = gsink(pa);
          for (Eigen::Index i = 0; i < rows; ++i) {
            const auto gy = self.grad.row(i).array();
            const auto gn = pg->value().row(0).array();
            const auto xh = xhat.row(i).array();
            const auto dxhat = gy * gn;
            const double m1 = dxhat.sum() / d;
            const double m2 = (dxhat * xh).sum() / d;
            sink.row(i).array() += inv_std(i) * (dxhat - m1 - xh * m2);
          }
        }
      };
    }
    return {n};
  }

  /// Inverted dropout: active only while training.
  Var dropout(Var a, double rate, Rng& rng, bool training) {
    if (!training || rate <= 0.0) return a;
    if (rate >= 1.0) throw std::invalid_argument("dropout: rate must be < 1");
    std::bernoulli_distribution keep(1.0 - rate);
    Mat mask(a.rows(), a.cols());
    const double scale = 1.0 / (1.0 - rate);
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      for (Eigen::Index j = 0; j < mask.cols(); ++j) {
        mask(i, j) = keep(rng) ? scale : 0.0;
      }
    }
    Node* n = make();
    n->val = a.value().cwiseProduct(mask);
    if (wire(n, {a})) {
      Node* pa = a.node;
      n->back = [pa, mask = std::move(mask)](Node& self) {
        gsink(pa) += self.grad.cwiseProduct(mask);
      };
    }
    return {n};
  }

  /// Embedding lookup: one output row per id.
  Var gather_rows(Var table, const std::vector<int>& ids) {
    Node* n = make();
    n->val.resize(static_cast<Eigen::Index>(ids.size()), table.cols());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] < 0 || ids[i] >= table.rows()) {
        throw std::out_of_range("gather_rows: id out of range");
      }
      n->val.row(static_cast<Eigen::Index>(i)) = table.value().row(ids[i]);
    }
    if (wire(n, {table})) {
      Node* pt = table.node;
      n->back = [pt, ids](Node& self) {
        Mat& sink = gsink(pt);
        for (std::size_t i = 0; i < ids.size(); ++i) {
          sink.row(ids[i]) += self.grad.row(static_cast<Eigen::Index>(i));
        }
      };
    }
    return {n};
  }

  Var clamp(Var a, double lo, double hi) {
    Node* n = make();
    n->val = a.value().cwiseMax(lo).cwiseMin(hi);
    if (wire(n, {a})) {
      Node* pa = a.node;
      Mat in = a.value();
      n->back = [pa, lo, hi, in = std::move(in)](Node& self) {
        Mat& sink = gsink(pa);
        for (Eigen::Index i = 0; i < in.rows(); ++i) {
          for (Eigen::Index j = 0; j < in.cols(); ++j) {
            if (in(i, j) > lo && in(i, j) < hi) sink(i, j) += self.grad(i, j);
          }
        }
      };
    }
    return {n};
  }

  /// Sum of scalar (1 x 1) vars.
  Var sum(const std::vector<Var>& terms) {
    if (terms.empty()) throw std::invalid_argument("sum: empty input");
    Node* n = make();
    double total = 0.0;
    for (auto v : terms) {
      if (v.rows() != 1 || v.cols() != 1) {
        throw std::invalid_argument("sum: terms must be scalars");
      }
      total += v.scalar();
    }
    n->val = Mat::Constant(1, 1, total);
    if (wire(n, terms)) {
      std::vector<Node*> parents;
      parents.reserve(terms.size());
      for (auto v : terms) parents.push_back(v.node);
      n->back = [parents](Node& self) {
        for (Node* p : parents) {
          if (p->needs) gsink(p)(0, 0) += self.grad(0, 0);
        }
      };
    }
    return {n};
  }

  /// Sum of SmoothL1(target, pred) over every entry; target is constant.
  Var smooth_l1_sum(Var pred, Mat target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
      throw std::invalid_argument("smooth_l1_sum: shape mismatch");
    }
    Node* n = make();
    double total = 0.0;
    for (Eigen::Index i = 0; i < target.rows(); ++i) {
      for (Eigen::Index j = 0; j < target.cols(); ++j) {
        total += smooth_l1(target(i, j), pred.value()(i, j));
      }
    }
    n->val = Mat::Constant(1, 1, total);
    if (wire(n, {pred})) {
      Node* pp = pred.node;
      Mat in = pred.value();
      n->back = [pp, target = std::move(target), in = std::move(in)](Node& self) {
        Mat& sink = gsink(pp);
        const double g = self.grad(0, 0);
        for (Eigen::Index i = 0; i < target.rows(); ++i) {
          for (Eigen::Index j = 0; j < target.cols(); ++j) {
            sink(i, j) += g * smooth_l1_grad_pred(target(i, j), in(i, j));
          }
        }
      };
    }
    return {n};
  }

  /// Focal loss on a scalar entail probability.
  Var focal(Var p, EntailLabel label, double gamma) {
    if (p.rows() != 1 || p.cols() != 1) {
      throw std::invalid_argument("focal: p must be scalar");
    }
    Node* n = make();
    const double pv = p.scalar();
    n->val = Mat::Constant(1, 1, focal_loss(pv, label, gamma));
    if (wire(n, {p})) {
      Node* pp = p.node;
      n->back = [pp, pv, label, gamma](Node& self) {
        gsink(pp)(0, 0) += self.grad(0, 0) * focal_loss_grad(pv, label, gamma);
      };
    }
    return {n};
  }

  void backward(Var loss) {
    if (!track_) throw std::logic_error("backward: gradients are not tracked");
    if (loss.rows() != 1 || loss.cols() != 1) {
      throw std::invalid_argument("backward: loss must be scalar");
    }
    if (!loss.node->needs) return;  // no parameters on the path
    if (!loss.node->has_grad()) {
      loss.node->grad = Mat::Zero(1, 1);
    }
    loss.node->grad(0, 0) += 1.0;
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
      Node& n = **it;
      if (n.back && n.has_grad()) n.back(n);
    }
  }

 private:
  static constexpr double kInvSqrt2 = 0.7071067811865475244;
  static constexpr double kInvSqrt2Pi = 0.3989422804014326779;

  Node* make() {
    nodes_.push_back(std::make_unique<Node>());
    return nodes_.back().get();
  }

  /// Marks n as needing gradient if any parent does. Returns whether a
  /// backward closure should be installed.
  bool wire(Node* n, const std::vector<Var>& parents) {
    if (!track_) return false;
    for (auto p : parents) {
      if (p.node->needs) {
        n->needs = true;
        return true;
      }
    }
    return false;
  }

  static Mat& gsink(Node* n) {
    if (n->pgrad) return *n->pgrad;
    if (!n->has_grad()) {
      n->grad = Mat::Zero(n->value().rows(), n->value().cols());
    }
    return n->grad;
  }

  static void check_same_shape(Var a, Var b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      throw std::invalid_argument(std::string(op) + ": shape mismatch");
    }
  }

  std::vector<std::unique_ptr<Node>> nodes_;
  bool track_;
};

using Var = Graph::Var;

}  // namespace seefew::nn

#endif  // SEEFEW_NN_AUTOGRAD_HPP_
