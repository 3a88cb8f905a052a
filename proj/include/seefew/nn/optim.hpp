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
#ifndef SEEFEW_NN_OPTIM_HPP_
#define SEEFEW_NN_OPTIM_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "seefew/nn/autograd.hpp"

namespace seefew::nn {

/// Linear warmup from 0 to peak_lr over warmup_steps, then linear decay back
/// to 0 at total_steps.
inline double lr_at(std::int64_t step, std::int64_t total_steps,
                    std::int64_t warmup_steps, double peak_lr) {
  if (step < 0 || step > total_steps) {
    throw std::invalid_argument("lr_at: step out of range");
  }
  if (warmup_steps >= total_steps) {
    throw std::invalid_argument("lr_at: warmup must be shorter than total");
  }
  if (step < warmup_steps) {
    return peak_lr * static_cast<double>(step) / static_cast<double>(warmup_steps);
  }
  return peak_lr * static_cast<double>(total_steps - step) /
         static_cast<double>(total_steps - warmup_steps);
}

/// AdamW with decoupled weight decay. Parameters flagged no_decay (biases,
/// layer norms) are exempt from decay.
class AdamW {
 public:
  explicit AdamW(double weight_decay = 0.01, double beta1 = 0.9,
                 double beta2 = 0.999, double eps = 1e-8)
      : weight_decay_(weight_decay), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(const std::vector<Param*>& params, double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (Param* p : params) {
      p->m = beta1_ * p->m + (1.0 - beta1_) * p->grad;
      p->v = beta2_ * p->v.array() + (1.0 - beta2_) * p->grad.array().square();
      const auto m_hat = p->m.array() / bc1;
      const auto v_hat = p->v.array() / bc2;
      p->value.array() -= lr * (m_hat / (v_hat.sqrt() + eps_));
      if (!p->no_decay && weight_decay_ > 0.0) {
        p->value.array() -= lr * weight_decay_ * p->value.array();
      }
      p->grad.setZero();
    }
  }

  std::int64_t steps_taken() const { return t_; }

 private:
  double weight_decay_;
  double beta1_;
  double beta2_;
  double eps_;
  std::int64_t t_ = 0;
};

}  // namespace seefew::nn

#endif  // SEEFEW_NN_OPTIM_HPP_
