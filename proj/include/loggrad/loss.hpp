#pragma once

#include <utility>

#include "loggrad/tensor.hpp"

namespace loggrad {

struct LossResult {
  double loss = 0.0;
  Tensor grad;
};

// Numerically stabilized softmax cross-entropy over a logit vector.
LossResult softmax_xent(const Tensor& logits, int label);

// Mean squared error over all elements; grad = 2(pred - target)/N.
LossResult mse_loss(const Tensor& pred, const Tensor& target);

}  // namespace loggrad
