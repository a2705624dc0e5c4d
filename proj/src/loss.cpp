#include "loggrad/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loggrad {

LossResult softmax_xent(const Tensor& logits, int label) {
  const size_t n = logits.size();
  if (label < 0 || static_cast<size_t>(label) >= n)
    throw std::invalid_argument("softmax_xent: label out of range");

  double mx = *std::max_element(logits.data.begin(), logits.data.end());
  double denom = 0.0;
  for (double v : logits.data) denom += std::exp(v - mx);
  double log_denom = std::log(denom);

  LossResult r;
  r.loss = -(logits.data[label] - mx - log_denom);
  r.grad = Tensor(logits.shape);
  for (size_t i = 0; i < n; ++i) {
    double p = std::exp(logits.data[i] - mx) / denom;
    r.grad.data[i] = p - (static_cast<size_t>(label) == i ? 1.0 : 0.0);
  }
  return r;
}

LossResult mse_loss(const Tensor& pred, const Tensor& target) {
  check_same_shape(pred, target, "mse_loss");
  const double n = static_cast<double>(pred.size());
  LossResult r;
  r.grad = Tensor(pred.shape);
  for (size_t i = 0; i < pred.size(); ++i) {
    double d = pred.data[i] - target.data[i];
    r.loss += d * d;
    r.grad.data[i] = 2.0 * d / n;
  }
  r.loss /= n;
  return r;
}

}  // namespace loggrad
