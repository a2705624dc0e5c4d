#pragma once

#include <cstdint>

#include "loggrad/net.hpp"

namespace loggrad {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment estimates per parameter tensor.
struct AdamState {
  ModelParams m;
  ModelParams v;
  int64_t step = 0;

  static AdamState init(const ModelParams& params);
};

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state, double lr,
               const AdamConfig& cfg = {});

}  // namespace loggrad
