#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loggrad/adam.hpp"
#include "loggrad/net.hpp"

namespace loggrad {

enum class LossKind { SoftmaxXent, MeanSquaredError };

struct TrainConfig {
  int epochs = 40;
  int batch_size = 64;
  double lr = 0.001;
  double lr_decay = 0.95;  // multiplied in after every epoch
  AdamConfig adam;
  uint64_t seed = 0;
  LossKind loss = LossKind::SoftmaxXent;
};

struct EpochStats {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;  // 0 for reconstruction
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  double test_accuracy = 0.0;  // or test loss for reconstruction
};

// One training sample: input tensor plus either a class label or a target
// tensor, depending on the loss.
struct Sample {
  Tensor input;
  int label = 0;
  Tensor target;  // reconstruction only
};

using SampleSet = std::vector<Sample>;

// Epoch loop with seeded shuffling and per-epoch LR decay. Returns the
// parameters with the best validation accuracy (classification) or lowest
// validation loss (MSE). Aborts on non-finite loss. Deterministic given
// (seed, config, data).
struct TrainResult {
  ModelParams params;
  TrainHistory history;
};

TrainResult train(const ModelSpec& spec, ModelParams params, const SampleSet& train_set,
                  const SampleSet& val_set, const SampleSet& test_set, const TrainConfig& cfg);

// Classification: argmax accuracy. MSE: mean loss over the set.
double evaluate(const ModelSpec& spec, const ModelParams& params, const SampleSet& data,
                LossKind loss);

void write_history_csv(const TrainHistory& h, const std::string& path);

}  // namespace loggrad
