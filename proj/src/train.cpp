#include "loggrad/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "loggrad/loss.hpp"
#include "loggrad/rng.hpp"

namespace loggrad {

namespace {

LossResult sample_loss(const Tensor& output, const Sample& s, LossKind kind) {
  return kind == LossKind::SoftmaxXent ? softmax_xent(output, s.label)
                                       : mse_loss(output, s.target);
}

int argmax3(const Tensor& logits) {
  int best = 0;
  for (size_t i = 1; i < logits.size(); ++i)
    if (logits.data[i] > logits.data[best]) best = static_cast<int>(i);
  return best;
}

}  // namespace

double evaluate(const ModelSpec& spec, const ModelParams& params, const SampleSet& data,
                LossKind loss) {
  if (data.empty()) throw std::invalid_argument("evaluate: empty data");
  if (loss == LossKind::SoftmaxXent) {
    size_t correct = 0;
    for (const Sample& s : data)
      if (argmax3(forward(spec, params, s.input)) == s.label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(data.size());
  }
  double total = 0.0;
  for (const Sample& s : data) total += sample_loss(forward(spec, params, s.input), s, loss).loss;
  return total / static_cast<double>(data.size());
}

TrainResult train(const ModelSpec& spec, ModelParams params, const SampleSet& train_set,
                  const SampleSet& val_set, const SampleSet& test_set, const TrainConfig& cfg) {
  if (train_set.empty() || val_set.empty() || test_set.empty())
    throw std::invalid_argument("train: empty split");
  if (cfg.epochs < 1 || cfg.batch_size < 1) throw std::invalid_argument("train: bad config");

  Rng shuffle_rng(mix_seed(cfg.seed, "epoch-shuffle"));
  AdamState state = AdamState::init(params);
  double lr = cfg.lr;

  TrainResult result;
  ModelParams best_params = params;
  double best_val = cfg.loss == LossKind::SoftmaxXent ? -1.0
                                                      : std::numeric_limits<double>::infinity();

  std::vector<size_t> order(train_set.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[shuffle_rng.uniform_index(i)]);

    double epoch_loss = 0.0;
    size_t seen = 0;
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      size_t end = std::min(order.size(), start + cfg.batch_size);
      ModelParams grads = zero_grads(params);
      double batch_loss = 0.0;
      for (size_t i = start; i < end; ++i) {
        const Sample& s = train_set[order[i]];
        ForwardTrace trace;
        Tensor out = forward(spec, params, s.input, &trace);
        LossResult lr_ = sample_loss(out, s, cfg.loss);
        batch_loss += lr_.loss;
        // mean over the batch
        for (double& g : lr_.grad.data) g /= static_cast<double>(end - start);
        backward(spec, params, trace, lr_.grad, grads);
      }
      if (!std::isfinite(batch_loss))
        throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch) +
                                 ", batch offset " + std::to_string(start));
      adam_step(params, grads, state, lr, cfg.adam);
      epoch_loss += batch_loss;
      seen += end - start;
    }

    EpochStats stats;
    stats.train_loss = epoch_loss / static_cast<double>(seen);
    if (cfg.loss == LossKind::SoftmaxXent) {
      stats.val_accuracy = evaluate(spec, params, val_set, cfg.loss);
      double vloss = 0.0;
      for (const Sample& s : val_set) vloss += sample_loss(forward(spec, params, s.input), s, cfg.loss).loss;
      stats.val_loss = vloss / static_cast<double>(val_set.size());
      if (stats.val_accuracy > best_val) {
        best_val = stats.val_accuracy;
        best_params = params;
      }
    } else {
      stats.val_loss = evaluate(spec, params, val_set, cfg.loss);
      if (stats.val_loss < best_val) {
        best_val = stats.val_loss;
        best_params = params;
      }
    }
    result.history.epochs.push_back(stats);
    lr *= cfg.lr_decay;
  }

  result.params = std::move(best_params);
  result.history.test_accuracy = evaluate(spec, result.params, test_set, cfg.loss);
  return result;
}

void write_history_csv(const TrainHistory& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "epoch,train_loss,val_loss,val_acc\n";
  for (size_t i = 0; i < h.epochs.size(); ++i) {
    const EpochStats& e = h.epochs[i];
    out << i + 1 << "," << e.train_loss << "," << e.val_loss << "," << e.val_accuracy << "\n";
  }
}

}  // namespace loggrad
