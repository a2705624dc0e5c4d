#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "loggrad/layers.hpp"
#include "loggrad/tensor.hpp"

namespace loggrad {

struct ConvSpec {
  int kernel = 5;
  int out_channels = 1;
  Padding pad = Padding::SameReplicate;
};
struct ReluSpec {};
struct PoolSpec {
  int p = 4;
};
struct FlattenSpec {};
struct DenseSpec {
  int out = 3;
};

using LayerSpec = std::variant<ConvSpec, ReluSpec, PoolSpec, FlattenSpec, DenseSpec>;

struct ModelSpec {
  int input_h = 96;
  int input_w = 96;
  int input_c = 1;
  std::vector<LayerSpec> layers;

  // conv(k, c1, same) -> relu -> pool(p) -> conv(k, c2, same) -> relu ->
  // pool(p) -> flatten -> dense(3)
  static ModelSpec classifier_2conv1fc(int c1, int c2, int kernel, int pool, int resolution);

  // conv(k, c_hidden, same) -> relu -> conv(k, 1, same)
  static ModelSpec reconstructor_2conv(int kernel, int c_hidden, int resolution);

  // Output shape of each layer, starting with the input shape.
  std::vector<std::vector<size_t>> shape_chain() const;

  std::string to_json() const;
  static ModelSpec from_json(const std::string& j);
};

// Weight/bias pair per parametric layer (conv and dense), in layer order.
struct ParamTensor {
  Tensor w;
  std::vector<double> b;
};

struct ModelParams {
  std::vector<ParamTensor> layers;
};

// He fan-in normal init for weights, zero biases; deterministic per seed.
ModelParams init_params(const ModelSpec& spec, uint64_t seed);

// Activations after every layer (index 0 is the input), for backprop.
struct ForwardTrace {
  std::vector<Tensor> activations;
};

Tensor forward(const ModelSpec& spec, const ModelParams& params, const Tensor& input,
               ForwardTrace* trace = nullptr);

// Gradients w.r.t. all parameters, accumulated into `grads` (same shapes
// as params, must be pre-sized). Returns nothing; input gradient is
// discarded.
void backward(const ModelSpec& spec, const ModelParams& params, const ForwardTrace& trace,
              const Tensor& grad_output, ModelParams& grads);

ModelParams zero_grads(const ModelParams& params);

}  // namespace loggrad
