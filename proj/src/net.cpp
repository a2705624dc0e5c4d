#include "loggrad/net.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "loggrad/rng.hpp"

namespace loggrad {

using nlohmann::json;

ModelSpec ModelSpec::classifier_2conv1fc(int c1, int c2, int kernel, int pool, int resolution) {
  ModelSpec s;
  s.input_h = s.input_w = resolution;
  s.input_c = 1;
  s.layers = {ConvSpec{kernel, c1, Padding::SameReplicate}, ReluSpec{}, PoolSpec{pool},
              ConvSpec{kernel, c2, Padding::SameReplicate}, ReluSpec{}, PoolSpec{pool},
              FlattenSpec{}, DenseSpec{3}};
  return s;
}

ModelSpec ModelSpec::reconstructor_2conv(int kernel, int c_hidden, int resolution) {
  ModelSpec s;
  s.input_h = s.input_w = resolution;
  s.input_c = 1;
  s.layers = {ConvSpec{kernel, c_hidden, Padding::SameReplicate}, ReluSpec{},
              ConvSpec{kernel, 1, Padding::SameReplicate}};
  return s;
}

std::vector<std::vector<size_t>> ModelSpec::shape_chain() const {
  std::vector<std::vector<size_t>> chain;
  std::vector<size_t> cur{static_cast<size_t>(input_h), static_cast<size_t>(input_w),
                          static_cast<size_t>(input_c)};
  chain.push_back(cur);
  for (const LayerSpec& l : layers) {
    if (auto* c = std::get_if<ConvSpec>(&l)) {
      if (c->pad == Padding::Valid) {
        cur[0] -= c->kernel - 1;
        cur[1] -= c->kernel - 1;
      }
      cur[2] = static_cast<size_t>(c->out_channels);
    } else if (auto* p = std::get_if<PoolSpec>(&l)) {
      cur[0] /= p->p;
      cur[1] /= p->p;
    } else if (std::get_if<FlattenSpec>(&l)) {
      cur = {cur[0] * cur[1] * cur[2]};
    } else if (auto* d = std::get_if<DenseSpec>(&l)) {
      cur = {static_cast<size_t>(d->out)};
    }
    chain.push_back(cur);
  }
  return chain;
}

namespace {

const char* pad_name(Padding p) {
  switch (p) {
    case Padding::Valid: return "valid";
    case Padding::SameZero: return "same_zero";
    default: return "same_replicate";
  }
}

Padding parse_pad(const std::string& s) {
  if (s == "valid") return Padding::Valid;
  if (s == "same_zero") return Padding::SameZero;
  if (s == "same_replicate") return Padding::SameReplicate;
  throw std::invalid_argument("bad padding name " + s);
}

}  // namespace

std::string ModelSpec::to_json() const {
  json j;
  j["input"] = {input_h, input_w, input_c};
  j["layers"] = json::array();
  for (const LayerSpec& l : layers) {
    if (auto* c = std::get_if<ConvSpec>(&l))
      j["layers"].push_back({{"type", "conv"},
                             {"kernel", c->kernel},
                             {"out", c->out_channels},
                             {"pad", pad_name(c->pad)}});
    else if (std::get_if<ReluSpec>(&l))
      j["layers"].push_back({{"type", "relu"}});
    else if (auto* p = std::get_if<PoolSpec>(&l))
      j["layers"].push_back({{"type", "maxpool"}, {"p", p->p}});
    else if (std::get_if<FlattenSpec>(&l))
      j["layers"].push_back({{"type", "flatten"}});
    else if (auto* d = std::get_if<DenseSpec>(&l))
      j["layers"].push_back({{"type", "dense"}, {"out", d->out}});
  }
  return j.dump();
}

ModelSpec ModelSpec::from_json(const std::string& text) {
  json j = json::parse(text);
  ModelSpec s;
  s.input_h = j.at("input").at(0);
  s.input_w = j.at("input").at(1);
  s.input_c = j.at("input").at(2);
  for (const json& lj : j.at("layers")) {
    std::string type = lj.at("type");
    if (type == "conv")
      s.layers.push_back(ConvSpec{lj.at("kernel"), lj.at("out"), parse_pad(lj.at("pad"))});
    else if (type == "relu")
      s.layers.push_back(ReluSpec{});
    else if (type == "maxpool")
      s.layers.push_back(PoolSpec{lj.at("p")});
    else if (type == "flatten")
      s.layers.push_back(FlattenSpec{});
    else if (type == "dense")
      s.layers.push_back(DenseSpec{lj.at("out")});
    else
      throw std::invalid_argument("bad layer type " + type);
  }
  return s;
}

ModelParams init_params(const ModelSpec& spec, uint64_t seed) {
  Rng rng(seed);
  ModelParams params;
  auto chain = spec.shape_chain();
  for (size_t li = 0; li < spec.layers.size(); ++li) {
    const auto& in_shape = chain[li];
    if (auto* c = std::get_if<ConvSpec>(&spec.layers[li])) {
      size_t k = static_cast<size_t>(c->kernel);
      size_t cin = in_shape[2];
      ParamTensor pt;
      pt.w = Tensor({k, k, cin, static_cast<size_t>(c->out_channels)});
      // Glorot uniform, the reference-framework default for Conv2D.
      double fan_in = static_cast<double>(k * k * cin);
      double fan_out = static_cast<double>(k * k * static_cast<size_t>(c->out_channels));
      double limit = std::sqrt(6.0 / (fan_in + fan_out));
      for (double& v : pt.w.data) v = rng.uniform(-limit, limit);
      pt.b.assign(static_cast<size_t>(c->out_channels), 0.0);
      params.layers.push_back(std::move(pt));
    } else if (auto* d = std::get_if<DenseSpec>(&spec.layers[li])) {
      size_t in_n = in_shape[0];
      ParamTensor pt;
      pt.w = Tensor({in_n, static_cast<size_t>(d->out)});
      double limit = std::sqrt(6.0 / (static_cast<double>(in_n) + static_cast<double>(d->out)));
      for (double& v : pt.w.data) v = rng.uniform(-limit, limit);
      pt.b.assign(static_cast<size_t>(d->out), 0.0);
      params.layers.push_back(std::move(pt));
    }
  }
  return params;
}

Tensor forward(const ModelSpec& spec, const ModelParams& params, const Tensor& input,
               ForwardTrace* trace) {
  Tensor cur = input;
  if (trace) trace->activations = {cur};
  size_t pi = 0;
  for (const LayerSpec& l : spec.layers) {
    if (auto* c = std::get_if<ConvSpec>(&l)) {
      cur = conv2d_forward(cur, params.layers[pi].w, params.layers[pi].b, c->pad);
      ++pi;
    } else if (std::get_if<ReluSpec>(&l)) {
      cur = relu_forward(cur);
    } else if (auto* p = std::get_if<PoolSpec>(&l)) {
      cur = maxpool_forward(cur, p->p);
    } else if (std::get_if<FlattenSpec>(&l)) {
      cur = flatten(cur);
    } else {
      cur = dense_forward(cur, params.layers[pi].w, params.layers[pi].b);
      ++pi;
    }
    if (trace) trace->activations.push_back(cur);
  }
  return cur;
}

void backward(const ModelSpec& spec, const ModelParams& params, const ForwardTrace& trace,
              const Tensor& grad_output, ModelParams& grads) {
  Tensor g = grad_output;
  size_t pi = params.layers.size();
  for (size_t li = spec.layers.size(); li-- > 0;) {
    const Tensor& x = trace.activations[li];
    const LayerSpec& l = spec.layers[li];
    if (auto* c = std::get_if<ConvSpec>(&l)) {
      --pi;
      ConvGrads cg = conv2d_backward(x, params.layers[pi].w, g, c->pad);
      for (size_t i = 0; i < cg.grad_w.data.size(); ++i)
        grads.layers[pi].w.data[i] += cg.grad_w.data[i];
      for (size_t i = 0; i < cg.grad_bias.size(); ++i) grads.layers[pi].b[i] += cg.grad_bias[i];
      g = std::move(cg.grad_x);
    } else if (std::get_if<ReluSpec>(&l)) {
      g = relu_backward(x, g);
    } else if (auto* p = std::get_if<PoolSpec>(&l)) {
      g = maxpool_backward(x, p->p, g);
    } else if (std::get_if<FlattenSpec>(&l)) {
      g.shape = x.shape;
    } else {
      --pi;
      DenseGrads dg = dense_backward(x, params.layers[pi].w, g);
      for (size_t i = 0; i < dg.grad_w.data.size(); ++i)
        grads.layers[pi].w.data[i] += dg.grad_w.data[i];
      for (size_t i = 0; i < dg.grad_bias.size(); ++i) grads.layers[pi].b[i] += dg.grad_bias[i];
      g = std::move(dg.grad_x);
    }
  }
}

ModelParams zero_grads(const ModelParams& params) {
  ModelParams g;
  for (const ParamTensor& pt : params.layers) {
    ParamTensor z;
    z.w = Tensor(pt.w.shape);
    z.b.assign(pt.b.size(), 0.0);
    g.layers.push_back(std::move(z));
  }
  return g;
}

}  // namespace loggrad
