#include "loggrad/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace loggrad {

AdamState AdamState::init(const ModelParams& params) {
  AdamState s;
  s.m = zero_grads(params);
  s.v = zero_grads(params);
  s.step = 0;
  return s;
}

namespace {

void update(double& p, double g, double& m, double& v, double lr, const AdamConfig& cfg,
            double bc1, double bc2) {
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
  double mhat = m / bc1;
  double vhat = v / bc2;
  p -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
}

}  // namespace

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state, double lr,
               const AdamConfig& cfg) {
  if (params.layers.size() != grads.layers.size())
    throw std::invalid_argument("adam_step: params/grads layer count mismatch");
  ++state.step;
  double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (size_t li = 0; li < params.layers.size(); ++li) {
    ParamTensor& p = params.layers[li];
    const ParamTensor& g = grads.layers[li];
    if (p.w.data.size() != g.w.data.size() || p.b.size() != g.b.size())
      throw std::invalid_argument("adam_step: tensor shape mismatch");
    for (size_t i = 0; i < p.w.data.size(); ++i)
      update(p.w.data[i], g.w.data[i], state.m.layers[li].w.data[i], state.v.layers[li].w.data[i],
             lr, cfg, bc1, bc2);
    for (size_t i = 0; i < p.b.size(); ++i)
      update(p.b[i], g.b[i], state.m.layers[li].b[i], state.v.layers[li].b[i], lr, cfg, bc1, bc2);
  }
}

}  // namespace loggrad
