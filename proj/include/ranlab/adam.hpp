#pragma once

#include <cmath>
#include <stdexcept>

#include "ranlab/dense_net.hpp"

namespace ranlab {

// Adam with bias correction. Moment accumulators mirror the parameter shapes.
struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  NetGrads m;
  NetGrads v;
};

inline AdamState make_adam(const DenseNet& net, double lr = 1e-3,
                           double beta1 = 0.9, double beta2 = 0.999,
                           double eps = 1e-8) {
  AdamState s;
  s.lr = lr;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.eps = eps;
  s.m = make_grads(net);
  s.v = make_grads(net);
  return s;
}

namespace detail {
inline void adam_apply(std::vector<double>& p, const std::vector<double>& g,
                       std::vector<double>& m, std::vector<double>& v,
                       const AdamState& s, double bc1, double bc2) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g[i];
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g[i] * g[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= s.lr * mhat / (std::sqrt(vhat) + s.eps);
  }
}
}  // namespace detail

inline void adam_step(AdamState& state, DenseNet& net, const NetGrads& grads) {
  if (grads.weights.size() != net.layer_count() ||
      state.m.weights.size() != net.layer_count()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, state.step);
  const double bc2 = 1.0 - std::pow(state.beta2, state.step);
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    if (grads.weights[l].size() != net.weights[l].size() ||
        grads.biases[l].size() != net.biases[l].size()) {
      throw std::invalid_argument("adam_step: shape mismatch");
    }
    detail::adam_apply(net.weights[l], grads.weights[l], state.m.weights[l],
                       state.v.weights[l], state, bc1, bc2);
    detail::adam_apply(net.biases[l], grads.biases[l], state.m.biases[l],
                       state.v.biases[l], state, bc1, bc2);
  }
}

}  // namespace ranlab
