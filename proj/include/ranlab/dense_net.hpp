#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ranlab/rng.hpp"

namespace ranlab {

enum class Activation { linear, relu, tanh, sigmoid };

inline std::string to_string(Activation a) {
  switch (a) {
    case Activation::linear: return "linear";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  throw std::logic_error("unknown activation");
}

inline Activation activation_from_string(const std::string& s) {
  if (s == "linear") return Activation::linear;
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "sigmoid") return Activation::sigmoid;
  throw std::invalid_argument("unknown activation tag: " + s);
}

inline double apply_activation(Activation a, double z) {
  switch (a) {
    case Activation::linear: return z;
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::tanh: return std::tanh(z);
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
  }
  return z;
}

// Derivative expressed through the post-activation value y = f(z).
inline double activation_deriv(Activation a, double z, double y) {
  switch (a) {
    case Activation::linear: return 1.0;
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: return 1.0 - y * y;
    case Activation::sigmoid: return y * (1.0 - y);
  }
  return 1.0;
}

// Fully connected feed-forward network. weights[l] is row-major
// (layer_sizes[l+1] x layer_sizes[l]); activations[l] applies to layer l+1.
struct DenseNet {
  std::vector<int> layer_sizes;
  std::vector<Activation> activations;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  std::size_t layer_count() const { return activations.size(); }
};

inline DenseNet make_net(std::vector<int> layer_sizes,
                         std::vector<Activation> activations) {
  if (layer_sizes.size() < 2) {
    throw std::invalid_argument("net needs at least input and output layers");
  }
  if (activations.size() != layer_sizes.size() - 1) {
    throw std::invalid_argument("one activation per non-input layer required");
  }
  for (int n : layer_sizes) {
    if (n < 1) throw std::invalid_argument("layer sizes must be positive");
  }
  DenseNet net;
  net.layer_sizes = std::move(layer_sizes);
  net.activations = std::move(activations);
  net.weights.resize(net.layer_count());
  net.biases.resize(net.layer_count());
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    net.weights[l].assign(
        static_cast<std::size_t>(net.layer_sizes[l + 1]) * net.layer_sizes[l],
        0.0);
    net.biases[l].assign(net.layer_sizes[l + 1], 0.0);
  }
  return net;
}

// Glorot-uniform weights, zero biases.
inline void init_glorot(DenseNet& net, Rng& rng) {
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const int fan_in = net.layer_sizes[l];
    const int fan_out = net.layer_sizes[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& w : net.weights[l]) w = rng.uniform(-bound, bound);
    for (double& b : net.biases[l]) b = 0.0;
  }
}

// Pre- and post-activation values of one forward pass; post[0] is the input.
struct ForwardTrace {
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;
};

inline void forward_trace(const DenseNet& net, const std::vector<double>& x,
                          ForwardTrace& trace) {
  if (static_cast<int>(x.size()) != net.input_size()) {
    throw std::invalid_argument("input length does not match first layer");
  }
  trace.pre.resize(net.layer_count());
  trace.post.resize(net.layer_count() + 1);
  trace.post[0] = x;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const int n_in = net.layer_sizes[l];
    const int n_out = net.layer_sizes[l + 1];
    auto& z = trace.pre[l];
    auto& y = trace.post[l + 1];
    z.assign(n_out, 0.0);
    y.assign(n_out, 0.0);
    const auto& in = trace.post[l];
    const auto& w = net.weights[l];
    for (int i = 0; i < n_out; ++i) {
      double acc = net.biases[l][i];
      const double* row = &w[static_cast<std::size_t>(i) * n_in];
      for (int j = 0; j < n_in; ++j) acc += row[j] * in[j];
      z[i] = acc;
      y[i] = apply_activation(net.activations[l], acc);
    }
  }
}

inline std::vector<double> forward(const DenseNet& net,
                                   const std::vector<double>& x) {
  ForwardTrace trace;
  forward_trace(net, x, trace);
  return trace.post.back();
}

// Parameter-shaped gradient accumulator.
struct NetGrads {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

inline NetGrads make_grads(const DenseNet& net) {
  NetGrads g;
  g.weights.resize(net.layer_count());
  g.biases.resize(net.layer_count());
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    g.weights[l].assign(net.weights[l].size(), 0.0);
    g.biases[l].assign(net.biases[l].size(), 0.0);
  }
  return g;
}

inline void zero_grads(NetGrads& g) {
  for (auto& w : g.weights) std::fill(w.begin(), w.end(), 0.0);
  for (auto& b : g.biases) std::fill(b.begin(), b.end(), 0.0);
}

// Backpropagates dLoss/dy through the traced pass, accumulating
// `scale * dLoss/dparam` into grads, and returns dLoss/dx.
inline std::vector<double> backprop(const DenseNet& net,
                                    const ForwardTrace& trace,
                                    const std::vector<double>& dloss_dy,
                                    NetGrads& grads, double scale = 1.0) {
  if (static_cast<int>(dloss_dy.size()) != net.output_size()) {
    throw std::invalid_argument("dloss_dy length does not match output layer");
  }
  std::vector<double> delta = dloss_dy;
  for (std::size_t li = net.layer_count(); li-- > 0;) {
    const int n_in = net.layer_sizes[li];
    const int n_out = net.layer_sizes[li + 1];
    const auto& z = trace.pre[li];
    const auto& y = trace.post[li + 1];
    const auto& in = trace.post[li];
    for (int i = 0; i < n_out; ++i) {
      delta[i] *= activation_deriv(net.activations[li], z[i], y[i]);
    }
    auto& gw = grads.weights[li];
    auto& gb = grads.biases[li];
    for (int i = 0; i < n_out; ++i) {
      const double d = delta[i] * scale;
      gb[i] += d;
      double* row = &gw[static_cast<std::size_t>(i) * n_in];
      for (int j = 0; j < n_in; ++j) row[j] += d * in[j];
    }
    std::vector<double> prev(n_in, 0.0);
    const auto& w = net.weights[li];
    for (int i = 0; i < n_out; ++i) {
      const double d = delta[i];
      const double* row = &w[static_cast<std::size_t>(i) * n_in];
      for (int j = 0; j < n_in; ++j) prev[j] += d * row[j];
    }
    delta = std::move(prev);
  }
  return delta;
}

// Convenience wrapper: gradients of dot(dloss_dy, net(x)) in one call.
inline NetGrads gradients(const DenseNet& net, const std::vector<double>& x,
                          const std::vector<double>& dloss_dy,
                          std::vector<double>* dloss_dx = nullptr) {
  ForwardTrace trace;
  forward_trace(net, x, trace);
  NetGrads grads = make_grads(net);
  auto dx = backprop(net, trace, dloss_dy, grads);
  if (dloss_dx) *dloss_dx = std::move(dx);
  return grads;
}

// Checkpoint format: {layer_sizes, activations, weights (row-major), biases}.
inline nlohmann::json net_to_json(const DenseNet& net) {
  nlohmann::json j;
  j["layer_sizes"] = net.layer_sizes;
  std::vector<std::string> acts;
  acts.reserve(net.activations.size());
  for (auto a : net.activations) acts.push_back(to_string(a));
  j["activations"] = acts;
  j["weights"] = net.weights;
  j["biases"] = net.biases;
  return j;
}

inline DenseNet net_from_json(const nlohmann::json& j) {
  std::vector<int> sizes = j.at("layer_sizes").get<std::vector<int>>();
  std::vector<Activation> acts;
  for (const auto& s : j.at("activations")) {
    acts.push_back(activation_from_string(s.get<std::string>()));
  }
  DenseNet net = make_net(std::move(sizes), std::move(acts));
  auto weights = j.at("weights").get<std::vector<std::vector<double>>>();
  auto biases = j.at("biases").get<std::vector<std::vector<double>>>();
  if (weights.size() != net.layer_count() || biases.size() != net.layer_count()) {
    throw std::invalid_argument("checkpoint layer count mismatch");
  }
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    if (weights[l].size() != net.weights[l].size() ||
        biases[l].size() != net.biases[l].size()) {
      throw std::invalid_argument("checkpoint parameter shape mismatch");
    }
  }
  net.weights = std::move(weights);
  net.biases = std::move(biases);
  return net;
}

}  // namespace ranlab
