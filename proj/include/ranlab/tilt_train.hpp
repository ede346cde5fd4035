#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ranlab/adam.hpp"
#include "ranlab/dense_net.hpp"
#include "ranlab/tilt_log.hpp"

namespace ranlab {

struct TrainConfig {
  int feature_count = 35;
  int epochs = 60;
  int batch_size = 64;
  double lr = 1e-3;
  double weight_cap = 20.0;  // cap on 1/propensity before normalization
  std::vector<int> hidden_sizes = {64, 64};
};

inline void validate_train(const TrainConfig& cfg) {
  if (cfg.feature_count != 5 && cfg.feature_count != 20 &&
      cfg.feature_count != 35) {
    throw std::invalid_argument("train: feature_count not in {5,20,35}");
  }
  if (cfg.epochs < 1) throw std::invalid_argument("train: epochs < 1");
  if (cfg.batch_size < 1) throw std::invalid_argument("train: batch_size < 1");
  if (!(cfg.lr > 0.0)) throw std::invalid_argument("train: lr <= 0");
  if (!(cfg.weight_cap >= 1.0)) {
    throw std::invalid_argument("train: weight_cap < 1");
  }
}

namespace detail {

// Shared reward-regression loop. The Q head has one output per action and
// only the logged action's output receives gradient: per-sample loss is
// w_i * (Q(s_i)[a_i] - r_i)^2 with the weights self-normalized inside each
// batch. Discount is hard-wired to zero: targets are the logged rewards,
// nothing is bootstrapped.
inline DenseNet train_q_regressor(const ExperienceLog& log,
                                  const TrainConfig& cfg, std::uint64_t seed,
                                  bool propensity_weighted) {
  validate_train(cfg);
  if (log.transitions.empty()) {
    throw std::invalid_argument("train: experience log is empty");
  }
  for (const auto& t : log.transitions) {
    if (static_cast<int>(t.features.size()) != cfg.feature_count) {
      throw std::invalid_argument(
          "train: transition feature length does not match config");
    }
    if (t.action < 0 || t.action > 2) {
      throw std::invalid_argument("train: action outside {0,1,2}");
    }
    if (propensity_weighted && !(t.propensity > 0.0)) {
      throw std::invalid_argument("train: nonpositive propensity in log");
    }
  }

  std::vector<int> sizes;
  sizes.push_back(cfg.feature_count);
  for (int h : cfg.hidden_sizes) sizes.push_back(h);
  sizes.push_back(3);
  std::vector<Activation> acts(cfg.hidden_sizes.size(), Activation::relu);
  acts.push_back(Activation::linear);

  Rng root(seed);
  Rng init_rng = root.child("init");
  Rng shuffle_rng = root.child("shuffle");
  DenseNet net = make_net(sizes, acts);
  init_glorot(net, init_rng);
  AdamState opt = make_adam(net, cfg.lr);
  NetGrads grads = make_grads(net);

  const std::size_t n = log.transitions.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> weights(n, 1.0);
  if (propensity_weighted) {
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] = std::min(1.0 / log.transitions[i].propensity, cfg.weight_cap);
    }
  }

  ForwardTrace trace;
  std::vector<double> dldy(3, 0.0);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(n, start + cfg.batch_size);
      const double count = static_cast<double>(end - start);
      double wsum = 0.0;
      for (std::size_t k = start; k < end; ++k) wsum += weights[order[k]];
      const double wmean = wsum / count;
      zero_grads(grads);
      for (std::size_t k = start; k < end; ++k) {
        const Transition& t = log.transitions[order[k]];
        forward_trace(net, t.features, trace);
        const double err = trace.post.back()[t.action] - t.reward;
        std::fill(dldy.begin(), dldy.end(), 0.0);
        dldy[t.action] = 2.0 * err / count;
        backprop(net, trace, dldy, grads, weights[order[k]] / wmean);
      }
      adam_step(opt, net, grads);
    }
  }
  return net;
}

}  // namespace detail

// Direct method: plain reward regression on the logged data.
inline DenseNet train_dm(const ExperienceLog& log, const TrainConfig& cfg,
                         std::uint64_t seed) {
  return detail::train_q_regressor(log, cfg, seed, false);
}

// Propensity-DM: each sample's squared error is weighted by the capped
// inverse propensity of its logged action, normalized to unit mean per
// batch, which counteracts the logging policy's action imbalance.
inline DenseNet train_propensity_dm(const ExperienceLog& log,
                                    const TrainConfig& cfg,
                                    std::uint64_t seed) {
  return detail::train_q_regressor(log, cfg, seed, true);
}

}  // namespace ranlab
