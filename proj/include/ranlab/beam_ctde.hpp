#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ranlab/adam.hpp"
#include "ranlab/beam_channel.hpp"
#include "ranlab/beam_pae.hpp"
#include "ranlab/beam_pareto.hpp"
#include "ranlab/dense_net.hpp"
#include "ranlab/rng.hpp"

namespace ranlab {

// Centralized-training / decentralized-execution setup: two actors map
// local channel observations to beams, one shared critic regresses the
// collective reward alpha*r1 + (1-alpha)*r2 from global information, and
// each actor ascends the critic's gradient with respect to its own action.
struct CtdeConfig {
  double alpha = 0.5;
  std::vector<int> actor_hidden = {64, 64};
  std::vector<int> critic_hidden = {64, 64};
  int steps = 3000;
  int warmup_steps = 100;      // replay fill before actor updates start
  int batch_size = 64;
  int critic_updates_per_step = 2;
  double actor_lr = 3e-4;
  double critic_lr = 1e-3;
  double sigma_start = 0.1;    // exploration noise, annealed linearly
  double sigma_end = 0.01;
  bool use_pae = true;
  bool randomize_phases = false;  // fresh global phases per training sample
  int trace_every = 50;
  int eval_draws = 64;
  std::uint64_t seed = 1;
};

inline void validate_ctde(const CtdeConfig& cfg) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
    throw std::invalid_argument("ctde: alpha outside [0,1]");
  }
  if (cfg.steps < 1) throw std::invalid_argument("ctde: steps < 1");
  if (cfg.batch_size < 1) throw std::invalid_argument("ctde: batch_size < 1");
  if (!(cfg.actor_lr > 0.0 && cfg.critic_lr > 0.0)) {
    throw std::invalid_argument("ctde: learning rates must be positive");
  }
  if (cfg.sigma_start < 0.0 || cfg.sigma_end < 0.0) {
    throw std::invalid_argument("ctde: noise sigma must be nonnegative");
  }
}

inline void append_interleaved(const cvec& v, std::vector<double>& out) {
  for (const auto& x : v) {
    out.push_back(x.real());
    out.push_back(x.imag());
  }
}

// Raw actor outputs (2M direction reals + 1 power logit) -> feasible beam:
// w = sqrt(sigmoid(t) * P) * d / ||d||. The power constraint holds by
// construction; a vanishing direction yields the zero beam.
inline cvec beam_from_outputs(const std::vector<double>& raw, int M,
                              double power) {
  if (static_cast<int>(raw.size()) != 2 * M + 1) {
    throw std::invalid_argument("beam_from_outputs: need 2M+1 outputs");
  }
  double n2 = 0.0;
  for (int i = 0; i < 2 * M; ++i) n2 += raw[i] * raw[i];
  cvec w(M, 0.0);
  if (n2 < 1e-30) return w;
  const double p = 1.0 / (1.0 + std::exp(-raw[2 * M]));
  const double scale = std::sqrt(p * power / n2);
  for (int i = 0; i < M; ++i) {
    w[i] = std::complex<double>(scale * raw[2 * i], scale * raw[2 * i + 1]);
  }
  return w;
}

// d(beam reals)/d(raw outputs) transposed against an upstream gradient:
// returns dL/draw given dL/d(w reals). Used for the deterministic policy
// gradient through the critic.
inline std::vector<double> beam_backward(const std::vector<double>& raw, int M,
                                         double power,
                                         const std::vector<double>& dW) {
  std::vector<double> draw(2 * M + 1, 0.0);
  double n2 = 0.0;
  for (int i = 0; i < 2 * M; ++i) n2 += raw[i] * raw[i];
  if (n2 < 1e-30) return draw;
  const double n = std::sqrt(n2);
  const double t = raw[2 * M];
  const double p = 1.0 / (1.0 + std::exp(-t));
  const double s = std::sqrt(p * power) / n;
  // w_i = s * v_i with v the direction block.
  double vdW = 0.0;
  for (int i = 0; i < 2 * M; ++i) vdW += raw[i] * dW[i];
  for (int i = 0; i < 2 * M; ++i) {
    draw[i] = s * (dW[i] - raw[i] * vdW / n2);
  }
  // dw_i/dt = w_i * (1 - p) / 2.
  double wdW = 0.0;
  for (int i = 0; i < 2 * M; ++i) wdW += s * raw[i] * dW[i];
  draw[2 * M] = wdW * (1.0 - p) / 2.0;
  return draw;
}

// Local observation of BS j: its channels to both users, PAE'd or raw,
// interleaved to 4M reals.
inline std::vector<double> local_observation(const cvec& h_to_1,
                                             const cvec& h_to_2,
                                             bool use_pae) {
  std::vector<double> obs;
  obs.reserve(4 * h_to_1.size());
  if (use_pae) {
    append_interleaved(pae_vector(h_to_1), obs);
    append_interleaved(pae_vector(h_to_2), obs);
  } else {
    append_interleaved(h_to_1, obs);
    append_interleaved(h_to_2, obs);
  }
  return obs;
}

// Spec'd actor interface: observation in, feasible beam out.
inline cvec actor_forward(const DenseNet& actor, const std::vector<double>& obs,
                          double power) {
  const int M = static_cast<int>(obs.size()) / 4;
  return beam_from_outputs(forward(actor, obs), M, power);
}

struct TracePoint {
  int step = 0;
  RatePair greedy_rates;
};

struct CtdeResult {
  DenseNet actor1;
  DenseNet actor2;
  std::vector<TracePoint> trace;
  // Final greedy rates averaged over eval_draws observation draws (the
  // draws differ only when phases are randomized without PAE).
  RatePair final_rates;
  double final_weighted = 0.0;
};

namespace detail {

inline cvec rotated(const cvec& h, double phase) {
  const std::complex<double> r(std::cos(phase), std::sin(phase));
  cvec out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = h[i] * r;
  return out;
}

struct ObsSet {
  std::vector<double> obs1;
  std::vector<double> obs2;
  std::vector<double> global_obs;
};

// One observation draw. Rates are invariant to the per-vector phases, so
// randomization only perturbs what the networks see.
inline ObsSet draw_observations(const MisoChannel& ch, const CtdeConfig& cfg,
                                Rng& phase_rng) {
  std::array<std::array<cvec, 2>, 2> h = ch.h;
  if (cfg.randomize_phases) {
    for (auto& row : h) {
      for (auto& v : row) {
        v = rotated(v, phase_rng.uniform(0.0, 2.0 * std::numbers::pi));
      }
    }
  }
  ObsSet o;
  o.obs1 = local_observation(h[0][0], h[0][1], cfg.use_pae);
  o.obs2 = local_observation(h[1][0], h[1][1], cfg.use_pae);
  o.global_obs.reserve(8 * ch.M);
  auto push = [&](const cvec& v) {
    append_interleaved(cfg.use_pae ? pae_vector(v) : v, o.global_obs);
  };
  push(h[0][0]);
  push(h[0][1]);
  push(h[1][0]);
  push(h[1][1]);
  return o;
}

}  // namespace detail

inline CtdeResult train_ctde(const MisoChannel& ch, const CtdeConfig& cfg) {
  validate_ctde(cfg);
  validate_channel(ch);
  const int M = ch.M;
  const double P = ch.power_budget;

  Rng root(cfg.seed);
  Rng noise_rng = root.child("noise");
  Rng phase_rng = root.child("phases");
  Rng replay_rng = root.child("replay");
  Rng eval_phase_rng = root.child("eval_phases");

  auto build_net = [](int in, const std::vector<int>& hidden, int out,
                      Rng rng) {
    std::vector<int> sizes;
    sizes.push_back(in);
    for (int h : hidden) sizes.push_back(h);
    sizes.push_back(out);
    std::vector<Activation> acts(hidden.size(), Activation::relu);
    acts.push_back(Activation::linear);
    auto net = make_net(sizes, acts);
    init_glorot(net, rng);
    return net;
  };

  CtdeResult res;
  res.actor1 = build_net(4 * M, cfg.actor_hidden, 2 * M + 1, root.child("a1"));
  res.actor2 = build_net(4 * M, cfg.actor_hidden, 2 * M + 1, root.child("a2"));
  DenseNet critic =
      build_net(12 * M, cfg.critic_hidden, 1, root.child("critic"));
  AdamState opt_a1 = make_adam(res.actor1, cfg.actor_lr);
  AdamState opt_a2 = make_adam(res.actor2, cfg.actor_lr);
  AdamState opt_c = make_adam(critic, cfg.critic_lr);

  struct Sample {
    std::vector<double> critic_in;
    double reward = 0.0;
  };
  std::vector<Sample> replay;
  replay.reserve(cfg.steps);

  auto weighted_reward = [&](const RatePair& r) {
    return cfg.alpha * r.r1 + (1.0 - cfg.alpha) * r.r2;
  };
  auto critic_input = [&](const std::vector<double>& global_obs,
                          const cvec& w1, const cvec& w2) {
    std::vector<double> in = global_obs;
    append_interleaved(w1, in);
    append_interleaved(w2, in);
    return in;
  };

  NetGrads cgrads = make_grads(critic);
  NetGrads agrads1 = make_grads(res.actor1);
  NetGrads agrads2 = make_grads(res.actor2);
  ForwardTrace trace_ws;

  for (int step = 0; step < cfg.steps; ++step) {
    const double frac =
        cfg.steps > 1 ? static_cast<double>(step) / (cfg.steps - 1) : 0.0;
    const double sigma =
        cfg.sigma_start + (cfg.sigma_end - cfg.sigma_start) * frac;

    const auto obs = detail::draw_observations(ch, cfg, phase_rng);
    auto raw1 = forward(res.actor1, obs.obs1);
    auto raw2 = forward(res.actor2, obs.obs2);
    for (auto& v : raw1) v += sigma * noise_rng.normal();
    for (auto& v : raw2) v += sigma * noise_rng.normal();
    const cvec w1 = beam_from_outputs(raw1, M, P);
    const cvec w2 = beam_from_outputs(raw2, M, P);
    const double r = weighted_reward(rates(ch, {w1, w2}));
    if (!std::isfinite(r)) {
      throw std::runtime_error("ctde: non-finite reward at step " +
                               std::to_string(step));
    }
    replay.push_back({critic_input(obs.global_obs, w1, w2), r});

    for (int u = 0; u < cfg.critic_updates_per_step; ++u) {
      zero_grads(cgrads);
      const int b = std::min<int>(cfg.batch_size,
                                  static_cast<int>(replay.size()));
      double loss = 0.0;
      for (int k = 0; k < b; ++k) {
        const auto& s = replay[replay_rng.uniform_index(replay.size())];
        forward_trace(critic, s.critic_in, trace_ws);
        const double err = trace_ws.post.back()[0] - s.reward;
        loss += err * err;
        backprop(critic, trace_ws, {2.0 * err / b}, cgrads);
      }
      if (!std::isfinite(loss)) {
        throw std::runtime_error("ctde: non-finite critic loss");
      }
      adam_step(opt_c, critic, cgrads);
    }

    if (step >= cfg.warmup_steps) {
      // Deterministic policy gradient: each actor follows dQ/d(own beam).
      const auto g1 = forward(res.actor1, obs.obs1);
      const auto g2 = forward(res.actor2, obs.obs2);
      const cvec gw1 = beam_from_outputs(g1, M, P);
      const cvec gw2 = beam_from_outputs(g2, M, P);
      const auto cin = critic_input(obs.global_obs, gw1, gw2);
      std::vector<double> dq_din;
      (void)gradients(critic, cin, {1.0}, &dq_din);
      const int base = 8 * M;
      for (int side = 0; side < 2; ++side) {
        std::vector<double> dW(dq_din.begin() + base + side * 2 * M,
                               dq_din.begin() + base + (side + 1) * 2 * M);
        const auto& graw = side == 0 ? g1 : g2;
        auto dldraw = beam_backward(graw, M, P, dW);
        // Ascent on Q = descent on -Q.
        for (auto& v : dldraw) v = -v;
        auto& net = side == 0 ? res.actor1 : res.actor2;
        auto& grads = side == 0 ? agrads1 : agrads2;
        auto& opt = side == 0 ? opt_a1 : opt_a2;
        zero_grads(grads);
        forward_trace(net, side == 0 ? obs.obs1 : obs.obs2, trace_ws);
        backprop(net, trace_ws, dldraw, grads);
        adam_step(opt, net, grads);
      }
    }

    if (cfg.trace_every > 0 &&
        (step % cfg.trace_every == 0 || step == cfg.steps - 1)) {
      CtdeConfig fixed = cfg;
      fixed.randomize_phases = false;
      Rng none(0);
      const auto tobs = detail::draw_observations(ch, fixed, none);
      const cvec tw1 = actor_forward(res.actor1, tobs.obs1, P);
      const cvec tw2 = actor_forward(res.actor2, tobs.obs2, P);
      res.trace.push_back({step, rates(ch, {tw1, tw2})});
    }
  }

  // Final greedy evaluation, averaged over observation draws.
  double r1 = 0.0, r2 = 0.0, rw = 0.0;
  for (int d = 0; d < cfg.eval_draws; ++d) {
    const auto eobs = detail::draw_observations(ch, cfg, eval_phase_rng);
    const cvec w1 = actor_forward(res.actor1, eobs.obs1, P);
    const cvec w2 = actor_forward(res.actor2, eobs.obs2, P);
    const auto rr = rates(ch, {w1, w2});
    r1 += rr.r1;
    r2 += rr.r2;
    rw += weighted_reward(rr);
  }
  res.final_rates = {r1 / cfg.eval_draws, r2 / cfg.eval_draws};
  res.final_weighted = rw / cfg.eval_draws;
  return res;
}

struct AlphaSweepEntry {
  double alpha = 0.0;
  bool with_pae = true;
  CtdeResult result;
};

struct AlphaSweepResult {
  std::vector<AlphaSweepEntry> runs;
  std::vector<ParetoPoint> boundary;
};

// One training run per alpha under the given preprocessing flag, plus the
// rate-region boundary for reference. Phase randomization is always on
// here; with PAE it is invisible, without it it exposes the ambiguity.
inline AlphaSweepResult sweep_alpha(const MisoChannel& ch,
                                    const std::vector<double>& alphas,
                                    const CtdeConfig& base_cfg, bool with_pae,
                                    int oracle_grid_n = 257) {
  AlphaSweepResult out;
  out.boundary = pareto_oracle(ch, oracle_grid_n);
  for (double a : alphas) {
    CtdeConfig cfg = base_cfg;
    cfg.alpha = a;
    cfg.use_pae = with_pae;
    cfg.randomize_phases = true;
    out.runs.push_back({a, with_pae, train_ctde(ch, cfg)});
  }
  return out;
}

}  // namespace ranlab
