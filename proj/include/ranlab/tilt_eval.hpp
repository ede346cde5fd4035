#pragma once

#include <cstdint>
#include <vector>

#include "ranlab/network_eval.hpp"
#include "ranlab/tilt_log.hpp"
#include "ranlab/tilt_policy.hpp"

namespace ranlab {

struct PolicyEvalResult {
  double mean_reward = 0.0;
  double baseline_mean_reward = 0.0;
  double gain_pct = 0.0;
  std::vector<double> per_seed_mean;  // policy side, one entry per seed
};

namespace detail {

// Greedy rollout (no exploration) of one policy from the layout's initial
// tilts; returns the mean reward over cells and days.
inline double rollout_mean_reward(const NetworkLayout& initial_layout,
                                  const PropagationParams& params,
                                  const TiltSimConfig& sim,
                                  const TiltPolicy& policy, int n_days,
                                  std::uint64_t seed) {
  NetworkLayout layout = initial_layout;
  Rng root(seed);
  auto eval = evaluate_network(layout, params, sim.n_users,
                               root.child("drop").child(0).seed(),
                               sim.sinr_threshold_db);
  double total = 0.0;
  long count = 0;
  for (int day = 0; day + 1 < n_days; ++day) {
    std::vector<TiltAction> actions(layout.cell_count());
    for (int c = 0; c < layout.cell_count(); ++c) {
      std::vector<double> features;
      if (policy.kind == PolicyKind::greedy_q) {
        features = build_features(eval.kpis, c, layout, policy.feature_count,
                                  sim.scaling);
      }
      actions[c] = policy_action(policy, eval.kpis[c], features);
    }
    for (int c = 0; c < layout.cell_count(); ++c) {
      layout.cells[c].tilt_deg =
          apply_tilt_action(layout.cells[c].tilt_deg, actions[c], sim);
    }
    eval = evaluate_network(layout, params, sim.n_users,
                            root.child("drop").child(day + 1).seed(),
                            sim.sinr_threshold_db);
    for (int c = 0; c < layout.cell_count(); ++c) {
      total += tilt_reward(eval.kpis, c, layout, sim.beta, sim.mu, sim.cap_norm);
      count += 1;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace detail

// Rolls the candidate policy and the rule-based baseline forward from the
// same initial tilts and identical per-seed user drops.
// gain% = 100 * (mean_policy - mean_baseline) / |mean_baseline|.
inline PolicyEvalResult evaluate_policy(const NetworkLayout& layout,
                                        const PropagationParams& params,
                                        const TiltSimConfig& sim,
                                        const TiltPolicy& policy, int n_days,
                                        int n_seeds,
                                        std::uint64_t base_seed = 1000) {
  if (n_days < 2) throw std::invalid_argument("evaluate_policy: n_days < 2");
  if (n_seeds < 1) throw std::invalid_argument("evaluate_policy: n_seeds < 1");
  validate_sim(sim);

  TiltPolicy baseline;
  baseline.kind = PolicyKind::rule_based;
  baseline.thresholds = sim.thresholds;

  PolicyEvalResult res;
  double policy_sum = 0.0;
  double base_sum = 0.0;
  for (int s = 0; s < n_seeds; ++s) {
    const std::uint64_t seed = Rng(base_seed).child(s).seed();
    const double mp = detail::rollout_mean_reward(layout, params, sim, policy,
                                                  n_days, seed);
    const double mb = detail::rollout_mean_reward(layout, params, sim,
                                                  baseline, n_days, seed);
    res.per_seed_mean.push_back(mp);
    policy_sum += mp;
    base_sum += mb;
  }
  res.mean_reward = policy_sum / n_seeds;
  res.baseline_mean_reward = base_sum / n_seeds;
  res.gain_pct = 100.0 * (res.mean_reward - res.baseline_mean_reward) /
                 std::abs(res.baseline_mean_reward);
  return res;
}

}  // namespace ranlab
