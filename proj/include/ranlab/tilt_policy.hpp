#pragma once

#include <stdexcept>
#include <vector>

#include "ranlab/dense_net.hpp"
#include "ranlab/network_eval.hpp"
#include "ranlab/rng.hpp"

namespace ranlab {

enum class TiltAction : int { uptilt = 0, downtilt = 1, nochange = 2 };

struct RuleThresholds {
  double cov_low = 0.75;   // below: uptilt to win back coverage
  double cov_high = 0.90;  // above, with weak capacity: downtilt
  double cap_low = 2.0;    // bits/s/Hz
};

inline void validate_thresholds(const RuleThresholds& t) {
  if (!(t.cov_low < t.cov_high)) {
    throw std::invalid_argument("rule thresholds: need cov_low < cov_high");
  }
}

// Deterministic rule branch of the baseline policy.
inline TiltAction rule_action(const KpiVector& own, const RuleThresholds& t) {
  if (own.coverage < t.cov_low) return TiltAction::uptilt;
  if (own.coverage > t.cov_high && own.capacity < t.cap_low) {
    return TiltAction::downtilt;
  }
  return TiltAction::nochange;
}

struct ActionSample {
  TiltAction action = TiltAction::nochange;
  double propensity = 1.0;
};

// Epsilon-mixed rule policy. With probability 1-eps the rule action is
// taken; otherwise one of the three actions is drawn uniformly. The
// returned propensity is the true emission probability of the sampled
// action: (1-eps) * 1[a == rule] + eps/3. eps = 1 gives the uniform
// logging policy used for the weighting-equivalence check.
inline ActionSample rule_based_action(const KpiVector& own,
                                      const RuleThresholds& t, double epsilon,
                                      Rng& rng) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("rule_based_action: epsilon outside (0,1]");
  }
  validate_thresholds(t);
  const TiltAction rule = rule_action(own, t);
  TiltAction chosen = rule;
  if (rng.uniform() < epsilon) {
    chosen = static_cast<TiltAction>(rng.uniform_index(3));
  }
  const double propensity =
      (1.0 - epsilon) * (chosen == rule ? 1.0 : 0.0) + epsilon / 3.0;
  return {chosen, propensity};
}

enum class PolicyKind { rule_based, greedy_q, nochange };

// Either the rule-based baseline, a greedy Q-network policy, or the
// do-nothing control. One shared Q-net serves every cell.
struct TiltPolicy {
  PolicyKind kind = PolicyKind::rule_based;
  RuleThresholds thresholds;
  DenseNet qnet;
  int feature_count = 35;
};

inline int greedy_argmax(const std::vector<double>& q) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(q.size()); ++i) {
    if (q[i] > q[best]) best = i;
  }
  return best;
}

inline TiltAction policy_action(const TiltPolicy& policy, const KpiVector& own,
                                const std::vector<double>& features) {
  switch (policy.kind) {
    case PolicyKind::rule_based:
      return rule_action(own, policy.thresholds);
    case PolicyKind::greedy_q: {
      if (static_cast<int>(features.size()) != policy.qnet.input_size()) {
        throw std::invalid_argument("policy_action: feature length mismatch");
      }
      return static_cast<TiltAction>(greedy_argmax(forward(policy.qnet, features)));
    }
    case PolicyKind::nochange:
      return TiltAction::nochange;
  }
  return TiltAction::nochange;
}

}  // namespace ranlab
