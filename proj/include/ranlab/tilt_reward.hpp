#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ranlab/layout.hpp"
#include "ranlab/network_eval.hpp"

namespace ranlab {

// Per-cell KPI utility g(k) = beta * coverage + (1 - beta) * capacity/cap_norm.
inline double kpi_utility(const KpiVector& k, double beta, double cap_norm) {
  return beta * k.coverage + (1.0 - beta) * k.capacity / cap_norm;
}

// r = mu * g(own) + (1 - mu) * mean over the 6 nearest neighbor cells of g.
// Layouts with fewer than 6 other cells average over what exists.
inline double tilt_reward(const std::vector<KpiVector>& kpis_after, int cell_id,
                          const NetworkLayout& layout, double beta, double mu,
                          double cap_norm = 5.0) {
  if (beta < 0.0 || beta > 1.0 || mu < 0.0 || mu > 1.0) {
    throw std::invalid_argument("tilt_reward: beta and mu must be in [0,1]");
  }
  if (!(cap_norm > 0.0)) {
    throw std::invalid_argument("tilt_reward: cap_norm must be positive");
  }
  const double own = kpi_utility(kpis_after.at(cell_id), beta, cap_norm);
  const auto order = neighbor_order(layout, cell_id);
  const int n = std::min<int>(6, static_cast<int>(order.size()));
  double neigh = 0.0;
  if (n > 0) {
    for (int i = 0; i < n; ++i) {
      neigh += kpi_utility(kpis_after[order[i]], beta, cap_norm);
    }
    neigh /= n;
  }
  return mu * own + (1.0 - mu) * neigh;
}

}  // namespace ranlab
