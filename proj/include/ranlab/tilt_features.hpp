#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "ranlab/layout.hpp"
#include "ranlab/network_eval.hpp"

namespace ranlab {

// Affine standardization per KPI component: scaled = (x - offset) / scale.
struct FeatureScaling {
  std::array<double, 2> coverage = {0.5, 0.5};
  std::array<double, 2> capacity = {2.5, 2.5};
  std::array<double, 2> mean_sinr = {10.0, 10.0};
  std::array<double, 2> edge_sinr = {0.0, 10.0};
  std::array<double, 2> load = {100.0, 100.0};
};

inline void append_scaled_kpis(const KpiVector& k, const FeatureScaling& s,
                               std::vector<double>& out) {
  out.push_back((k.coverage - s.coverage[0]) / s.coverage[1]);
  out.push_back((k.capacity - s.capacity[0]) / s.capacity[1]);
  out.push_back((k.mean_sinr_db - s.mean_sinr[0]) / s.mean_sinr[1]);
  out.push_back((k.edge_sinr_db - s.edge_sinr[0]) / s.edge_sinr[1]);
  out.push_back((k.load - s.load[0]) / s.load[1]);
}

// 5 features: own KPIs. 20: own + 3 nearest neighbor cells. 35: own + 6.
// Neighbor order is ascending site distance with cell_id tie-break, so
// co-sited sectors come first.
inline std::vector<double> build_features(const std::vector<KpiVector>& kpis,
                                          int cell_id,
                                          const NetworkLayout& layout,
                                          int feature_count,
                                          const FeatureScaling& scaling = {}) {
  int n_neighbors = 0;
  switch (feature_count) {
    case 5: n_neighbors = 0; break;
    case 20: n_neighbors = 3; break;
    case 35: n_neighbors = 6; break;
    default:
      throw std::invalid_argument("build_features: feature_count not in {5,20,35}");
  }
  if (static_cast<int>(kpis.size()) != layout.cell_count()) {
    throw std::invalid_argument("build_features: kpi list size mismatch");
  }
  std::vector<double> out;
  out.reserve(feature_count);
  append_scaled_kpis(kpis.at(cell_id), scaling, out);
  if (n_neighbors > 0) {
    const auto order = neighbor_order(layout, cell_id);
    if (static_cast<int>(order.size()) < n_neighbors) {
      throw std::invalid_argument(
          "build_features: layout has too few cells for feature_count");
    }
    for (int i = 0; i < n_neighbors; ++i) {
      append_scaled_kpis(kpis[order[i]], scaling, out);
    }
  }
  return out;
}

}  // namespace ranlab
