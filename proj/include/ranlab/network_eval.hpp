#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ranlab/layout.hpp"
#include "ranlab/propagation.hpp"
#include "ranlab/rng.hpp"

namespace ranlab {

// Reserved finite floor standing in for -inf dB in empty-cell KPI slots.
inline constexpr double kSinrFloorDb = -300.0;

struct UserDrop {
  std::vector<Vec2> positions;
  std::vector<int> attachment;    // serving cell_id per user
  std::vector<double> sinr_db;    // per user
};

struct KpiVector {
  double coverage = 0.0;      // fraction of attached users above threshold
  double capacity = 0.0;      // mean log2(1 + SINR) in bits/s/Hz
  double mean_sinr_db = 0.0;
  double edge_sinr_db = 0.0;  // 5th percentile of the per-user dB samples
  double load = 0.0;          // attached-user count
};

// Received power over one link, including both antenna patterns.
inline double received_power_dbm(const Vec2& user, const Vec2& site,
                                 const CellConfig& cell,
                                 const PropagationParams& params) {
  const double dx = user.x - site.x;
  const double dy = user.y - site.y;
  const double d2d = std::hypot(dx, dy);
  const double dh = cell.height_m - params.ue_height_m;
  const double d3d = std::hypot(d2d, dh);
  const double theta_deg =
      std::atan2(dh, d2d) * 180.0 / std::numbers::pi;  // down is positive
  const double bearing_deg = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
  const double gain = vertical_gain(theta_deg, cell.tilt_deg, params) +
                      horizontal_gain(bearing_deg - cell.azimuth_deg, params);
  return cell.tx_power_dbm + gain - pathloss_db(d3d, params);
}

struct NetworkEvalResult {
  UserDrop drop;
  std::vector<KpiVector> kpis;  // indexed by cell_id
};

// Drops users uniformly in the deployment disc, attaches each to the
// strongest-power cell, and computes SINR and per-cell KPIs. Pure function
// of (layout, params, n_users, seed).
inline NetworkEvalResult evaluate_network(const NetworkLayout& layout,
                                          const PropagationParams& params,
                                          int n_users, std::uint64_t seed,
                                          double sinr_threshold_db = -6.0) {
  if (n_users < 1) throw std::invalid_argument("evaluate_network: n_users < 1");
  validate_params(params);

  NetworkEvalResult res;
  auto& drop = res.drop;
  const int n_cells = layout.cell_count();
  Rng rng(seed);

  drop.positions.resize(n_users);
  drop.attachment.resize(n_users);
  drop.sinr_db.resize(n_users);
  const double radius = layout.deployment_radius();
  for (auto& pos : drop.positions) {
    const double r = radius * std::sqrt(rng.uniform());
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    pos = Vec2{r * std::cos(phi), r * std::sin(phi)};
  }

  const double noise_mw = db_to_linear(params.noise_dbm);
  std::vector<double> rx_mw(n_cells);
  std::vector<std::vector<double>> cell_sinr_db(n_cells);
  for (int u = 0; u < n_users; ++u) {
    double total_mw = 0.0;
    int best = 0;
    for (int c = 0; c < n_cells; ++c) {
      const auto& cell = layout.cells[c];
      const double p_dbm = received_power_dbm(
          drop.positions[u], layout.sites[cell.site_index], cell, params);
      rx_mw[c] = db_to_linear(p_dbm);
      total_mw += rx_mw[c];
      if (rx_mw[c] > rx_mw[best]) best = c;
    }
    const double interference = total_mw - rx_mw[best];
    const double sinr_lin = rx_mw[best] / (noise_mw + interference);
    drop.attachment[u] = best;
    drop.sinr_db[u] = linear_to_db(sinr_lin);
    cell_sinr_db[best].push_back(drop.sinr_db[u]);
  }

  res.kpis.resize(n_cells);
  for (int c = 0; c < n_cells; ++c) {
    auto& kpi = res.kpis[c];
    auto& samples = cell_sinr_db[c];
    kpi.load = static_cast<double>(samples.size());
    if (samples.empty()) {
      kpi.coverage = 0.0;
      kpi.capacity = 0.0;
      kpi.mean_sinr_db = kSinrFloorDb;
      kpi.edge_sinr_db = kSinrFloorDb;
      continue;
    }
    std::sort(samples.begin(), samples.end());
    double covered = 0.0;
    double cap = 0.0;
    double mean_db = 0.0;
    for (double s_db : samples) {
      if (s_db >= sinr_threshold_db) covered += 1.0;
      cap += std::log2(1.0 + db_to_linear(s_db));
      mean_db += s_db;
    }
    const double n = static_cast<double>(samples.size());
    kpi.coverage = covered / n;
    kpi.capacity = cap / n;
    kpi.mean_sinr_db = mean_db / n;
    const std::size_t edge_idx =
        static_cast<std::size_t>(std::floor(0.05 * (n - 1.0)));
    kpi.edge_sinr_db = samples[edge_idx];
  }
  return res;
}

}  // namespace ranlab
