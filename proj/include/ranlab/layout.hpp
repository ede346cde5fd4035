#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ranlab/rng.hpp"

namespace ranlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct CellConfig {
  int cell_id = 0;
  int site_index = 0;
  double azimuth_deg = 0.0;
  double tilt_deg = 0.0;
  double tx_power_dbm = 46.0;
  double height_m = 25.0;
};

// Hexagonal grid of three-sector sites. Site 0 sits at the origin; ring k
// contributes 6k sites, so cell count = 3 * (1 + sum_{r<=n_rings} 6r).
struct NetworkLayout {
  std::vector<Vec2> sites;
  std::vector<CellConfig> cells;
  double inter_site_distance = 500.0;
  int n_rings = 1;
  std::uint64_t seed = 0;

  int cell_count() const { return static_cast<int>(cells.size()); }
  // Radius of the disc users are dropped in.
  double deployment_radius() const {
    return (n_rings + 0.5) * inter_site_distance;
  }
};

struct LayoutOptions {
  double initial_tilt_deg = 6.0;
  // When > 0, per-cell initial tilts are drawn uniformly from
  // initial_tilt_deg +/- tilt_jitter_deg using the layout seed.
  double tilt_jitter_deg = 0.0;
  double tx_power_dbm = 46.0;
  double bs_height_m = 25.0;
  double site_rotation_deg = 0.0;
};

inline NetworkLayout build_layout(int n_rings, double isd, std::uint64_t seed,
                                  const LayoutOptions& opt = {}) {
  if (n_rings < 0) throw std::invalid_argument("build_layout: n_rings < 0");
  if (!(isd > 0.0)) throw std::invalid_argument("build_layout: isd <= 0");

  NetworkLayout layout;
  layout.inter_site_distance = isd;
  layout.n_rings = n_rings;
  layout.seed = seed;

  // Axial hex coordinates -> cartesian meters.
  auto to_xy = [isd](int q, int r) {
    return Vec2{isd * (q + 0.5 * r), isd * (std::sqrt(3.0) / 2.0) * r};
  };
  layout.sites.push_back(to_xy(0, 0));
  static constexpr std::array<std::array<int, 2>, 6> kRingDirs = {
      {{-1, 1}, {-1, 0}, {0, -1}, {1, -1}, {1, 0}, {0, 1}}};
  for (int ring = 1; ring <= n_rings; ++ring) {
    int q = ring;
    int r = 0;
    for (const auto& dir : kRingDirs) {
      for (int step = 0; step < ring; ++step) {
        layout.sites.push_back(to_xy(q, r));
        q += dir[0];
        r += dir[1];
      }
    }
  }

  Rng tilt_rng = Rng(seed).child("initial_tilts");
  for (int s = 0; s < static_cast<int>(layout.sites.size()); ++s) {
    for (int sector = 0; sector < 3; ++sector) {
      CellConfig cell;
      cell.cell_id = s * 3 + sector;
      cell.site_index = s;
      cell.azimuth_deg =
          std::fmod(120.0 * sector + opt.site_rotation_deg, 360.0);
      cell.tilt_deg = opt.initial_tilt_deg;
      if (opt.tilt_jitter_deg > 0.0) {
        cell.tilt_deg += tilt_rng.uniform(-opt.tilt_jitter_deg,
                                          opt.tilt_jitter_deg);
      }
      cell.tx_power_dbm = opt.tx_power_dbm;
      cell.height_m = opt.bs_height_m;
      layout.cells.push_back(cell);
    }
  }
  return layout;
}

// Other cells ordered by ascending distance between sites, ties by cell_id.
// Co-sited sectors therefore come first.
inline std::vector<int> neighbor_order(const NetworkLayout& layout,
                                       int cell_id) {
  if (cell_id < 0 || cell_id >= layout.cell_count()) {
    throw std::invalid_argument("neighbor_order: bad cell_id");
  }
  const Vec2 own = layout.sites[layout.cells[cell_id].site_index];
  std::vector<int> ids;
  ids.reserve(layout.cells.size() - 1);
  for (const auto& c : layout.cells) {
    if (c.cell_id != cell_id) ids.push_back(c.cell_id);
  }
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    const double da = distance(own, layout.sites[layout.cells[a].site_index]);
    const double db = distance(own, layout.sites[layout.cells[b].site_index]);
    if (da != db) return da < db;
    return a < b;
  });
  return ids;
}

}  // namespace ranlab
