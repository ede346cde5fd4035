#pragma once

// Brute-force inner bound of the two-user rate region, independent of the
// MRT-ZF parametrization under test. It relies only on two elementary
// facts:
//   1. A beam w enters the rates solely through (s, i) = (|h_own^H w|^2,
//      |h_cross^H w|^2), r_own increasing in s and r_other decreasing in i,
//      so per BS only the (max s, min i) frontier of achievable pairs can
//      matter for the region boundary.
//   2. Scaling a direction's power by p in [0, 1] scales its (s, i) pair
//      linearly, so the power dimension is swept exactly instead of
//      sampled.
// Directions are sampled isotropically, one pair per sample budget unit;
// the two per-side frontiers are then crossed and Pareto-filtered.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ranlab/beam_channel.hpp"
#include "ranlab/beam_pareto.hpp"
#include "ranlab/rng.hpp"

namespace ranlab_test {

struct SiPoint {
  double s = 0.0;
  double i = 0.0;
};

// Frontier of {p * (S_k, I_k) : p in [0,1], k sampled}: for interference
// level i, the best signal is max_k min(1, i/I_k) * S_k. Evaluated on a
// quadratically spaced i-grid (dense near zero, where zero-forcing lives)
// plus the exact full-power endpoints of non-dominated directions.
inline std::vector<SiPoint> side_frontier(const ranlab::cvec& h_own,
                                          const ranlab::cvec& h_cross,
                                          double power, int n_dirs,
                                          int n_grid, ranlab::Rng& rng) {
  std::vector<SiPoint> full_power;
  full_power.reserve(n_dirs);
  const int m = static_cast<int>(h_own.size());
  ranlab::cvec d(m);
  double i_max = 0.0;
  for (int k = 0; k < n_dirs; ++k) {
    double n2 = 0.0;
    for (auto& x : d) {
      x = std::complex<double>(rng.normal(), rng.normal());
      n2 += std::norm(x);
    }
    const double inv = 1.0 / n2;
    const double s = power * std::norm(ranlab::inner(h_own, d)) * inv;
    const double i = power * std::norm(ranlab::inner(h_cross, d)) * inv;
    full_power.push_back({s, i});
    i_max = std::max(i_max, i);
  }
  // Keep direction endpoints not dominated in the (max s, min i) sense.
  std::sort(full_power.begin(), full_power.end(),
            [](const SiPoint& a, const SiPoint& b) {
              if (a.i != b.i) return a.i < b.i;
              return a.s > b.s;
            });
  std::vector<SiPoint> kept;
  double best_s = -1.0;
  for (const auto& p : full_power) {
    if (p.s > best_s) {
      kept.push_back(p);
      best_s = p.s;
    }
  }

  std::vector<SiPoint> frontier = kept;
  for (int g = 0; g <= n_grid; ++g) {
    const double frac = static_cast<double>(g) / n_grid;
    const double i = i_max * frac * frac;
    double s = 0.0;
    for (const auto& p : kept) {
      const double cand = p.i <= i ? p.s : p.s * (i / p.i);
      s = std::max(s, cand);
    }
    frontier.push_back({s, i});
  }
  return frontier;
}

inline std::vector<ranlab::RatePair> bruteforce_region_boundary(
    const ranlab::MisoChannel& ch, int n_dirs_per_side, ranlab::Rng& rng,
    int n_grid = 1500) {
  auto f1 = side_frontier(ch.h[0][0], ch.h[0][1], ch.power_budget,
                          n_dirs_per_side, n_grid, rng);
  auto f2 = side_frontier(ch.h[1][1], ch.h[1][0], ch.power_budget,
                          n_dirs_per_side, n_grid, rng);
  std::vector<ranlab::ParetoPoint> pts;
  pts.reserve(f1.size() * f2.size());
  for (const auto& a : f1) {
    for (const auto& b : f2) {
      const double r1 = std::log2(1.0 + a.s / (ch.noise_power + b.i));
      const double r2 = std::log2(1.0 + b.s / (ch.noise_power + a.i));
      pts.push_back({0.0, 0.0, {r1, r2}});
    }
  }
  auto filtered = ranlab::pareto_filter(std::move(pts));
  std::vector<ranlab::RatePair> out;
  out.reserve(filtered.size());
  for (const auto& p : filtered) out.push_back(p.rates);
  return out;
}

inline std::vector<ranlab::RatePair> boundary_rates(
    const std::vector<ranlab::ParetoPoint>& pts) {
  std::vector<ranlab::RatePair> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p.rates);
  return out;
}

}  // namespace ranlab_test
