#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ranlab/complex_vec.hpp"
#include "ranlab/rng.hpp"

namespace ranlab {

// Geometric few-path channel for a half-wavelength uniform linear array:
// h = sum_p g_p a(theta_p), a_m(theta) = exp(-i pi m sin theta), with
// complex-normal path gains and sector-limited angles.
struct CsiDatasetConfig {
  int n = 4096;
  int n_tx = 32;
  int n_paths = 3;
  double angle_spread_deg = 60.0;  // angles drawn from +/- this
};

inline void validate_csi_dataset(const CsiDatasetConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("csi dataset: n < 1");
  if (cfg.n_tx < 1) throw std::invalid_argument("csi dataset: n_tx < 1");
  if (cfg.n_paths < 1) throw std::invalid_argument("csi dataset: n_paths < 1");
  if (!(cfg.angle_spread_deg > 0.0 && cfg.angle_spread_deg <= 90.0)) {
    throw std::invalid_argument("csi dataset: angle_spread_deg outside (0,90]");
  }
}

inline cvec steering_vector(double theta_rad, int n_tx) {
  cvec a(n_tx);
  const double k = -std::numbers::pi * std::sin(theta_rad);
  for (int m = 0; m < n_tx; ++m) {
    a[m] = std::complex<double>(std::cos(k * m), std::sin(k * m));
  }
  return a;
}

// Dataset normalized so the mean power per complex dimension is exactly 1:
// mean over samples of ||h||^2 / n_tx == 1.
inline std::vector<cvec> sample_channels(const CsiDatasetConfig& cfg,
                                         std::uint64_t seed) {
  validate_csi_dataset(cfg);
  Rng rng(seed);
  std::vector<cvec> out;
  out.reserve(cfg.n);
  const double spread = cfg.angle_spread_deg * std::numbers::pi / 180.0;
  const double gain_scale = 1.0 / std::sqrt(2.0 * cfg.n_paths);
  double total_power = 0.0;
  for (int i = 0; i < cfg.n; ++i) {
    cvec h(cfg.n_tx, 0.0);
    for (int p = 0; p < cfg.n_paths; ++p) {
      const double theta = rng.uniform(-spread, spread);
      const std::complex<double> g(gain_scale * rng.normal(),
                                   gain_scale * rng.normal());
      const cvec a = steering_vector(theta, cfg.n_tx);
      for (int m = 0; m < cfg.n_tx; ++m) h[m] += g * a[m];
    }
    total_power += norm_sq(h);
    out.push_back(std::move(h));
  }
  const double mean_per_dim = total_power / (cfg.n * cfg.n_tx);
  const double scale = 1.0 / std::sqrt(mean_per_dim);
  for (auto& h : out) {
    for (auto& x : h) x *= scale;
  }
  return out;
}

inline std::vector<cvec> sample_channels(int n, int n_tx, int n_paths,
                                         std::uint64_t seed) {
  CsiDatasetConfig cfg;
  cfg.n = n;
  cfg.n_tx = n_tx;
  cfg.n_paths = n_paths;
  return sample_channels(cfg, seed);
}

}  // namespace ranlab
