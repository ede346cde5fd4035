#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ranlab/beam_channel.hpp"
#include "ranlab/rng.hpp"

namespace ranlab {

struct ParetoPoint {
  double lambda1 = 0.0;  // -1 marks a single-user corner point
  double lambda2 = 0.0;
  RatePair rates;
};

// Keeps the non-dominated points: p survives unless some q has
// q.r1 >= p.r1 and q.r2 >= p.r2 with at least one strict.
inline std::vector<ParetoPoint> pareto_filter(std::vector<ParetoPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    if (a.rates.r1 != b.rates.r1) return a.rates.r1 > b.rates.r1;
    return a.rates.r2 > b.rates.r2;
  });
  std::vector<ParetoPoint> out;
  double best_r2 = -1.0;
  for (const auto& p : pts) {
    if (p.rates.r2 > best_r2) {
      out.push_back(p);
      best_r2 = p.rates.r2;
    }
  }
  return out;
}

// Beam on the MRT-ZF segment, renormalized to full power:
// w(lambda) = sqrt(P) * (lambda*mrt + (1-lambda)*zf) / ||.||.
inline cvec mrt_zf_combination(const cvec& h_own, const cvec& h_cross,
                               double power, double lambda) {
  const cvec wm = mrt(h_own, power);
  const cvec wz = zf(h_own, h_cross, power);
  cvec w(h_own.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = lambda * wm[i] + (1.0 - lambda) * wz[i];
  }
  const double n2 = norm_sq(w);
  if (n2 == 0.0) return w;
  const double scale = std::sqrt(power / n2);
  for (auto& x : w) x *= scale;
  return w;
}

namespace detail {

// Fallback for degenerate geometry (own channel parallel to the cross
// channel): dense random direction sampling with exact power sweep,
// seeded from the channel bytes so the result stays deterministic.
inline std::vector<ParetoPoint> random_beam_oracle(const MisoChannel& ch,
                                                   int n_dirs, int n_powers) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    h = (h ^ bits) * 0x100000001b3ULL;
  };
  for (const auto& row : ch.h) {
    for (const auto& v : row) {
      for (const auto& x : v) {
        mix(x.real());
        mix(x.imag());
      }
    }
  }
  Rng rng(h);
  auto random_dir = [&rng](int m) {
    cvec d(m);
    for (auto& x : d) {
      x = std::complex<double>(rng.normal(), rng.normal());
    }
    const double n2 = norm_sq(d);
    const double scale = n2 > 0.0 ? 1.0 / std::sqrt(n2) : 0.0;
    for (auto& x : d) x *= scale;
    return d;
  };
  std::vector<ParetoPoint> pts;
  for (int i = 0; i < n_dirs; ++i) {
    const cvec d1 = random_dir(ch.M);
    const cvec d2 = random_dir(ch.M);
    for (int pi = 0; pi <= n_powers; ++pi) {
      for (int pj = 0; pj <= n_powers; ++pj) {
        const double a = std::sqrt(ch.power_budget * pi / n_powers);
        const double b = std::sqrt(ch.power_budget * pj / n_powers);
        BeamformerSet bf;
        bf.w1.resize(ch.M);
        bf.w2.resize(ch.M);
        for (int m = 0; m < ch.M; ++m) {
          bf.w1[m] = a * d1[m];
          bf.w2[m] = b * d2[m];
        }
        pts.push_back({-1.0, -1.0, rates(ch, bf)});
      }
    }
  }
  return pareto_filter(std::move(pts));
}

}  // namespace detail

// Rate-region boundary from the full-power MRT-ZF family swept over a
// (lambda1, lambda2) grid, plus the two single-user corners with the other
// BS silent, Pareto-filtered. lambda = -1 marks the corner rows.
inline std::vector<ParetoPoint> pareto_oracle(const MisoChannel& ch,
                                              int grid_n) {
  if (grid_n < 2) throw std::invalid_argument("pareto_oracle: grid_n < 2");
  validate_channel(ch);

  const cvec zf1 = zf(ch.h[0][0], ch.h[0][1], ch.power_budget);
  const cvec zf2 = zf(ch.h[1][1], ch.h[1][0], ch.power_budget);
  if (norm_sq(zf1) == 0.0 || norm_sq(zf2) == 0.0) {
    return detail::random_beam_oracle(ch, 20000, 24);
  }

  std::vector<ParetoPoint> pts;
  pts.reserve(static_cast<std::size_t>(grid_n) * grid_n + 2);
  std::vector<cvec> w1_grid(grid_n), w2_grid(grid_n);
  std::vector<double> lam(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    lam[i] = static_cast<double>(i) / (grid_n - 1);
    w1_grid[i] = mrt_zf_combination(ch.h[0][0], ch.h[0][1], ch.power_budget, lam[i]);
    w2_grid[i] = mrt_zf_combination(ch.h[1][1], ch.h[1][0], ch.power_budget, lam[i]);
  }
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      pts.push_back({lam[i], lam[j], rates(ch, {w1_grid[i], w2_grid[j]})});
    }
  }
  // Single-user corners: the other BS stays silent.
  const cvec silent(ch.M, 0.0);
  pts.push_back({-1.0, -1.0,
                 rates(ch, {mrt(ch.h[0][0], ch.power_budget), silent})});
  pts.push_back({-1.0, -1.0,
                 rates(ch, {silent, mrt(ch.h[1][1], ch.power_budget)})});
  return pareto_filter(std::move(pts));
}

// Hausdorff distance between the rate regions spanned by two boundary
// point sets. Each boundary describes the monotone region dominated by its
// points, so the distance from a point to the other region is zero when
// some point there dominates it, and the componentwise excess otherwise.
// This compares the region shapes; Euclidean distance between the Pareto
// point sets would instead punish interior staircase artifacts of sampled
// inner bounds.
inline double region_hausdorff(const std::vector<RatePair>& a,
                               const std::vector<RatePair>& b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("region_hausdorff: empty point set");
  }
  auto directed = [](const std::vector<RatePair>& from,
                     const std::vector<RatePair>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) {
        const double d = std::hypot(std::max(0.0, p.r1 - q.r1),
                                    std::max(0.0, p.r2 - q.r2));
        if (d < best) best = d;
        if (best == 0.0) break;
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace ranlab
