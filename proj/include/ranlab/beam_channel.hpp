#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ranlab/complex_vec.hpp"
#include "ranlab/rng.hpp"

namespace ranlab {

// Two-cell MISO interference channel: BS j (M antennas) serves
// single-antenna user j; h[j][k] is the channel from BS j to user k.
struct MisoChannel {
  int M = 2;
  std::array<std::array<cvec, 2>, 2> h;
  double noise_power = 0.1;
  double power_budget = 1.0;
};

inline void validate_channel(const MisoChannel& ch) {
  if (ch.M < 2) throw std::invalid_argument("channel: M < 2");
  if (!(ch.noise_power > 0.0)) {
    throw std::invalid_argument("channel: noise_power <= 0");
  }
  if (!(ch.power_budget > 0.0)) {
    throw std::invalid_argument("channel: power_budget <= 0");
  }
  for (const auto& row : ch.h) {
    for (const auto& v : row) {
      if (static_cast<int>(v.size()) != ch.M) {
        throw std::invalid_argument("channel: vector length != M");
      }
      for (const auto& x : v) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
          throw std::invalid_argument("channel: non-finite entry");
        }
      }
    }
  }
}

// i.i.d. unit-variance complex normal entries; snr_db sets
// power_budget / noise_power with power_budget = 1.
inline MisoChannel sample_channel(int M, double snr_db, Rng& rng) {
  MisoChannel ch;
  ch.M = M;
  ch.power_budget = 1.0;
  ch.noise_power = std::pow(10.0, -snr_db / 10.0);
  for (auto& row : ch.h) {
    for (auto& v : row) {
      v.resize(M);
      for (auto& x : v) {
        x = std::complex<double>(rng.normal() / std::sqrt(2.0),
                                 rng.normal() / std::sqrt(2.0));
      }
    }
  }
  validate_channel(ch);
  return ch;
}

struct BeamformerSet {
  cvec w1;
  cvec w2;
};

struct RatePair {
  double r1 = 0.0;
  double r2 = 0.0;
};

// r_k = log2(1 + |h_kk^H w_k|^2 / (noise + |h_jk^H w_j|^2)), j != k.
inline RatePair rates(const MisoChannel& ch, const BeamformerSet& bf) {
  const double tol = 1e-9;
  if (norm_sq(bf.w1) > ch.power_budget * (1.0 + tol) + tol ||
      norm_sq(bf.w2) > ch.power_budget * (1.0 + tol) + tol) {
    throw std::invalid_argument("rates: beam violates power budget");
  }
  const double s1 = std::norm(inner(ch.h[0][0], bf.w1));
  const double i1 = std::norm(inner(ch.h[1][0], bf.w2));  // BS2 -> user 1
  const double s2 = std::norm(inner(ch.h[1][1], bf.w2));
  const double i2 = std::norm(inner(ch.h[0][1], bf.w1));  // BS1 -> user 2
  return {std::log2(1.0 + s1 / (ch.noise_power + i1)),
          std::log2(1.0 + s2 / (ch.noise_power + i2))};
}

// Maximum-ratio transmission: full power along the own channel.
inline cvec mrt(const cvec& h_own, double power) {
  const double n = std::sqrt(norm_sq(h_own));
  if (n == 0.0) throw std::invalid_argument("mrt: zero channel");
  cvec w(h_own.size());
  const double scale = std::sqrt(power) / n;
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = scale * h_own[i];
  return w;
}

// Zero-forcing: full power along the projection of the own channel onto the
// orthogonal complement of the cross channel. Returns the zero vector when
// the channels are parallel and no such direction exists.
inline cvec zf(const cvec& h_own, const cvec& h_cross, double power) {
  if (norm_sq(h_own) == 0.0) throw std::invalid_argument("zf: zero channel");
  if (norm_sq(h_cross) == 0.0) return mrt(h_own, power);
  const std::complex<double> c = inner(h_cross, h_own) / norm_sq(h_cross);
  cvec proj(h_own.size());
  for (std::size_t i = 0; i < proj.size(); ++i) {
    proj[i] = h_own[i] - c * h_cross[i];
  }
  const double n2 = norm_sq(proj);
  // Relative threshold: below it the residual is numerical noise.
  if (n2 <= 1e-24 * norm_sq(h_own)) {
    return cvec(h_own.size(), 0.0);
  }
  const double scale = std::sqrt(power / n2);
  for (auto& x : proj) x *= scale;
  return proj;
}

inline double single_user_capacity(const MisoChannel& ch, int user) {
  const auto& h = ch.h[user][user];
  return std::log2(1.0 + ch.power_budget * norm_sq(h) / ch.noise_power);
}

}  // namespace ranlab
