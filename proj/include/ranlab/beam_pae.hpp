#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "ranlab/beam_channel.hpp"

namespace ranlab {

// Phase ambiguity elimination: rotates each vector by the conjugate phase
// of its reference entry (the first nonzero one), making that entry real
// and nonnegative. Rates are invariant to a global phase per channel
// vector, so this picks a canonical representative of each equivalence
// class. Already-canonical vectors pass through bit-identically, which
// makes the map exactly idempotent.
inline cvec pae_vector(const cvec& h) {
  std::size_t ref = h.size();
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] != std::complex<double>(0.0, 0.0)) {
      ref = i;
      break;
    }
  }
  if (ref == h.size()) return h;  // all-zero vector
  const auto& r = h[ref];
  if (r.imag() == 0.0 && r.real() >= 0.0) return h;
  const double mag = std::abs(r);
  const std::complex<double> rot(r.real() / mag, -r.imag() / mag);
  cvec out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = h[i] * rot;
  // Pin the reference entry exactly onto the nonnegative real axis.
  out[ref] = std::complex<double>(mag, 0.0);
  return out;
}

inline std::vector<cvec> pae(const std::vector<cvec>& h_list) {
  std::vector<cvec> out;
  out.reserve(h_list.size());
  for (const auto& h : h_list) out.push_back(pae_vector(h));
  return out;
}

}  // namespace ranlab
