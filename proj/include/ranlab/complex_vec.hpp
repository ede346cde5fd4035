#pragma once

#include <complex>
#include <vector>

namespace ranlab {

using cvec = std::vector<std::complex<double>>;

inline std::complex<double> inner(const cvec& a, const cvec& b) {
  // conjugate-linear in the first argument: a^H b
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double norm_sq(const cvec& a) {
  double s = 0.0;
  for (const auto& x : a) s += std::norm(x);
  return s;
}

// Interleaved real representation [re0, im0, re1, im1, ...].
inline std::vector<double> to_interleaved(const cvec& v) {
  std::vector<double> out;
  out.reserve(2 * v.size());
  for (const auto& x : v) {
    out.push_back(x.real());
    out.push_back(x.imag());
  }
  return out;
}

inline cvec from_interleaved(const std::vector<double>& r) {
  cvec out(r.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::complex<double>(r[2 * i], r[2 * i + 1]);
  }
  return out;
}

}  // namespace ranlab
