#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ranlab {

// Midrise uniform quantizer with 2^bits levels inside [lo, hi].
// Out-of-range inputs clamp to the extreme levels.
struct UniformQuantizer {
  int bits = 1;
  double lo = -1.0;
  double hi = 1.0;

  int levels() const { return 1 << bits; }
  double step() const { return (hi - lo) / levels(); }
};

inline UniformQuantizer make_quantizer(int bits, double lo, double hi) {
  if (bits < 1) throw std::invalid_argument("quantizer needs bits >= 1");
  if (!(lo < hi)) throw std::invalid_argument("quantizer needs lo < hi");
  if (bits > 30) throw std::invalid_argument("quantizer bits too large");
  return UniformQuantizer{bits, lo, hi};
}

inline int quantize_scalar(const UniformQuantizer& q, double v) {
  const double t = (v - q.lo) / q.step();
  int code = static_cast<int>(std::floor(t));
  if (code < 0) code = 0;
  if (code >= q.levels()) code = q.levels() - 1;
  return code;
}

inline double dequantize_scalar(const UniformQuantizer& q, int code) {
  if (code < 0 || code >= q.levels()) {
    throw std::invalid_argument("code out of range for quantizer");
  }
  return q.lo + (code + 0.5) * q.step();
}

struct QuantizeResult {
  std::vector<int> codes;
  std::vector<double> dequantized;
};

inline QuantizeResult quantize(const UniformQuantizer& q,
                               const std::vector<double>& v) {
  QuantizeResult r;
  r.codes.resize(v.size());
  r.dequantized.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    r.codes[i] = quantize_scalar(q, v[i]);
    r.dequantized[i] = dequantize_scalar(q, r.codes[i]);
  }
  return r;
}

inline std::vector<double> dequantize(const UniformQuantizer& q,
                                      const std::vector<int>& codes) {
  std::vector<double> out(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    out[i] = dequantize_scalar(q, codes[i]);
  }
  return out;
}

// Straight-through mask: 1 where the quantizer acts as identity in the
// backward pass (input inside [lo, hi]), 0 in the clamped region.
inline double ste_passthrough(const UniformQuantizer& q, double v) {
  return (v >= q.lo && v <= q.hi) ? 1.0 : 0.0;
}

}  // namespace ranlab
