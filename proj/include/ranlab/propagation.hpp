#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ranlab {

// Macro-cell propagation abstractions: log-distance pathloss and the
// quadratic sectored-antenna patterns A(x) = -min(12 (x/hpbw)^2, A_max).
struct PropagationParams {
  double pl_intercept_db = 128.1;   // at 1 km
  double pl_slope = 37.6;           // dB per decade of km
  double hpbw_v_deg = 10.0;
  double sla_v_db = 20.0;
  double hpbw_h_deg = 65.0;
  double max_horiz_atten_db = 25.0;
  double noise_dbm = -104.0;
  double ue_height_m = 1.5;
};

inline void validate_params(const PropagationParams& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw std::invalid_argument(std::string("propagation: ") + name +
                                  " must be positive");
    }
  };
  positive(p.pl_slope, "pl_slope");
  positive(p.sla_v_db, "sla_v_db");
  positive(p.max_horiz_atten_db, "max_horiz_atten_db");
  if (!(p.hpbw_v_deg > 0.0 && p.hpbw_v_deg <= 90.0)) {
    throw std::invalid_argument("propagation: hpbw_v_deg outside (0, 90]");
  }
  if (!(p.hpbw_h_deg > 0.0 && p.hpbw_h_deg <= 90.0)) {
    throw std::invalid_argument("propagation: hpbw_h_deg outside (0, 90]");
  }
}

// Vertical pattern, theta and tilt in degrees below horizon. Peaks at the
// electrical tilt, floors at -sla_v.
inline double vertical_gain(double theta_deg, double tilt_deg,
                            const PropagationParams& p) {
  const double off = (theta_deg - tilt_deg) / p.hpbw_v_deg;
  return -std::min(12.0 * off * off, p.sla_v_db);
}

inline double wrap_deg(double a) {
  a = std::fmod(a + 180.0, 360.0);
  if (a < 0.0) a += 360.0;
  return a - 180.0;
}

inline double horizontal_gain(double phi_deg, const PropagationParams& p) {
  const double off = wrap_deg(phi_deg) / p.hpbw_h_deg;
  return -std::min(12.0 * off * off, p.max_horiz_atten_db);
}

// Log-distance pathloss with distance in meters; below 10 m the distance
// clamps, which keeps the value finite and monotone.
inline double pathloss_db(double distance_m, const PropagationParams& p) {
  if (distance_m < 0.0) throw std::invalid_argument("pathloss: distance < 0");
  const double d = std::max(distance_m, 10.0);
  return p.pl_intercept_db + p.pl_slope * std::log10(d / 1000.0);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace ranlab
