#pragma once

#include <algorithm>
#include <cmath>

namespace carnot {

// Quintic smoothstep on [0,1]: C^2 with vanishing first and second
// derivatives at both ends. All ramps below are built from it, so their
// |rho'| and |rho''| bounds are explicit (15/8 and 10/sqrt(3)).

inline double smoothstep01(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}
inline double smoothstep01_d1(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 30.0 * u * u * (1.0 - u) * (1.0 - u);
}
inline double smoothstep01_d2(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
}

/// Radial profile of the coarse cut-off: 1 on [0,1], 0 beyond gamma0.
inline double eta_coarse(double s, double gamma0) {
  if (s <= 1.0) return 1.0;
  if (s >= gamma0) return 0.0;
  return smoothstep01((gamma0 - s) / (gamma0 - 1.0));
}

/// Post-evolution ramp: 0 on (-inf,1/4], 1 on [3/4,inf).
inline double rho_ramp(double v) { return smoothstep01(2.0 * (v - 0.25)); }

/// Temporal ramp tau: 1 on [0,1], 0 beyond 2, C^2.
inline double tau_ramp(double s) {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  return smoothstep01(2.0 - s);
}
inline double tau_ramp_d1(double s) {
  if (s <= 1.0 || s >= 2.0) return 0.0;
  return -smoothstep01_d1(2.0 - s);
}
inline double tau_ramp_d2(double s) {
  if (s <= 1.0 || s >= 2.0) return 0.0;
  return smoothstep01_d2(2.0 - s);
}

/// Base profile of the graded bump: decreasing, 1 on [0,1/2], 0 at 1.
inline double bump_eta(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  return smoothstep01(2.0 * (1.0 - s));
}
inline double bump_eta_d1(double s) {
  if (s <= 0.5 || s >= 1.0) return 0.0;
  return -2.0 * smoothstep01_d1(2.0 * (1.0 - s));
}
inline double bump_eta_d2(double s) {
  if (s <= 0.5 || s >= 1.0) return 0.0;
  return 4.0 * smoothstep01_d2(2.0 * (1.0 - s));
}

}  // namespace carnot
