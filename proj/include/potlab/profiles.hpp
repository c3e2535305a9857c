#pragma once

#include <cmath>

namespace potlab::profile {

/// C-infinity step: 1 for t <= 0, 0 for t >= 1.
inline double smoothstep(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - t));
  const double b = std::exp(-1.0 / t);
  return a / (a + b);
}

inline double smoothstep_deriv(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - t));
  const double b = std::exp(-1.0 / t);
  const double da = -a / ((1.0 - t) * (1.0 - t));
  const double db = b / (t * t);
  return (da * b - a * db) / ((a + b) * (a + b));
}

inline constexpr double cutoff_window = 0.25;

/// exp(-r^2 / 2 sigma^2) tapered smoothly to 0 on [cut - 1/4, cut] sigma.
inline double gaussian(double r, double sigma, double cut = 4.0) {
  const double s = smoothstep((r / sigma - (cut - cutoff_window)) / cutoff_window);
  return s == 0.0 ? 0.0 : std::exp(-0.5 * r * r / (sigma * sigma)) * s;
}

inline double gaussian_deriv(double r, double sigma, double cut = 4.0) {
  const double t = (r / sigma - (cut - cutoff_window)) / cutoff_window;
  const double s = smoothstep(t);
  const double e = std::exp(-0.5 * r * r / (sigma * sigma));
  return e * (-r / (sigma * sigma) * s + smoothstep_deriv(t) / (cutoff_window * sigma));
}

/// exp(-1/(1 - t^2)) on |t| < 1.
inline double compact_bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

/// Smooth plateau equal to 1 on [a + w, b - w] and 0 outside (a, b), w = 0.15 (b - a).
inline double plateau(double r, double a, double b) {
  const double w = 0.15 * (b - a);
  return smoothstep((a + w - r) / w) * smoothstep((r - (b - w)) / w);
}

}  // namespace potlab::profile
