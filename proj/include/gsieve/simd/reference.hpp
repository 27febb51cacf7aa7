#pragma once

// Scalar reference formulas shared by the single-point API and the scalar
// kernel table. Vector kernels reimplement these and are tested against them.

#include <cmath>

#include "gsieve/gaussian_core.hpp"

namespace gsieve::simd::reference {

// Objective row parameters for a fixed rotation angle.
struct ObjectiveRow {
  double cos2 = 1.0;     // cos^2(theta)
  double sin2 = 0.0;     // sin^2(theta)
  double sincos = 0.0;   // sin(theta) cos(theta)
  double t_pp = 0.0;
  double t_qq = 0.0;
  double t_pq = 0.0;
  double scale = 0.5;    // hbar * area / 2
};

// major = aleph^2, minor = aleph^-2.
inline double sieve_objective(const ObjectiveRow& r, double major, double minor) {
  return r.scale * (r.cos2 * (major * r.t_pp + minor * r.t_qq) +
                    r.sin2 * (minor * r.t_pp + major * r.t_qq) -
                    2.0 * r.sincos * (minor - major) * r.t_pq);
}

// Q D Q^T with Q = [[c, s], [-s, c]], scaled by `decay2`, plus `offset`.
inline SymMatrix2 rotate_decay(const SymMatrix2& d, const SymMatrix2& offset, double decay2,
                               double c, double s) {
  const double cc = c * c;
  const double ss = s * s;
  const double sc = s * c;
  return {decay2 * (cc * d.xx + 2.0 * sc * d.xy + ss * d.yy) + offset.xx,
          decay2 * (ss * d.xx - 2.0 * sc * d.xy + cc * d.yy) + offset.yy,
          decay2 * (sc * (d.yy - d.xx) + (cc - ss) * d.xy) + offset.xy};
}

// Sieve-optimal squeezing (the aleph <= 1 branch) from scaled diffusion
// entries u = m*omega*D_qq, v = D_pp/(m*omega), d = D_pq and the ratio
// omega/lambda. Uses G^2 - X^2 = 4(uv - d^2) + (omega/lambda)^2 (u+v)^2 so
// the small branch is computed without cancellation.
inline double closed_form_squeezing(double u, double v, double d, double omega_over_lambda) {
  const double sum = u + v;
  const double r2 = omega_over_lambda * omega_over_lambda;
  const double x = std::sqrt((u - v) * (u - v) + 4.0 * d * d);
  const double g = std::sqrt(1.0 + r2) * sum;
  const double numerator = std::sqrt(4.0 * (u * v - d * d) + r2 * sum * sum);
  return std::sqrt(numerator / (g + x));
}

}  // namespace gsieve::simd::reference
