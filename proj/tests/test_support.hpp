#pragma once

// Seeded generators and small helpers shared by the unit tests and the
// acceptance runner.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gsieve/gaussian_core.hpp"
#include "gsieve/lindblad_model.hpp"
#include "gsieve/sieve.hpp"

namespace gsieve::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline PhysicalConstants random_constants(Rng& rng) {
  return {log_uniform(rng, 0.5, 2.0), log_uniform(rng, 0.5, 2.0), log_uniform(rng, 0.5, 2.0)};
}

struct ParamRanges {
  double ratio_lo = 1e-2;   // lambda / omega
  double ratio_hi = 10.0;
  double anisotropy = 10.0; // spread of D_pp/(m w) against m w D_qq
  double rho_max = 0.9;     // |D_pq| / sqrt(u v) in scaled units
  double margin_hi = 100.0; // det D / (lambda hbar / 2)^2
};

// Valid parameters: the scaled diffusion matrix has a random aspect ratio and
// correlation, then gets scaled so that det D sits between 1 and margin_hi
// times the positivity bound.
inline LindbladParams random_params(Rng& rng, const ParamRanges& r = {}) {
  const PhysicalConstants pc = random_constants(rng);
  const double lambda = log_uniform(rng, r.ratio_lo, r.ratio_hi) * pc.omega;
  const double aspect = log_uniform(rng, 1.0 / r.anisotropy, r.anisotropy);
  const double rho = uniform(rng, -r.rho_max, r.rho_max);
  const double kappa = log_uniform(rng, 1.0 + 1e-9, r.margin_hi);
  const double bound = lambda * lambda * pc.hbar * pc.hbar / 4.0;
  const double s = std::sqrt(kappa * bound / (aspect * (1.0 - rho * rho)));
  const double u = s;
  const double v = s * aspect;
  const double d = rho * s * std::sqrt(aspect);
  return LindbladParams::create(pc, lambda, u / pc.m_omega(), v * pc.m_omega(), d);
}

// Isotropic diffusion: D_pq = 0 and D_pp/(m w) = m w D_qq.
inline LindbladParams isotropic_params(const PhysicalConstants& pc, double lambda, double scaled_d) {
  return LindbladParams::create(pc, lambda, scaled_d / pc.m_omega(), scaled_d * pc.m_omega(), 0.0);
}

inline ShapeDecomposition random_shape(Rng& rng, double area_hi = 10.0) {
  return {log_uniform(rng, 1.0, area_hi), uniform(rng, -4.0, 4.0), log_uniform(rng, 0.1, 10.0)};
}

inline CovarianceMatrix random_state(Rng& rng, const PhysicalConstants& pc) {
  return compose(random_shape(rng), pc);
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Relative distance between covariance matrices, measured in scaled units.
inline double matrix_rel_diff(const CovarianceMatrix& a, const CovarianceMatrix& b,
                              const PhysicalConstants& pc) {
  const SymMatrix2 sa = a.scaled(pc);
  const SymMatrix2 sb = b.scaled(pc);
  const double scale = std::max(sa.norm(), sb.norm());
  return scale == 0.0 ? 0.0 : (sa - sb).norm() / scale;
}

// Distance between two angles modulo pi.
inline double angle_diff_mod_pi(double a, double b) {
  const double d = std::remainder(a - b, std::numbers::pi);
  return std::abs(d);
}

// Brute-force grid minimum of the objective at area 1 over theta in [0, pi)
// and log-spaced aleph in [10^-range, 10^range]. Deliberately naive.
struct GridMin {
  double value = 0.0;
  double theta = 0.0;
  double aleph = 1.0;
};

inline GridMin brute_force_min(const SievePoint& point, int n_theta, int n_aleph,
                               double log10_range = 2.0) {
  GridMin best{INFINITY, 0.0, 1.0};
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::numbers::pi * i / n_theta;
    for (int j = 0; j < n_aleph; ++j) {
      const double aleph = std::pow(10.0, -log10_range + 2.0 * log10_range * j / (n_aleph - 1));
      const double f = sieve_objective({1.0, theta, aleph}, point);
      if (f < best.value) best = {f, theta, aleph};
    }
  }
  return best;
}

// Grid argmin on the aleph <= 1 branch only, so gauge-equivalent duplicates
// of a cell never compete with it.
inline GridMin lower_branch_argmin(const SievePoint& point, double area, int n_theta = 360,
                                   int n_aleph = 200) {
  GridMin best{INFINITY, 0.0, 1.0};
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::numbers::pi * i / n_theta;
    for (int j = 0; j < n_aleph; ++j) {
      const double aleph = std::pow(10.0, -2.0 + 2.0 * j / (n_aleph - 1));
      const double f = sieve_objective({area, theta, aleph}, point);
      if (f < best.value) best = {f, theta, aleph};
    }
  }
  return best;
}

}  // namespace gsieve::testing
