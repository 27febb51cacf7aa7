#pragma once

// Predictability sieve: choose the initial squeezing and orientation that
// minimise the long-time growth of det sigma(t), and hence of the entropy.

#include <optional>
#include <span>
#include <vector>

#include "gsieve/gaussian_core.hpp"
#include "gsieve/lindblad_model.hpp"

namespace gsieve {

// Kernel values weighting the initial-state dependence of det sigma(t).
struct SievePoint {
  double t_pp = 0.0;
  double t_qq = 0.0;
  double t_pq = 0.0;
  double t = 0.0;
  double hbar = 1.0;

  // Both are independent of t.
  double trace() const { return t_pp + t_qq; }
  double spread() const;  // sqrt((t_pp - t_qq)^2 + 4 t_pq^2)
};

enum class SieveMethod { closed_form, numeric };

std::string_view to_string(SieveMethod method);

// The optimum is stored on the aleph <= 1 branch; canonical() gives the
// gauge-equivalent aleph >= 1 representative.
struct SieveResult {
  double theta_star = 0.0;
  double aleph_star = 1.0;
  double objective_value = 0.0;
  SieveMethod method = SieveMethod::closed_form;
  bool degenerate = false;
  std::optional<double> cross_residual;

  ShapeDecomposition shape(double area = 1.0) const { return {area, theta_star, aleph_star}; }
  ShapeDecomposition canonical(double area = 1.0) const { return canonicalize(shape(area)); }
};

struct GridSpec {
  int theta_samples = 360;          // over [0, pi)
  int aleph_samples = 201;          // log-spaced, symmetric around aleph = 1
  double log10_aleph_half_range = 3.0;
  int max_refine_passes = 64;       // 0 disables refinement
  double area = 1.0;                // A(0) used in the objective
};

// Kernels are isotropic when |T_pp - T_qq| and |2 T_pq| are both below this
// fraction of T_pp + T_qq.
inline constexpr double kDegenerateKernelTol = 1e-12;

SievePoint sieve_kernels(double t, const LindbladParams& lp);

// Initial-state-dependent part of the e^{-2 lambda t} term of det sigma(t).
double sieve_objective(const ShapeDecomposition& shape, const SievePoint& point);

SieveResult optimal_shape_from_kernels(const SievePoint& point);

// Closed-form optimal squeezing (aleph <= 1 branch) directly from the
// diffusion and friction parameters.
double optimal_squeezing_closed_form(const LindbladParams& lp);

// Same as above for many parameter sets via the active SIMD kernel table.
std::vector<double> optimal_squeezing_closed_form_batch(std::span<const LindbladParams> params);

// Dense theta x log(aleph) grid scan followed by coordinate-descent
// refinement. Independent of the analytic optimum.
SieveResult optimal_shape_numeric(const SievePoint& point, const GridSpec& grid = {});

// Sets cross_residual = |aleph_a - aleph_b| on both results and returns it.
double record_cross_residual(SieveResult& a, SieveResult& b);

struct TimeIndependenceReport {
  std::vector<double> times;
  std::vector<double> aleph;
  std::vector<double> theta;
  double aleph_spread = 0.0;
  bool passed = false;
};

inline constexpr double kTimeIndependenceTol = 1e-10;

TimeIndependenceReport sieve_time_independence_check(const LindbladParams& lp,
                                                     std::span<const double> times);

// 10 / lambda.
double default_eval_time(const LindbladParams& lp);

// e^{-4 lambda t} det(sigma(0) - sigma(inf)), the term the sieve neglects.
double dropped_long_time_term(const CovarianceMatrix& sigma0, double t, const LindbladParams& lp);

}  // namespace gsieve
