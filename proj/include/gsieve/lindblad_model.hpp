#pragma once

// Damped oscillator with two linear Lindblad operators V_i = a_i p + b_i q.
// The quasi-free sector is closed under the dynamics, so everything here
// acts on covariance matrices only.

#include <complex>
#include <span>
#include <vector>

#include "gsieve/gaussian_core.hpp"

namespace gsieve {

enum class PositivityPolicy {
  enforce,  // reject parameters violating D_pp*D_qq - D_pq^2 >= (lambda*hbar/2)^2
  warn,     // accept them; callers downgrade Heisenberg checks to warnings
};

class LindbladParams {
 public:
  // Throws InvalidParameter, NonDissipative (lambda <= 0) or, under
  // PositivityPolicy::enforce, PositivityViolation.
  static LindbladParams create(const PhysicalConstants& pc, double lambda, double d_qq,
                               double d_pp, double d_pq,
                               PositivityPolicy policy = PositivityPolicy::enforce);

  const PhysicalConstants& constants() const { return pc_; }
  double lambda() const { return lambda_; }
  double d_qq() const { return d_qq_; }
  double d_pp() const { return d_pp_; }
  double d_pq() const { return d_pq_; }
  PositivityPolicy policy() const { return policy_; }

  // D_pp*D_qq - D_pq^2 - lambda^2 hbar^2 / 4.
  double positivity_margin() const;
  bool positivity_holds() const;

  // Diffusion matrix in scaled coordinates: {m w D_qq, D_pp/(m w), D_pq}.
  SymMatrix2 diffusion_scaled() const;

 private:
  LindbladParams() = default;

  PhysicalConstants pc_;
  double lambda_ = 0.0;
  double d_qq_ = 0.0;
  double d_pp_ = 0.0;
  double d_pq_ = 0.0;
  PositivityPolicy policy_ = PositivityPolicy::enforce;
};

struct GeneratorCoefficients {
  std::complex<double> a1;
  std::complex<double> a2;
  std::complex<double> b1;
  std::complex<double> b2;
};

// Raw diffusion/friction values before any validation.
struct DiffusionCoefficients {
  double d_qq = 0.0;
  double d_pp = 0.0;
  double d_pq = 0.0;
  double lambda = 0.0;
};

DiffusionCoefficients diffusion_from_coefficients(const GeneratorCoefficients& c, double hbar);

// Throws NonDissipative when the resulting lambda <= 0.
LindbladParams coefficients_to_parameters(const GeneratorCoefficients& c,
                                          const PhysicalConstants& pc);

// R(t) acting on scaled coordinates.
struct Propagator {
  double r11 = 1.0;
  double r12 = 0.0;
  double r21 = 0.0;
  double r22 = 1.0;

  double det() const { return r11 * r22 - r12 * r21; }
  // R m R^T.
  SymMatrix2 conjugate(const SymMatrix2& m) const;
};

CovarianceMatrix stationary_covariance(const LindbladParams& lp);
SymMatrix2 stationary_scaled(const LindbladParams& lp);

// Throws NegativeTime for t < 0 or non-finite t.
Propagator propagator(double t, const LindbladParams& lp);

// sigma(t) = R(t) (sigma(0) - sigma(inf)) R(t)^T + sigma(inf).
CovarianceMatrix evolve(const CovarianceMatrix& sigma0, double t, const LindbladParams& lp);

// evolve() over many times at once through the active SIMD kernel table.
std::vector<CovarianceMatrix> evolve_trajectory(const CovarianceMatrix& sigma0,
                                                std::span<const double> times,
                                                const LindbladParams& lp);

// det sigma(t) from the three-term expansion
//   e^{-4 lt} det(d) + e^{-2 lt} [d_xx T_pp + d_yy T_qq - 2 d_xy T_pq] + det sigma(inf)
// with d = sigma(0) - sigma(inf) in scaled coordinates.
double det_sigma_expanded(const CovarianceMatrix& sigma0, double t, const LindbladParams& lp);

}  // namespace gsieve
