#pragma once

// Quasi-free (Gaussian) states of a single oscillator mode described by
// their central second moments.
//
// Internally every matrix lives in the scaled phase-space coordinates
// (sqrt(m*omega) q, p / sqrt(m*omega)), in which both axes carry units of
// sqrt(action). The scaled covariance is
//
//   | m*omega*sigma_qq   sigma_pq               |
//   | sigma_pq           sigma_pp / (m*omega)   |
//
// and its determinant equals sigma_qq*sigma_pp - sigma_pq^2.

#include <numbers>

#include "gsieve/errors.hpp"

namespace gsieve {

struct PhysicalConstants {
  double m = 1.0;
  double omega = 1.0;
  double hbar = 1.0;

  // Throws InvalidParameter unless all three are finite and positive.
  void validate() const;
  double m_omega() const { return m * omega; }
};

// Symmetric 2x2 matrix in scaled phase-space coordinates.
struct SymMatrix2 {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;

  double det() const { return xx * yy - xy * xy; }
  double trace() const { return xx + yy; }
  // Frobenius norm.
  double norm() const;

  friend SymMatrix2 operator+(const SymMatrix2& a, const SymMatrix2& b) {
    return {a.xx + b.xx, a.yy + b.yy, a.xy + b.xy};
  }
  friend SymMatrix2 operator-(const SymMatrix2& a, const SymMatrix2& b) {
    return {a.xx - b.xx, a.yy - b.yy, a.xy - b.xy};
  }
  friend SymMatrix2 operator*(double s, const SymMatrix2& a) {
    return {s * a.xx, s * a.yy, s * a.xy};
  }
  bool operator==(const SymMatrix2&) const = default;
};

// Physical central second moments <q^2>, <p^2>, <(pq+qp)/2>.
struct CovarianceMatrix {
  double sigma_qq = 0.0;
  double sigma_pp = 0.0;
  double sigma_pq = 0.0;

  double det() const { return sigma_qq * sigma_pp - sigma_pq * sigma_pq; }
  SymMatrix2 scaled(const PhysicalConstants& pc) const;
  static CovarianceMatrix from_scaled(const SymMatrix2& s, const PhysicalConstants& pc);

  bool operator==(const CovarianceMatrix&) const = default;
};

// sigma = (hbar*area/2) * O(theta)^T diag(aleph^2, aleph^-2) O(theta)
// with O(theta) = [[cos, -sin], [sin, cos]].
struct ShapeDecomposition {
  double area = 1.0;
  double theta = 0.0;
  double aleph = 1.0;

  bool operator==(const ShapeDecomposition&) const = default;
};

inline constexpr double kHeisenbergRelTol = 1e-9;
inline constexpr double kHeisenbergAbsTol = 1e-15;
inline constexpr double kAreaTol = 1e-12;

// det(sigma) - hbar^2/4.
double heisenberg_margin(const CovarianceMatrix& sigma, const PhysicalConstants& pc);

// True when det(sigma) >= hbar^2/4 up to the relative/absolute slack above.
bool satisfies_heisenberg(const CovarianceMatrix& sigma, const PhysicalConstants& pc);

// Throws NotPositive or HeisenbergViolation.
void validate_state(const CovarianceMatrix& sigma, const PhysicalConstants& pc);

// Area in units of hbar/2: 2*sqrt(det)/hbar, clamped up to 1 for states that
// sit inside the Heisenberg tolerance band.
double phase_space_area(const SymMatrix2& scaled, double hbar);

ShapeDecomposition decompose(const CovarianceMatrix& sigma, const PhysicalConstants& pc);
ShapeDecomposition decompose_scaled(const SymMatrix2& scaled, double hbar);

CovarianceMatrix compose(const ShapeDecomposition& shape, const PhysicalConstants& pc);
SymMatrix2 compose_scaled(const ShapeDecomposition& shape, double hbar);

// Maps a shape into the gauge aleph >= 1, theta in [0, pi), theta = 0 when aleph = 1.
ShapeDecomposition canonicalize(const ShapeDecomposition& shape);

// von Neumann entropy of a quasi-free state with phase-space area `area`.
double entropy(double area);

}  // namespace gsieve
