#include "gsieve/gaussian_core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gsieve {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::HeisenbergViolation: return "HeisenbergViolation";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::InvalidShape: return "InvalidShape";
    case ErrorKind::InvalidArea: return "InvalidArea";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::PositivityViolation: return "PositivityViolation";
    case ErrorKind::NonDissipative: return "NonDissipative";
    case ErrorKind::NegativeTime: return "NegativeTime";
  }
  return "Unknown";
}

namespace {

constexpr double kPi = std::numbers::pi;
// Below this relative eigenvalue spread a matrix is treated as isotropic.
constexpr double kIsotropicSpread = 4.0 * std::numeric_limits<double>::epsilon();

double wrap_angle(double theta) {
  double wrapped = std::fmod(theta, kPi);
  if (wrapped < 0.0) wrapped += kPi;
  if (wrapped >= kPi) wrapped = 0.0;
  return wrapped;
}

double heisenberg_slack(double hbar) {
  return std::max(kHeisenbergRelTol * hbar * hbar / 4.0, kHeisenbergAbsTol);
}

}  // namespace

void PhysicalConstants::validate() const {
  auto check = [](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
      std::ostringstream os;
      os << name << " must be finite and > 0 (got " << v << ")";
      throw Error(ErrorKind::InvalidParameter, os.str());
    }
  };
  check(m, "m");
  check(omega, "omega");
  check(hbar, "hbar");
}

double SymMatrix2::norm() const { return std::sqrt(xx * xx + yy * yy + 2.0 * xy * xy); }

SymMatrix2 CovarianceMatrix::scaled(const PhysicalConstants& pc) const {
  const double mw = pc.m_omega();
  return {mw * sigma_qq, sigma_pp / mw, sigma_pq};
}

CovarianceMatrix CovarianceMatrix::from_scaled(const SymMatrix2& s, const PhysicalConstants& pc) {
  const double mw = pc.m_omega();
  return {s.xx / mw, s.yy * mw, s.xy};
}

double heisenberg_margin(const CovarianceMatrix& sigma, const PhysicalConstants& pc) {
  return sigma.det() - pc.hbar * pc.hbar / 4.0;
}

bool satisfies_heisenberg(const CovarianceMatrix& sigma, const PhysicalConstants& pc) {
  return heisenberg_margin(sigma, pc) >= -heisenberg_slack(pc.hbar);
}

void validate_state(const CovarianceMatrix& sigma, const PhysicalConstants& pc) {
  pc.validate();
  if (!std::isfinite(sigma.sigma_qq) || !std::isfinite(sigma.sigma_pp) ||
      !std::isfinite(sigma.sigma_pq)) {
    throw Error(ErrorKind::NotPositive, "covariance entries must be finite");
  }
  if (sigma.sigma_qq <= 0.0 || sigma.sigma_pp <= 0.0) {
    std::ostringstream os;
    os << "variances must be > 0 (sigma_qq=" << sigma.sigma_qq << ", sigma_pp=" << sigma.sigma_pp
       << ")";
    throw Error(ErrorKind::NotPositive, os.str());
  }
  if (!satisfies_heisenberg(sigma, pc)) {
    std::ostringstream os;
    os.precision(17);
    os << "Heisenberg inequality violated: det(sigma)=" << sigma.det()
       << " < hbar^2/4=" << pc.hbar * pc.hbar / 4.0;
    throw Error(ErrorKind::HeisenbergViolation, os.str());
  }
}

double phase_space_area(const SymMatrix2& scaled, double hbar) {
  const double det = scaled.det();
  const double area = det > 0.0 ? 2.0 * std::sqrt(det) / hbar : 0.0;
  if (area < 1.0 && det >= hbar * hbar / 4.0 - heisenberg_slack(hbar)) return 1.0;
  return area;
}

ShapeDecomposition decompose_scaled(const SymMatrix2& s, double hbar) {
  const double root = std::sqrt(s.det());
  const double trace = s.trace() / root;
  const double spread = std::hypot(s.xx - s.yy, 2.0 * s.xy) / root;

  ShapeDecomposition shape;
  shape.area = phase_space_area(s, hbar);
  if (spread <= kIsotropicSpread * trace) {
    shape.aleph = 1.0;
    shape.theta = 0.0;
    return shape;
  }
  // Largest eigenvalue of the unit-determinant matrix is aleph^2.
  const double major = std::max(0.5 * (trace + spread), 1.0);
  shape.aleph = std::sqrt(major);
  shape.theta = wrap_angle(0.5 * std::atan2(-2.0 * s.xy, s.xx - s.yy));
  return shape;
}

ShapeDecomposition decompose(const CovarianceMatrix& sigma, const PhysicalConstants& pc) {
  validate_state(sigma, pc);
  return decompose_scaled(sigma.scaled(pc), pc.hbar);
}

namespace {

void validate_shape(const ShapeDecomposition& shape) {
  if (!std::isfinite(shape.area) || shape.area < 1.0 - kAreaTol) {
    std::ostringstream os;
    os << "area must be >= 1 (got " << shape.area << ")";
    throw Error(ErrorKind::InvalidShape, os.str());
  }
  if (!std::isfinite(shape.aleph) || shape.aleph <= 0.0) {
    std::ostringstream os;
    os << "aleph must be > 0 (got " << shape.aleph << ")";
    throw Error(ErrorKind::InvalidShape, os.str());
  }
  if (!std::isfinite(shape.theta)) throw Error(ErrorKind::InvalidShape, "theta must be finite");
}

}  // namespace

SymMatrix2 compose_scaled(const ShapeDecomposition& shape, double hbar) {
  validate_shape(shape);
  const double half = hbar * shape.area / 2.0;
  const double major = shape.aleph * shape.aleph;
  const double minor = 1.0 / major;
  const double c = std::cos(shape.theta);
  const double s = std::sin(shape.theta);
  return {half * (major * c * c + minor * s * s),
          half * (major * s * s + minor * c * c),
          half * (minor - major) * s * c};
}

CovarianceMatrix compose(const ShapeDecomposition& shape, const PhysicalConstants& pc) {
  pc.validate();
  return CovarianceMatrix::from_scaled(compose_scaled(shape, pc.hbar), pc);
}

ShapeDecomposition canonicalize(const ShapeDecomposition& shape) {
  if (!std::isfinite(shape.aleph) || shape.aleph <= 0.0) {
    throw Error(ErrorKind::InvalidShape, "aleph must be > 0");
  }
  if (!std::isfinite(shape.theta)) throw Error(ErrorKind::InvalidShape, "theta must be finite");
  ShapeDecomposition out = shape;
  if (out.aleph < 1.0) {
    out.aleph = 1.0 / out.aleph;
    out.theta += kPi / 2.0;
  }
  if (std::abs(out.aleph - 1.0) <= kIsotropicSpread) {
    out.aleph = 1.0;
    out.theta = 0.0;
    return out;
  }
  out.theta = wrap_angle(out.theta);
  return out;
}

double entropy(double area) {
  if (!(area >= 1.0 - kAreaTol) || !std::isfinite(area)) {
    std::ostringstream os;
    os << "entropy requires area >= 1 (got " << area << ")";
    throw Error(ErrorKind::InvalidArea, os.str());
  }
  if (area <= 1.0) return 0.0;
  const double upper = (area + 1.0) / 2.0;
  const double lower = (area - 1.0) / 2.0;
  return upper * std::log(upper) - lower * std::log(lower);
}

}  // namespace gsieve
