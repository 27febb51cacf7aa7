#include "gsieve/lindblad_model.hpp"

#include <cmath>
#include <sstream>

#include "gsieve/simd/kernels.hpp"

namespace gsieve {
namespace {

// Relative slack on the positivity margin; exact-equality generators such as
// a single Lindblad operator land on the boundary up to rounding.
constexpr double kPositivityRelTol = 1e-12;

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    std::ostringstream os;
    os << "time must be finite and >= 0 (got " << t << ")";
    throw Error(ErrorKind::NegativeTime, os.str());
  }
}

}  // namespace

LindbladParams LindbladParams::create(const PhysicalConstants& pc, double lambda, double d_qq,
                                      double d_pp, double d_pq, PositivityPolicy policy) {
  pc.validate();
  if (!std::isfinite(lambda) || !std::isfinite(d_qq) || !std::isfinite(d_pp) ||
      !std::isfinite(d_pq)) {
    throw Error(ErrorKind::InvalidParameter, "friction and diffusion coefficients must be finite");
  }
  if (lambda <= 0.0) {
    std::ostringstream os;
    os << "friction constant lambda must be > 0 (got " << lambda << ")";
    throw Error(ErrorKind::NonDissipative, os.str());
  }
  if (d_qq < 0.0 || d_pp < 0.0) {
    std::ostringstream os;
    os << "diffusion coefficients d_qq, d_pp must be >= 0 (got " << d_qq << ", " << d_pp << ")";
    throw Error(ErrorKind::InvalidParameter, os.str());
  }
  LindbladParams lp;
  lp.pc_ = pc;
  lp.lambda_ = lambda;
  lp.d_qq_ = d_qq;
  lp.d_pp_ = d_pp;
  lp.d_pq_ = d_pq;
  lp.policy_ = policy;
  if (policy == PositivityPolicy::enforce && !lp.positivity_holds()) {
    std::ostringstream os;
    os.precision(17);
    os << "diffusion matrix violates d_pp*d_qq - d_pq^2 >= (lambda*hbar/2)^2 (margin "
       << lp.positivity_margin() << ")";
    throw Error(ErrorKind::PositivityViolation, os.str());
  }
  return lp;
}

double LindbladParams::positivity_margin() const {
  const double bound = lambda_ * pc_.hbar / 2.0;
  return d_pp_ * d_qq_ - d_pq_ * d_pq_ - bound * bound;
}

bool LindbladParams::positivity_holds() const {
  const double bound = lambda_ * pc_.hbar / 2.0;
  const double scale = std::max(d_pp_ * d_qq_, bound * bound);
  return positivity_margin() >= -kPositivityRelTol * scale;
}

SymMatrix2 LindbladParams::diffusion_scaled() const {
  const double mw = pc_.m_omega();
  return {mw * d_qq_, d_pp_ / mw, d_pq_};
}

DiffusionCoefficients diffusion_from_coefficients(const GeneratorCoefficients& c, double hbar) {
  // sum_j conj(a_j) b_j
  const std::complex<double> overlap = std::conj(c.a1) * c.b1 + std::conj(c.a2) * c.b2;
  DiffusionCoefficients out;
  out.d_qq = hbar / 2.0 * (std::norm(c.a1) + std::norm(c.a2));
  out.d_pp = hbar / 2.0 * (std::norm(c.b1) + std::norm(c.b2));
  out.d_pq = -hbar / 2.0 * overlap.real();
  out.lambda = -overlap.imag();
  return out;
}

LindbladParams coefficients_to_parameters(const GeneratorCoefficients& c,
                                          const PhysicalConstants& pc) {
  pc.validate();
  const DiffusionCoefficients d = diffusion_from_coefficients(c, pc.hbar);
  if (!(d.lambda > 0.0)) {
    std::ostringstream os;
    os << "generator coefficients give lambda = " << d.lambda << " <= 0 (no friction)";
    throw Error(ErrorKind::NonDissipative, os.str());
  }
  return LindbladParams::create(pc, d.lambda, d.d_qq, d.d_pp, d.d_pq);
}

SymMatrix2 Propagator::conjugate(const SymMatrix2& m) const {
  // R m
  const double a11 = r11 * m.xx + r12 * m.xy;
  const double a12 = r11 * m.xy + r12 * m.yy;
  const double a21 = r21 * m.xx + r22 * m.xy;
  const double a22 = r21 * m.xy + r22 * m.yy;
  // (R m) R^T
  return {a11 * r11 + a12 * r12, a21 * r21 + a22 * r22, a11 * r21 + a12 * r22};
}

CovarianceMatrix stationary_covariance(const LindbladParams& lp) {
  const double m = lp.constants().m;
  const double w = lp.constants().omega;
  const double l = lp.lambda();
  const double mw = m * w;
  const double w2 = w * w;
  const double denom = 2.0 * l * (l * l + w2);
  CovarianceMatrix s;
  s.sigma_qq = (mw * mw * (2.0 * l * l + w2) * lp.d_qq() + w2 * lp.d_pp() +
                2.0 * m * w2 * l * lp.d_pq()) /
               (mw * mw * denom);
  s.sigma_pp = (mw * mw * w2 * lp.d_qq() + (2.0 * l * l + w2) * lp.d_pp() -
                2.0 * m * w2 * l * lp.d_pq()) /
               denom;
  s.sigma_pq = (-l * mw * mw * lp.d_qq() + l * lp.d_pp() + 2.0 * m * l * l * lp.d_pq()) /
               (m * denom);
  return s;
}

SymMatrix2 stationary_scaled(const LindbladParams& lp) {
  return stationary_covariance(lp).scaled(lp.constants());
}

Propagator propagator(double t, const LindbladParams& lp) {
  require_time(t);
  const double decay = std::exp(-lp.lambda() * t);
  const double phase = lp.constants().omega * t;
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  return {decay * c, decay * s, -decay * s, decay * c};
}

CovarianceMatrix evolve(const CovarianceMatrix& sigma0, double t, const LindbladParams& lp) {
  require_time(t);
  const PhysicalConstants& pc = lp.constants();
  validate_state(sigma0, pc);
  if (t == 0.0) return sigma0;
  const SymMatrix2 stationary = stationary_scaled(lp);
  const SymMatrix2 delta = sigma0.scaled(pc) - stationary;
  return CovarianceMatrix::from_scaled(propagator(t, lp).conjugate(delta) + stationary, pc);
}

std::vector<CovarianceMatrix> evolve_trajectory(const CovarianceMatrix& sigma0,
                                                std::span<const double> times,
                                                const LindbladParams& lp) {
  const PhysicalConstants& pc = lp.constants();
  validate_state(sigma0, pc);
  const std::size_t n = times.size();
  std::vector<double> decay2(n), c(n), s(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    require_time(times[i]);
    const double phase = pc.omega * times[i];
    decay2[i] = std::exp(-2.0 * lp.lambda() * times[i]);
    c[i] = std::cos(phase);
    s[i] = std::sin(phase);
  }
  const SymMatrix2 stationary = stationary_scaled(lp);
  const SymMatrix2 delta = sigma0.scaled(pc) - stationary;
  simd::active_kernels().rotate_decay(delta, stationary, decay2.data(), c.data(), s.data(),
                                      xx.data(), yy.data(), xy.data(), n);
  std::vector<CovarianceMatrix> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (times[i] == 0.0) {
      out.push_back(sigma0);
    } else {
      out.push_back(CovarianceMatrix::from_scaled({xx[i], yy[i], xy[i]}, pc));
    }
  }
  return out;
}

double det_sigma_expanded(const CovarianceMatrix& sigma0, double t, const LindbladParams& lp) {
  require_time(t);
  const PhysicalConstants& pc = lp.constants();
  validate_state(sigma0, pc);
  const SymMatrix2 stationary = stationary_scaled(lp);
  const SymMatrix2 delta = sigma0.scaled(pc) - stationary;

  // Kernels T_pp, T_qq, T_pq written out from the stationary entries.
  const double phase = pc.omega * t;
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  const double p_inf = stationary.yy;  // sigma_pp(inf) / (m w)
  const double q_inf = stationary.xx;  // m w sigma_qq(inf)
  const double r_inf = stationary.xy;
  const double t_pp = p_inf * c * c + q_inf * s * s + 2.0 * r_inf * s * c;
  const double t_qq = p_inf * s * s + q_inf * c * c - 2.0 * r_inf * s * c;
  const double t_pq = (q_inf - p_inf) * s * c + r_inf * (c * c - s * s);

  const double e2 = std::exp(-2.0 * lp.lambda() * t);
  const double cross = delta.xx * t_pp + delta.yy * t_qq - 2.0 * delta.xy * t_pq;
  return e2 * e2 * delta.det() + e2 * cross + stationary.det();
}

}  // namespace gsieve
