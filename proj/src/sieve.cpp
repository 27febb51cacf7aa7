#include "gsieve/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "gsieve/simd/kernels.hpp"

namespace gsieve {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double theta) {
  double wrapped = std::fmod(theta, kPi);
  if (wrapped < 0.0) wrapped += kPi;
  if (wrapped >= kPi) wrapped = 0.0;
  return wrapped;
}

void validate_point(const SievePoint& p) {
  if (!std::isfinite(p.t_pp) || !std::isfinite(p.t_qq) || !std::isfinite(p.t_pq) ||
      !std::isfinite(p.hbar) || p.hbar <= 0.0 || p.trace() <= 0.0) {
    throw Error(ErrorKind::InvalidParameter, "sieve kernels must be finite with positive trace");
  }
}

simd::reference::ObjectiveRow objective_row(double theta, double area, const SievePoint& p) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * c, s * s, s * c, p.t_pp, p.t_qq, p.t_pq, p.hbar * area / 2.0};
}

bool is_isotropic(const SievePoint& p) {
  const double scale = kDegenerateKernelTol * p.trace();
  return std::abs(p.t_pp - p.t_qq) <= scale && std::abs(2.0 * p.t_pq) <= scale;
}

}  // namespace

std::string_view to_string(SieveMethod method) {
  return method == SieveMethod::closed_form ? "closed_form" : "numeric";
}

double SievePoint::spread() const { return std::hypot(t_pp - t_qq, 2.0 * t_pq); }

SievePoint sieve_kernels(double t, const LindbladParams& lp) {
  if (!std::isfinite(t) || t < 0.0) {
    throw Error(ErrorKind::NegativeTime, "kernel evaluation time must be >= 0");
  }
  const CovarianceMatrix inf = stationary_covariance(lp);
  const double mw = lp.constants().m_omega();
  const double phase = lp.constants().omega * t;
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  const double p_inf = inf.sigma_pp / mw;
  const double q_inf = mw * inf.sigma_qq;
  SievePoint point;
  point.t = t;
  point.hbar = lp.constants().hbar;
  point.t_pp = p_inf * c * c + q_inf * s * s + 2.0 * inf.sigma_pq * s * c;
  point.t_qq = p_inf * s * s + q_inf * c * c - 2.0 * inf.sigma_pq * s * c;
  point.t_pq = (q_inf - p_inf) * s * c + inf.sigma_pq * (c * c - s * s);
  return point;
}

double sieve_objective(const ShapeDecomposition& shape, const SievePoint& point) {
  if (!std::isfinite(shape.area) || shape.area < 1.0 - kAreaTol || !std::isfinite(shape.aleph) ||
      shape.aleph <= 0.0 || !std::isfinite(shape.theta)) {
    throw Error(ErrorKind::InvalidShape, "sieve objective needs area >= 1 and aleph > 0");
  }
  const double major = shape.aleph * shape.aleph;
  return simd::reference::sieve_objective(objective_row(shape.theta, shape.area, point), major,
                                          1.0 / major);
}

SieveResult optimal_shape_from_kernels(const SievePoint& point) {
  validate_point(point);
  SieveResult result;
  result.method = SieveMethod::closed_form;
  if (is_isotropic(point)) {
    result.degenerate = true;
    result.objective_value = sieve_objective({1.0, 0.0, 1.0}, point);
    return result;
  }

  // aleph^4 = (tr - X)/(tr + X) = 4 det K / (tr + X)^2 for the lower sign.
  const double det = point.t_pp * point.t_qq - point.t_pq * point.t_pq;
  if (!(det > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "sieve kernel matrix is not positive definite");
  }
  const double aleph = std::sqrt(2.0 * std::sqrt(det) / (point.trace() + point.spread()));

  // tan(2 theta) = 2 T_pq / (T_pp - T_qq) has two roots a quarter turn apart;
  // keep the one with the smaller objective.
  const double half = 0.5 * std::atan2(2.0 * point.t_pq, point.t_pp - point.t_qq);
  const double first = wrap_angle(half);
  const double second = wrap_angle(half + kPi / 2.0);
  const double f_first = sieve_objective({1.0, first, aleph}, point);
  const double f_second = sieve_objective({1.0, second, aleph}, point);

  result.aleph_star = aleph;
  result.theta_star = f_second < f_first ? second : first;
  result.objective_value = std::min(f_first, f_second);
  return result;
}

double optimal_squeezing_closed_form(const LindbladParams& lp) {
  const SymMatrix2 d = lp.diffusion_scaled();
  const double ratio = lp.constants().omega / lp.lambda();
  const double aleph = simd::reference::closed_form_squeezing(d.xx, d.yy, d.xy, ratio);
  if (!std::isfinite(aleph) || aleph <= 0.0) {
    throw Error(ErrorKind::InvalidParameter,
                "closed-form squeezing undefined for these diffusion coefficients");
  }
  return aleph;
}

std::vector<double> optimal_squeezing_closed_form_batch(std::span<const LindbladParams> params) {
  const std::size_t n = params.size();
  std::vector<double> u(n), v(n), d(n), ratio(n), aleph(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SymMatrix2 diff = params[i].diffusion_scaled();
    u[i] = diff.xx;
    v[i] = diff.yy;
    d[i] = diff.xy;
    ratio[i] = params[i].constants().omega / params[i].lambda();
  }
  simd::active_kernels().closed_form_squeezing(u.data(), v.data(), d.data(), ratio.data(),
                                               aleph.data(), n);
  return aleph;
}

SieveResult optimal_shape_numeric(const SievePoint& point, const GridSpec& grid) {
  validate_point(point);
  if (grid.theta_samples < 64 || grid.aleph_samples < 64 ||
      !(grid.log10_aleph_half_range > 0.0) || grid.max_refine_passes < 0 ||
      !(grid.area >= 1.0 - kAreaTol)) {
    throw Error(ErrorKind::InvalidParameter,
                "grid needs >= 64 theta and aleph samples, a positive range and area >= 1");
  }

  // Search in (theta, u = ln aleph); the objective is pi-periodic in theta
  // and convex in u at fixed theta.
  const double u_half = grid.log10_aleph_half_range * std::numbers::ln10;
  const auto n_theta = static_cast<std::size_t>(grid.theta_samples);
  const auto n_aleph = static_cast<std::size_t>(grid.aleph_samples);
  const double du = 2.0 * u_half / static_cast<double>(n_aleph - 1);
  const double dtheta = kPi / static_cast<double>(n_theta);

  std::vector<double> major(n_aleph), minor(n_aleph), row(n_aleph);
  for (std::size_t j = 0; j < n_aleph; ++j) {
    const double u = -u_half + du * static_cast<double>(j);
    major[j] = std::exp(2.0 * u);
    minor[j] = std::exp(-2.0 * u);
  }

  const simd::KernelTable& kernels = simd::active_kernels();
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  std::size_t best_j = 0;
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double theta = dtheta * static_cast<double>(i);
    kernels.objective_row(objective_row(theta, grid.area, point), major.data(), minor.data(),
                          row.data(), n_aleph);
    for (std::size_t j = 0; j < n_aleph; ++j) {
      if (row[j] < best) {
        best = row[j];
        best_i = i;
        best_j = j;
      }
    }
  }

  double theta = dtheta * static_cast<double>(best_i);
  double u = -u_half + du * static_cast<double>(best_j);
  auto f = [&](double th, double uu) {
    return sieve_objective({grid.area, th, std::exp(uu)}, point);
  };

  constexpr int kBits = std::numeric_limits<double>::digits / 2;
  for (int pass = 0; pass < grid.max_refine_passes; ++pass) {
    bool improved = false;

    const auto [th_new, f_th] = boost::math::tools::brent_find_minima(
        [&](double th) { return f(th, u); }, theta - 2.0 * dtheta, theta + 2.0 * dtheta, kBits);
    if (f_th < best) {
      best = f_th;
      theta = th_new;
      improved = true;
    }

    // Widen the u bracket while the minimum sits on its edge.
    double width = 2.0 * du;
    for (int grow = 0; grow < 16; ++grow) {
      const double lo = u - width;
      const double hi = u + width;
      const auto [u_new, f_u] = boost::math::tools::brent_find_minima(
          [&](double uu) { return f(theta, uu); }, lo, hi, kBits);
      if (f_u < best) {
        best = f_u;
        u = u_new;
        improved = true;
      }
      const double edge = 1e-3 * width;
      if (u_new - lo > edge && hi - u_new > edge) break;
      width *= 4.0;
    }
    if (!improved) break;
  }

  SieveResult result;
  result.method = SieveMethod::numeric;
  const double f_rotated = f(theta + kPi / 2.0, u);
  if (std::abs(f_rotated - best) <= kDegenerateKernelTol * std::abs(best)) {
    // Flat in theta: report the canonical representative.
    result.degenerate = true;
    result.theta_star = 0.0;
    result.aleph_star = std::exp(-std::abs(u));
  } else if (u > 0.0) {
    result.theta_star = wrap_angle(theta + kPi / 2.0);
    result.aleph_star = std::exp(-u);
  } else {
    result.theta_star = wrap_angle(theta);
    result.aleph_star = std::exp(u);
  }
  result.objective_value = sieve_objective(result.shape(grid.area), point);
  return result;
}

double record_cross_residual(SieveResult& a, SieveResult& b) {
  const double residual = std::abs(a.aleph_star - b.aleph_star);
  a.cross_residual = residual;
  b.cross_residual = residual;
  return residual;
}

TimeIndependenceReport sieve_time_independence_check(const LindbladParams& lp,
                                                     std::span<const double> times) {
  if (times.empty()) throw Error(ErrorKind::InvalidParameter, "time list must be nonempty");
  TimeIndependenceReport report;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double t : times) {
    const SieveResult r = optimal_shape_from_kernels(sieve_kernels(t, lp));
    report.times.push_back(t);
    report.aleph.push_back(r.aleph_star);
    report.theta.push_back(r.theta_star);
    lo = std::min(lo, r.aleph_star);
    hi = std::max(hi, r.aleph_star);
  }
  report.aleph_spread = hi - lo;
  report.passed = report.aleph_spread <= kTimeIndependenceTol;
  return report;
}

double default_eval_time(const LindbladParams& lp) { return 10.0 / lp.lambda(); }

double dropped_long_time_term(const CovarianceMatrix& sigma0, double t, const LindbladParams& lp) {
  if (!std::isfinite(t) || t < 0.0) {
    throw Error(ErrorKind::NegativeTime, "evaluation time must be >= 0");
  }
  const PhysicalConstants& pc = lp.constants();
  validate_state(sigma0, pc);
  const SymMatrix2 delta = sigma0.scaled(pc) - stationary_scaled(lp);
  return std::exp(-4.0 * lp.lambda() * t) * delta.det();
}

}  // namespace gsieve
