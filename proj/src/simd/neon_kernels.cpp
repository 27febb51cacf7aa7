// NEON kernels for AArch64, where Advanced SIMD is part of the baseline ISA.

#include <arm_neon.h>

#include "gsieve/simd/kernels.hpp"

namespace gsieve::simd {
namespace {

void objective_row(const reference::ObjectiveRow& row, const double* major, const double* minor,
                   double* out, std::size_t n) {
  const float64x2_t cos2 = vdupq_n_f64(row.cos2);
  const float64x2_t sin2 = vdupq_n_f64(row.sin2);
  const float64x2_t two_sc = vdupq_n_f64(2.0 * row.sincos);
  const float64x2_t tpp = vdupq_n_f64(row.t_pp);
  const float64x2_t tqq = vdupq_n_f64(row.t_qq);
  const float64x2_t tpq = vdupq_n_f64(row.t_pq);
  const float64x2_t scale = vdupq_n_f64(row.scale);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t ma = vld1q_f64(major + j);
    const float64x2_t mi = vld1q_f64(minor + j);
    const float64x2_t along = vfmaq_f64(vmulq_f64(mi, tqq), ma, tpp);
    const float64x2_t across = vfmaq_f64(vmulq_f64(ma, tqq), mi, tpp);
    const float64x2_t cross = vmulq_f64(vmulq_f64(two_sc, vsubq_f64(mi, ma)), tpq);
    const float64x2_t sum = vfmaq_f64(vmulq_f64(sin2, across), cos2, along);
    vst1q_f64(out + j, vmulq_f64(scale, vsubq_f64(sum, cross)));
  }
  for (; j < n; ++j) out[j] = reference::sieve_objective(row, major[j], minor[j]);
}

void rotate_decay(const SymMatrix2& delta, const SymMatrix2& offset, const double* decay2,
                  const double* c, const double* s, double* xx, double* yy, double* xy,
                  std::size_t n) {
  const float64x2_t dxx = vdupq_n_f64(delta.xx);
  const float64x2_t dyy = vdupq_n_f64(delta.yy);
  const float64x2_t dxy2 = vdupq_n_f64(2.0 * delta.xy);
  const float64x2_t dxy = vdupq_n_f64(delta.xy);
  const float64x2_t ddiff = vdupq_n_f64(delta.yy - delta.xx);
  const float64x2_t oxx = vdupq_n_f64(offset.xx);
  const float64x2_t oyy = vdupq_n_f64(offset.yy);
  const float64x2_t oxy = vdupq_n_f64(offset.xy);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t vc = vld1q_f64(c + j);
    const float64x2_t vs = vld1q_f64(s + j);
    const float64x2_t k = vld1q_f64(decay2 + j);
    const float64x2_t cc = vmulq_f64(vc, vc);
    const float64x2_t ss = vmulq_f64(vs, vs);
    const float64x2_t sc = vmulq_f64(vs, vc);
    const float64x2_t scxy = vmulq_f64(sc, dxy2);
    const float64x2_t rxx = vaddq_f64(vfmaq_f64(scxy, cc, dxx), vmulq_f64(ss, dyy));
    const float64x2_t ryy = vaddq_f64(vsubq_f64(vmulq_f64(ss, dxx), scxy), vmulq_f64(cc, dyy));
    const float64x2_t rxy = vfmaq_f64(vmulq_f64(vsubq_f64(cc, ss), dxy), sc, ddiff);
    vst1q_f64(xx + j, vfmaq_f64(oxx, k, rxx));
    vst1q_f64(yy + j, vfmaq_f64(oyy, k, ryy));
    vst1q_f64(xy + j, vfmaq_f64(oxy, k, rxy));
  }
  for (; j < n; ++j) {
    const SymMatrix2 m = reference::rotate_decay(delta, offset, decay2[j], c[j], s[j]);
    xx[j] = m.xx;
    yy[j] = m.yy;
    xy[j] = m.xy;
  }
}

void closed_form_squeezing(const double* u, const double* v, const double* d, const double* ratio,
                           double* aleph, std::size_t n) {
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t four = vdupq_n_f64(4.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t vu = vld1q_f64(u + j);
    const float64x2_t vv = vld1q_f64(v + j);
    const float64x2_t vd = vld1q_f64(d + j);
    const float64x2_t r = vld1q_f64(ratio + j);
    const float64x2_t sum = vaddq_f64(vu, vv);
    const float64x2_t diff = vsubq_f64(vu, vv);
    const float64x2_t r2 = vmulq_f64(r, r);
    const float64x2_t dd = vmulq_f64(vd, vd);
    const float64x2_t x = vsqrtq_f64(vfmaq_f64(vmulq_f64(diff, diff), four, dd));
    const float64x2_t g = vmulq_f64(vsqrtq_f64(vaddq_f64(one, r2)), sum);
    const float64x2_t gram = vmulq_f64(four, vsubq_f64(vmulq_f64(vu, vv), dd));
    const float64x2_t numerator = vsqrtq_f64(vfmaq_f64(gram, r2, vmulq_f64(sum, sum)));
    vst1q_f64(aleph + j, vsqrtq_f64(vdivq_f64(numerator, vaddq_f64(g, x))));
  }
  for (; j < n; ++j) aleph[j] = reference::closed_form_squeezing(u[j], v[j], d[j], ratio[j]);
}

constexpr KernelTable kNeon{Isa::neon, objective_row, rotate_decay, closed_form_squeezing};

}  // namespace

namespace detail {
const KernelTable* neon_table() { return &kNeon; }
}  // namespace detail

}  // namespace gsieve::simd
