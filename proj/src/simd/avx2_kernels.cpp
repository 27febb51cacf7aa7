// AVX2/FMA kernels. Functions carry target attributes instead of the whole
// file being built with -mavx2, so nothing here leaks AVX2 code into
// callers that run on older CPUs. Dispatch only selects this table after a
// cpuid check.

#include <immintrin.h>

#include "gsieve/simd/kernels.hpp"

#define GSIEVE_AVX2 __attribute__((target("avx2,fma")))

namespace gsieve::simd {
namespace {

GSIEVE_AVX2 void objective_row(const reference::ObjectiveRow& row, const double* major,
                               const double* minor, double* out, std::size_t n) {
  const __m256d cos2 = _mm256_set1_pd(row.cos2);
  const __m256d sin2 = _mm256_set1_pd(row.sin2);
  const __m256d two_sc = _mm256_set1_pd(2.0 * row.sincos);
  const __m256d tpp = _mm256_set1_pd(row.t_pp);
  const __m256d tqq = _mm256_set1_pd(row.t_qq);
  const __m256d tpq = _mm256_set1_pd(row.t_pq);
  const __m256d scale = _mm256_set1_pd(row.scale);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d ma = _mm256_loadu_pd(major + j);
    const __m256d mi = _mm256_loadu_pd(minor + j);
    const __m256d along = _mm256_fmadd_pd(ma, tpp, _mm256_mul_pd(mi, tqq));
    const __m256d across = _mm256_fmadd_pd(mi, tpp, _mm256_mul_pd(ma, tqq));
    const __m256d cross = _mm256_mul_pd(_mm256_mul_pd(two_sc, _mm256_sub_pd(mi, ma)), tpq);
    const __m256d sum = _mm256_fmadd_pd(cos2, along, _mm256_mul_pd(sin2, across));
    _mm256_storeu_pd(out + j, _mm256_mul_pd(scale, _mm256_sub_pd(sum, cross)));
  }
  for (; j < n; ++j) out[j] = reference::sieve_objective(row, major[j], minor[j]);
}

GSIEVE_AVX2 void rotate_decay(const SymMatrix2& delta, const SymMatrix2& offset,
                              const double* decay2, const double* c, const double* s, double* xx,
                              double* yy, double* xy, std::size_t n) {
  const __m256d dxx = _mm256_set1_pd(delta.xx);
  const __m256d dyy = _mm256_set1_pd(delta.yy);
  const __m256d dxy2 = _mm256_set1_pd(2.0 * delta.xy);
  const __m256d dxy = _mm256_set1_pd(delta.xy);
  const __m256d ddiff = _mm256_set1_pd(delta.yy - delta.xx);
  const __m256d oxx = _mm256_set1_pd(offset.xx);
  const __m256d oyy = _mm256_set1_pd(offset.yy);
  const __m256d oxy = _mm256_set1_pd(offset.xy);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d vc = _mm256_loadu_pd(c + j);
    const __m256d vs = _mm256_loadu_pd(s + j);
    const __m256d k = _mm256_loadu_pd(decay2 + j);
    const __m256d cc = _mm256_mul_pd(vc, vc);
    const __m256d ss = _mm256_mul_pd(vs, vs);
    const __m256d sc = _mm256_mul_pd(vs, vc);
    const __m256d scxy = _mm256_mul_pd(sc, dxy2);
    const __m256d rxx = _mm256_add_pd(_mm256_fmadd_pd(cc, dxx, scxy), _mm256_mul_pd(ss, dyy));
    const __m256d ryy = _mm256_add_pd(_mm256_fmsub_pd(ss, dxx, scxy), _mm256_mul_pd(cc, dyy));
    const __m256d rxy = _mm256_fmadd_pd(sc, ddiff, _mm256_mul_pd(_mm256_sub_pd(cc, ss), dxy));
    _mm256_storeu_pd(xx + j, _mm256_fmadd_pd(k, rxx, oxx));
    _mm256_storeu_pd(yy + j, _mm256_fmadd_pd(k, ryy, oyy));
    _mm256_storeu_pd(xy + j, _mm256_fmadd_pd(k, rxy, oxy));
  }
  for (; j < n; ++j) {
    const SymMatrix2 m = reference::rotate_decay(delta, offset, decay2[j], c[j], s[j]);
    xx[j] = m.xx;
    yy[j] = m.yy;
    xy[j] = m.xy;
  }
}

GSIEVE_AVX2 void closed_form_squeezing(const double* u, const double* v, const double* d,
                                       const double* ratio, double* aleph, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d vu = _mm256_loadu_pd(u + j);
    const __m256d vv = _mm256_loadu_pd(v + j);
    const __m256d vd = _mm256_loadu_pd(d + j);
    const __m256d r = _mm256_loadu_pd(ratio + j);
    const __m256d sum = _mm256_add_pd(vu, vv);
    const __m256d diff = _mm256_sub_pd(vu, vv);
    const __m256d r2 = _mm256_mul_pd(r, r);
    const __m256d dd = _mm256_mul_pd(vd, vd);
    const __m256d x = _mm256_sqrt_pd(_mm256_fmadd_pd(four, dd, _mm256_mul_pd(diff, diff)));
    const __m256d g = _mm256_mul_pd(_mm256_sqrt_pd(_mm256_add_pd(one, r2)), sum);
    const __m256d gram = _mm256_mul_pd(four, _mm256_fmsub_pd(vu, vv, dd));
    const __m256d numerator = _mm256_sqrt_pd(_mm256_fmadd_pd(r2, _mm256_mul_pd(sum, sum), gram));
    _mm256_storeu_pd(aleph + j, _mm256_sqrt_pd(_mm256_div_pd(numerator, _mm256_add_pd(g, x))));
  }
  for (; j < n; ++j) aleph[j] = reference::closed_form_squeezing(u[j], v[j], d[j], ratio[j]);
}

constexpr KernelTable kAvx2{Isa::avx2, objective_row, rotate_decay, closed_form_squeezing};

}  // namespace

namespace detail {
const KernelTable* avx2_table() { return &kAvx2; }
}  // namespace detail

}  // namespace gsieve::simd
