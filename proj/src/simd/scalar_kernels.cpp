#include "gsieve/simd/kernels.hpp"

namespace gsieve::simd {
namespace {

void objective_row(const reference::ObjectiveRow& row, const double* major, const double* minor,
                   double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) out[j] = reference::sieve_objective(row, major[j], minor[j]);
}

void rotate_decay(const SymMatrix2& delta, const SymMatrix2& offset, const double* decay2,
                  const double* c, const double* s, double* xx, double* yy, double* xy,
                  std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const SymMatrix2 m = reference::rotate_decay(delta, offset, decay2[j], c[j], s[j]);
    xx[j] = m.xx;
    yy[j] = m.yy;
    xy[j] = m.xy;
  }
}

void closed_form_squeezing(const double* u, const double* v, const double* d, const double* ratio,
                           double* aleph, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    aleph[j] = reference::closed_form_squeezing(u[j], v[j], d[j], ratio[j]);
  }
}

constexpr KernelTable kScalar{Isa::scalar, objective_row, rotate_decay, closed_form_squeezing};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace gsieve::simd
