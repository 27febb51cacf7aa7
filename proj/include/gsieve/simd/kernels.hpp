#pragma once

// Runtime-dispatched batch kernels. Each table entry processes `n` independent
// lanes; the scalar table is the reference every vector table must match.

#include <cstddef>
#include <string_view>
#include <vector>

#include "gsieve/gaussian_core.hpp"
#include "gsieve/simd/reference.hpp"

namespace gsieve::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;

  // out[j] = objective(row, major[j], minor[j]).
  void (*objective_row)(const reference::ObjectiveRow& row, const double* major,
                        const double* minor, double* out, std::size_t n);

  // (xx, yy, xy)[j] = rotate_decay(delta, offset, decay2[j], c[j], s[j]).
  void (*rotate_decay)(const SymMatrix2& delta, const SymMatrix2& offset, const double* decay2,
                       const double* c, const double* s, double* xx, double* yy, double* xy,
                       std::size_t n);

  // aleph[j] = closed_form_squeezing(u[j], v[j], d[j], ratio[j]).
  void (*closed_form_squeezing)(const double* u, const double* v, const double* d,
                                const double* ratio, double* aleph, std::size_t n);
};

const KernelTable& scalar_kernels();

// Tables compiled in and supported by the running CPU, scalar first.
std::vector<Isa> available_isas();

// Throws std::invalid_argument if `isa` is not available.
const KernelTable& kernels_for(Isa isa);

// Best available table; GSIEVE_ISA=scalar|avx2|neon in the environment
// pins a specific one (unknown or unavailable values fall back to scalar).
const KernelTable& active_kernels();

namespace detail {
const KernelTable* avx2_table();  // nullptr when not built for x86
const KernelTable* neon_table();  // nullptr when not built for arm64
}  // namespace detail

}  // namespace gsieve::simd
