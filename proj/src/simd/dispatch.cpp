#include <cstdlib>
#include <stdexcept>
#include <string>

#include "gsieve/simd/kernels.hpp"

namespace gsieve::simd {

namespace detail {
#ifndef GSIEVE_HAVE_AVX2_KERNELS
const KernelTable* avx2_table() { return nullptr; }
#endif
#ifndef GSIEVE_HAVE_NEON_KERNELS
const KernelTable* neon_table() { return nullptr; }
#endif
}  // namespace detail

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select_active() {
  const auto isas = available_isas();
  if (const char* pinned = std::getenv("GSIEVE_ISA")) {
    const std::string want(pinned);
    for (Isa isa : isas) {
      if (to_string(isa) == want) return kernels_for(isa);
    }
    return scalar_kernels();
  }
  return kernels_for(isas.back());
}

}  // namespace

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::scalar};
  if (detail::avx2_table() != nullptr && cpu_has_avx2()) out.push_back(Isa::avx2);
  if (detail::neon_table() != nullptr) out.push_back(Isa::neon);
  return out;
}

const KernelTable& kernels_for(Isa isa) {
  switch (isa) {
    case Isa::scalar: return scalar_kernels();
    case Isa::avx2:
      if (detail::avx2_table() != nullptr && cpu_has_avx2()) return *detail::avx2_table();
      break;
    case Isa::neon:
      if (detail::neon_table() != nullptr) return *detail::neon_table();
      break;
  }
  throw std::invalid_argument("kernel table not available: " + std::string(to_string(isa)));
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select_active();
  return table;
}

}  // namespace gsieve::simd
