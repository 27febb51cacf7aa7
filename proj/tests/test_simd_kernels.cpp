#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "gsieve/simd/kernels.hpp"
#include "test_support.hpp"

using namespace gsieve;
using namespace gsieve::simd;
using gsieve::testing::Rng;

namespace {

// Lengths around the vector widths plus one long tail.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 17, 1001};

// Vector tables may contract into FMA, so compare against a scale rather than
// bitwise.
void check_close(double got, double want, double scale) {
  CHECK(std::abs(got - want) <= 1e-14 * scale);
}

}  // namespace

TEST_CASE("dispatch") {
  const std::vector<Isa> isas = available_isas();
  REQUIRE_FALSE(isas.empty());
  CHECK(isas.front() == Isa::scalar);
  CHECK(kernels_for(Isa::scalar).isa == Isa::scalar);
  const Isa active = active_kernels().isa;
  CHECK(std::find(isas.begin(), isas.end(), active) != isas.end());
  if (const char* pinned = std::getenv("GSIEVE_ISA")) {
    CHECK(std::string(to_string(active)) == pinned);
  } else {
    CHECK(active == isas.back());
  }
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (std::find(isas.begin(), isas.end(), isa) == isas.end()) {
      CHECK_THROWS_AS(kernels_for(isa), std::invalid_argument);
    }
  }
  CHECK(to_string(Isa::avx2) == "avx2");
}

TEST_CASE("scalar table follows the reference formulas") {
  Rng rng(51);
  const KernelTable& k = scalar_kernels();
  const reference::ObjectiveRow row{0.3, 0.7, 0.458, 1.2, 0.4, -0.3, 0.75};
  std::vector<double> major{0.5, 1.0, 4.0}, minor{2.0, 1.0, 0.25}, out(3);
  k.objective_row(row, major.data(), minor.data(), out.data(), 3);
  for (int j = 0; j < 3; ++j) CHECK(out[j] == reference::sieve_objective(row, major[j], minor[j]));
}

TEST_CASE("vector tables match the scalar reference") {
  Rng rng(52);
  for (Isa isa : available_isas()) {
    CAPTURE(to_string(isa));
    const KernelTable& k = kernels_for(isa);
    CHECK(k.isa == isa);
    for (std::size_t n : kLengths) {
      CAPTURE(n);
      SUBCASE("objective_row") {
        const double theta = testing::uniform(rng, 0, 3.14);
        const reference::ObjectiveRow row{std::cos(theta) * std::cos(theta),
                                          std::sin(theta) * std::sin(theta),
                                          std::sin(theta) * std::cos(theta),
                                          testing::uniform(rng, 0.1, 5),
                                          testing::uniform(rng, 0.1, 5),
                                          testing::uniform(rng, -1, 1),
                                          testing::uniform(rng, 0.5, 3)};
        std::vector<double> major(n), minor(n), out(n, -1.0);
        for (std::size_t j = 0; j < n; ++j) {
          major[j] = testing::log_uniform(rng, 1e-3, 1e3);
          minor[j] = 1 / major[j];
        }
        k.objective_row(row, major.data(), minor.data(), out.data(), n);
        for (std::size_t j = 0; j < n; ++j) {
          const double want = reference::sieve_objective(row, major[j], minor[j]);
          const double scale = row.scale * (major[j] + minor[j]) *
                               (row.t_pp + row.t_qq + 2 * std::abs(row.t_pq));
          check_close(out[j], want, scale);
        }
      }
      SUBCASE("rotate_decay") {
        const SymMatrix2 delta{testing::uniform(rng, -3, 3), testing::uniform(rng, -3, 3),
                               testing::uniform(rng, -3, 3)};
        const SymMatrix2 offset{testing::uniform(rng, 0.5, 3), testing::uniform(rng, 0.5, 3),
                                testing::uniform(rng, -0.4, 0.4)};
        std::vector<double> decay2(n), c(n), s(n), xx(n), yy(n), xy(n);
        for (std::size_t j = 0; j < n; ++j) {
          const double phase = testing::uniform(rng, 0, 100);
          decay2[j] = std::exp(-testing::uniform(rng, 0, 10));
          c[j] = std::cos(phase);
          s[j] = std::sin(phase);
        }
        k.rotate_decay(delta, offset, decay2.data(), c.data(), s.data(), xx.data(), yy.data(),
                       xy.data(), n);
        for (std::size_t j = 0; j < n; ++j) {
          const SymMatrix2 want = reference::rotate_decay(delta, offset, decay2[j], c[j], s[j]);
          const double scale = delta.norm() + offset.norm();
          check_close(xx[j], want.xx, scale);
          check_close(yy[j], want.yy, scale);
          check_close(xy[j], want.xy, scale);
        }
      }
      SUBCASE("closed_form_squeezing") {
        std::vector<double> u(n), v(n), d(n), ratio(n), aleph(n);
        for (std::size_t j = 0; j < n; ++j) {
          u[j] = testing::log_uniform(rng, 0.01, 100);
          v[j] = testing::log_uniform(rng, 0.01, 100);
          d[j] = testing::uniform(rng, -0.9, 0.9) * std::sqrt(u[j] * v[j]);
          ratio[j] = testing::log_uniform(rng, 1e-4, 1e4);
        }
        k.closed_form_squeezing(u.data(), v.data(), d.data(), ratio.data(), aleph.data(), n);
        for (std::size_t j = 0; j < n; ++j) {
          check_close(aleph[j], reference::closed_form_squeezing(u[j], v[j], d[j], ratio[j]), 1.0);
        }
      }
    }
  }
}
