#include <cmath>
#include <random>

#include "core/abrikosov.hpp"
#include "core/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace vtf;

TEST_CASE("square-lattice oracle is converged") {
  const double b24 = oracle::square_lattice_beta(24), b32 = oracle::square_lattice_beta(32);
  CHECK(std::abs(b24 - b32) < 1e-12);
  CHECK(b32 == doctest::Approx(1.1803).epsilon(1e-4));
}

TEST_CASE("d = 1 square torus matches the Landau-gauge oracle") {
  const TorusSpec t = make_torus(1);
  const LLLBasis b = lll_basis(t, abrikosov_grid(t));
  const AbrikosovEstimate e = minimize_quartic(b, 4, 1);
  CHECK(e.ratio == doctest::Approx(oracle::square_lattice_beta()).epsilon(1e-4));
  CHECK(quartic_ratio(b, {cplx(0.6, 0.8)}) == doctest::Approx(e.ratio).epsilon(1e-12));
}

TEST_CASE("hexagonal lattice state on the sqrt(3) torus") {
  const TorusSpec t = make_torus(2, std::sqrt(3.0));
  REQUIRE(lattice_compatible(t, LatticeType::hexagonal));
  const LLLBasis b = lll_basis(t, abrikosov_grid(t));
  const double hex = quartic_ratio(b, lattice_trial(b, LatticeType::hexagonal));
  CHECK(hex == doctest::Approx(1.1596).epsilon(1e-3));
  const AbrikosovEstimate e = minimize_quartic(b, 8, 2);
  CHECK(e.ratio <= hex + 1e-8);
  CHECK(e.converged);
}

TEST_CASE("incompatible lattices are rejected") {
  const TorusSpec t = make_torus(1);
  const LLLBasis b = lll_basis(t, abrikosov_grid(t));
  CHECK_FALSE(lattice_compatible(t, LatticeType::hexagonal));
  CHECK_THROWS_AS(lattice_trial(b, LatticeType::hexagonal), Error);
}

TEST_CASE("quartic ratio is at least 1 and scale invariant") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n01;
  for (int d : {2, 3, 4, 6}) {
    const TorusSpec t = make_torus(d);
    const LLLBasis b = lll_basis(t, abrikosov_grid(t));
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<cplx> c(d), c2(d);
      for (int l = 0; l < d; ++l) {
        c[l] = cplx(n01(rng), n01(rng));
        c2[l] = cplx(0.0, 2.5) * c[l];
      }
      const double r = quartic_ratio(b, c);
      CHECK(r >= 1.0);
      CHECK(quartic_ratio(b, c2) == doctest::Approx(r).epsilon(1e-12));
    }
  }
}

TEST_CASE("beta versus flux") {
  const auto rows = eab_vs_flux({1, 4}, 1.0, 5, 8);
  REQUIRE(rows.size() == 2);
  for (const FluxRow& r : rows) {
    CHECK(r.beta_min >= 1.0);
    CHECK(r.beta_min <= r.beta_square + 1e-8);
  }
}
