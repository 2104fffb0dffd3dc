#include <cmath>
#include <random>

#include "core/error.hpp"
#include "core/torus.hpp"
#include "core/vortex.hpp"
#include "doctest.h"

using namespace vtf;

TEST_CASE("single zero of z exp(-|z|^2/2) at the origin") {
  const GridSpec g = square_grid(64, 8.0, Boundary::dirichlet);
  const ComplexField u = sample(g, [](double x, double y) { return cplx(x, y) * std::exp(-0.5 * (x * x + y * y)); });
  const VortexSet v = vortex_census(u);
  CHECK(v.perturbed);  // the origin is a grid node
  REQUIRE(v.positions.size() == 1);
  CHECK(v.windings[0] == 1);
  CHECK(std::hypot(v.positions[0][0], v.positions[0][1]) < g.h());
  CHECK(v.smear_checked);
  CHECK(v.smear_distance <= v.smear_tolerance);
}

TEST_CASE("off-node zeros and antivortices") {
  const GridSpec g = square_grid(80, 10.0, Boundary::dirichlet);
  const double a = 1.03, b = -0.71;
  const ComplexField u = sample(g, [&](double x, double y) {
    return (cplx(x, y) - cplx(a, b)) * std::conj(cplx(x, y) + cplx(a, b)) * std::exp(-0.5 * (x * x + y * y));
  });
  const VortexSet v = vortex_census(u, {1e-8, 0.0});
  CHECK_FALSE(v.perturbed);
  REQUIRE(v.positions.size() == 2);
  CHECK(v.winding_sum() == 0);
  for (std::size_t k = 0; k < 2; ++k) {
    const double sx = v.windings[k] > 0 ? a : -a, sy = v.windings[k] > 0 ? b : -b;
    CHECK(std::abs(v.positions[k][0] - sx) <= 0.5 * g.h() + 1e-12);
    CHECK(std::abs(v.positions[k][1] - sy) <= 0.5 * g.h() + 1e-12);
  }
}

TEST_CASE("a Gaussian has no vortices") {
  const GridSpec g = square_grid(48, 8.0, Boundary::dirichlet);
  const ComplexField u = sample(g, [](double x, double y) { return cplx(std::exp(-0.5 * (x * x + y * y)), 0.0); });
  const VortexSet v = vortex_census(u);
  CHECK(v.positions.empty());
  CHECK(v.smear_checked);
  CHECK(v.smear_distance <= v.smear_tolerance);
}

TEST_CASE("zeros lying on the periodic seam are counted once") {
  // theta state l=0 at d=8 has its zeros on x = -l1/2, midway between nodes at n1=72
  const TorusSpec t = make_torus(8);
  for (int n1 : {64, 72, 80}) {
    CAPTURE(n1);
    const LLLBasis b = lll_basis(t, torus_grid(t, n1));
    for (int l : {0, 3}) {
      const VortexSet v = vortex_census(b.field(l));
      CHECK(v.winding_sum() == 8);
      CHECK(v.positions.size() == 8);
    }
  }
}

TEST_CASE("torus LLL states carry d vortices of total winding d") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  for (int d : {1, 2, 4, 8}) {
    CAPTURE(d);
    const TorusSpec t = make_torus(d);
    const LLLBasis b = lll_basis(t, torus_grid(t, 12 * int(std::ceil(std::sqrt(double(d)))) * 4));
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<cplx> c(d);
      for (auto& z : c) z = cplx(n01(rng), n01(rng));
      const VortexSet v = vortex_census(b.combine(c));
      CHECK(v.unresolved == 0);
      CHECK(v.winding_sum() == d);
      CHECK(int(v.positions.size()) == d);
      CHECK(v.smear_checked);
      CHECK(v.smear_distance <= v.smear_tolerance);
    }
  }
}

TEST_CASE("census guards") {
  const GridSpec g = square_grid(16, 4.0, Boundary::dirichlet);
  CHECK_THROWS_AS(vortex_census(make_field(g)), Error);
}
