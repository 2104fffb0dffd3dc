#include <cmath>
#include <random>

#include "core/error.hpp"
#include "core/trapped.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace vtf;

TEST_CASE("spacing snaps to sqrt(pi)/n") {
  CHECK(snap_spacing(0.1) == doctest::Approx(std::sqrt(oracle::pi) / 18).epsilon(1e-14));
  CHECK(snap_spacing(0.05) == doctest::Approx(std::sqrt(oracle::pi) / 35).epsilon(1e-14));
  const GridSpec g = trapped_grid(8.0, 0.1);
  CHECK(g.h() == doctest::Approx(snap_spacing(0.1)));
  CHECK(g.lx >= 16.0);
  CHECK(g.bc == Boundary::dirichlet);
}

TEST_CASE("discrete Landau level tends to 1 at second order") {
  const double e1 = discrete_landau_energy(0.2), e2 = discrete_landau_energy(0.1), e3 = discrete_landau_energy(0.05);
  CHECK(e1 < e2);
  CHECK(e2 < e3);
  CHECK(e3 < 1.0);
  const double r = (1 - e2) / (1 - e3) * std::pow(snap_spacing(0.05) / snap_spacing(0.1), 2);
  CHECK(r == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("Fock-Bargmann quartic against direct quadrature") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n01;
  std::vector<cplx> c(6);
  for (auto& z : c) z = cplx(n01(rng), n01(rng));
  auto dens = [&](double x, double y) {
    cplx s = 0;
    for (int n = 0; n < 6; ++n) s += c[n] * oracle::fb_state(n, x, y);
    return std::norm(s);
  };
  const double quad = oracle::gauss2d([&](double x, double y) { return dens(x, y) * dens(x, y); }, -9, 9, -9, 9, 36);
  std::vector<cplx> grad;
  const double q = fb_quartic(c, &grad);
  CHECK(q == doctest::Approx(quad).epsilon(1e-9));
  // gradient: directional derivative along a random complex direction
  std::vector<cplx> dir(6), cp(6), cm(6);
  for (auto& z : dir) z = cplx(n01(rng), n01(rng));
  const double t = 1e-5;
  double dd = 0;
  for (int n = 0; n < 6; ++n) {
    cp[n] = c[n] + t * dir[n];
    cm[n] = c[n] - t * dir[n];
    dd += (std::conj(grad[n]) * dir[n]).real();
  }
  CHECK((fb_quartic(cp) - fb_quartic(cm)) / (2 * t) == doctest::Approx(dd).epsilon(1e-6));
}

TEST_CASE("sampled Fock-Bargmann fields keep their coefficient norm") {
  const std::vector<cplx> c = {cplx(0.6, 0.0), cplx(0.0, 0.8), cplx(0.2, -0.1)};
  const ComplexField u = fb_field(square_grid(160, 16.0, Boundary::dirichlet), c);
  CHECK(mass(u) == doctest::Approx(0.36 + 0.64 + 0.05).epsilon(1e-8));
}

TEST_CASE("mass outside a disk for a Gaussian") {
  const GridSpec g = square_grid(200, 14.0, Boundary::dirichlet);
  const ComplexField u =
      sample(g, [](double x, double y) { return cplx(std::exp(-0.5 * (x * x + y * y)) / std::sqrt(oracle::pi), 0.0); });
  for (double r : {0.5, 1.0, 2.0}) CHECK(mass_outside(u, r) == doctest::Approx(std::exp(-r * r)).epsilon(0.03));
}

TEST_CASE("G = 0 trapped ground state has energy 1/omega") {
  for (double om : {0.8, 0.9}) {
    const RegimeParams p = regime(om, 0.0);
    const TrappedRun a = minimize_trapped(p, 8.0, 0.2, 1), b = minimize_trapped(p, 8.0, 0.1, 1);
    CHECK(a.converged);
    CHECK(b.converged);
    const double ea = std::abs(a.energy.total - 1 / om), eb = std::abs(b.energy.total - 1 / om);
    CHECK(eb < ea);
    CHECK(eb < 5e-3 / om);
  }
}

TEST_CASE("LLL minimizer in the weak coupling limit") {
  // at G -> 0 the minimizer is phi_0: energy 1 + trap coefficient
  const RegimeParams p = regime(0.8, 1e-6);
  const LLLRun r = minimize_lll(p, 16, 1);
  CHECK(r.energy.total == doctest::Approx(1 + p.trap_coeff()).epsilon(1e-6));
  CHECK(std::norm(r.coeffs[0]) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.tail_weight < 1e-8);
}

TEST_CASE("GP lies below the LLL state on the same grid") {
  const RegimeParams p = regime_from_delta(std::sqrt(0.8), 0.8);
  const GapResult gap = gp_lll_gap(p, default_box_radius(p), 0.15, default_degree(p), 1);
  CHECK(gap.e_gp <= gap.e_lll_grid + 1e-10);
  CHECK(gap.gap_normalized >= 0.0);
  CHECK(gap.gp.converged);
  CHECK(gap.gp.outside_mass < 1e-3);
  const DecayProfile d = decay_profile(gap.gp);
  CHECK(d.fitted_slope <= 0.5 * d.reference_slope);
}

TEST_CASE("trapped guards") {
  const RegimeParams p = regime_from_delta(std::sqrt(0.96), 0.8);
  CHECK_THROWS_AS(minimize_trapped(p, 1.0, 0.1, 1), Error);
  CHECK_THROWS_AS(regime(1.2, 1.0), Error);
  CHECK_THROWS_AS(regime(0.5, -1.0), Error);
}
