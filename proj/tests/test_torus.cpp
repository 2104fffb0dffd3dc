#include <cmath>
#include <memory>
#include <random>

#include "core/error.hpp"
#include "core/torus.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace vtf;

TEST_CASE("torus geometry") {
  const TorusSpec t = make_torus(6, 1.5);
  CHECK(t.area() == doctest::Approx(6 * oracle::pi));
  CHECK(t.aspect() == doctest::Approx(1.5));
  CHECK_THROWS_AS(make_torus(0), Error);
  CHECK_THROWS_AS(make_torus(2, -1.0), Error);
  const GridSpec g = torus_grid(make_torus(4), 32);
  CHECK(g.flux() == doctest::Approx(4.0));
  CHECK_THROWS_AS(check_grid_matches(make_torus(2), g), Error);
}

TEST_CASE("theta states obey the magnetic twists") {
  const TorusSpec t = make_torus(3, 1.0);
  for (int l = 0; l < 3; ++l)
    for (double x : {-0.7, 0.2, 1.3})
      for (double y : {-1.1, 0.4}) {
        const cplx u = theta_state(t, l, x, y, 10);
        const cplx ux = theta_state(t, l, x + t.l1, y, 10);
        const cplx uy = theta_state(t, l, x, y + t.l2, 10);
        CHECK(std::abs(ux - std::polar(1.0, t.l1 * y) * u) < 1e-10);
        CHECK(std::abs(uy - std::polar(1.0, -t.l2 * x) * u) < 1e-10);
      }
}

TEST_CASE("theta states are orthonormal under high-order quadrature") {
  const TorusSpec t = make_torus(2, 1.0);
  const double x0 = -0.5 * t.l1, y0 = -0.5 * t.l2;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double re = oracle::gauss2d(
          [&](double x, double y) { return (std::conj(theta_state(t, a, x, y, 10)) * theta_state(t, b, x, y, 10)).real(); },
          x0, x0 + t.l1, y0, y0 + t.l2, 12);
      CHECK(re == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-8));
    }
}

TEST_CASE("Landau spectrum on a small torus") {
  const TorusSpec t = make_torus(2);
  const SpectrumResult s = landau_spectrum(t, torus_grid(t, 48), 4, 3);
  REQUIRE(s.eigenvalues.size() == 4);
  CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(0.01));
  CHECK(s.eigenvalues[1] == doctest::Approx(1.0).epsilon(0.01));
  CHECK(s.eigenvalues[2] == doctest::Approx(3.0).epsilon(0.03));
  for (double r : s.residuals) CHECK(r < 1e-6);
  // the computed eigenspace and the theta span coincide
  const LLLBasis b = lll_basis(t, torus_grid(t, 48));
  CHECK(subspace_angle(b, s.vectors.leftCols(2)) < 0.05);
}

TEST_CASE("LLL basis and torus projector") {
  const TorusSpec t = make_torus(4);
  auto b = std::make_shared<const LLLBasis>(lll_basis(t, torus_grid(t, 40)));
  CHECK(b->gram_offdiag_max < 1e-8);
  const Projector P = Projector::torus(b);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  ComplexField u = make_field(b->grid);
  for (auto& z : u.values) z = cplx(n01(rng), n01(rng));
  const ComplexField pu = P.apply(u), ppu = P.apply(pu);
  double diff = 0, norm = 0;
  for (std::size_t k = 0; k < pu.values.size(); ++k) {
    diff += std::norm(ppu.values[k] - pu.values[k]);
    norm += std::norm(pu.values[k]);
  }
  CHECK(std::sqrt(diff / norm) < 1e-10);
  // combine/coefficients round trip
  std::vector<cplx> c(4);
  for (auto& z : c) z = cplx(n01(rng), n01(rng));
  const auto c2 = b->coefficients(b->combine(c));
  for (int l = 0; l < 4; ++l) CHECK(std::abs(c2[l] - c[l]) < 1e-10);
}

TEST_CASE("plane kernel reproduces Fock-Bargmann states") {
  // int Pi(x, y) phi_n(y) dy = phi_n(x), by independent quadrature
  for (int n : {0, 1, 3}) {
    for (auto [x1, x2] : {std::pair{0.3, -0.4}, std::pair{-1.1, 0.7}}) {
      const double re = oracle::gauss2d(
          [&](double y1, double y2) { return (plane_kernel(x1, x2, y1, y2) * oracle::fb_state(n, y1, y2)).real(); },
          -8, 8, -8, 8, 32);
      const double im = oracle::gauss2d(
          [&](double y1, double y2) { return (plane_kernel(x1, x2, y1, y2) * oracle::fb_state(n, y1, y2)).imag(); },
          -8, 8, -8, 8, 32);
      const cplx phi = oracle::fb_state(n, x1, x2);
      CHECK(std::abs(fock_bargmann(n, x1, x2) - phi) < 1e-14);
      CHECK(std::abs(cplx(re, im) - phi) < 1e-8);
    }
    const double norm = oracle::gauss2d([&](double y1, double y2) { return std::norm(fock_bargmann(n, y1, y2)); },
                                        -9, 9, -9, 9, 32);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
  }
}
