#include <cmath>
#include <numbers>
#include <random>

#include "core/error.hpp"
#include "core/lda.hpp"
#include "core/tf.hpp"
#include "doctest.h"

using namespace vtf;

namespace {

constexpr double kPi = std::numbers::pi;

// eps = 0.04, G = 1, hexagonal constant
TFProfile test_profile() { return tf_profile(regime(std::sqrt(0.96), 1.0), 1.1596); }

// Square Dirichlet grid with nodes on multiples of h covering [-half, half]^2.
GridSpec node_grid(double half, double h) {
  const int n = 2 * int(std::ceil(half / h));
  return square_grid(n, n * h, Boundary::dirichlet);
}

ComplexField tf_field(const TFProfile& tf, const GridSpec& g) {
  return sample(g, [&](double x, double y) { return cplx(std::sqrt(tf.density(x, y)), 0.0); });
}

}  // namespace

TEST_CASE("eta interval and default tiling side") {
  const auto iv = eta_interval(0.8);
  CHECK(iv[0] == doctest::Approx(2.6 / 6));
  CHECK(iv[1] == doctest::Approx(0.45));
  CHECK(default_eta(0.8) == doctest::Approx(0.5 * (2.6 / 6 + 0.45)));
  CHECK_THROWS_AS(default_eta(0.1), Error);  // 1 - delta exceeds (1 + delta)/4
  const TFProfile tf = tf_profile(regime_from_delta(std::sqrt(0.96), 0.8), 1.1596);
  const TilingSpec t = make_tiling(tf);
  CHECK(t.side == doctest::Approx(std::pow(0.04, -t.eta)));
  CHECK(t.eta_admissible);
  CHECK_FALSE(make_tiling(tf, 0.9).eta_admissible);
}

TEST_CASE("tiling covers exactly the tiles meeting the disk") {
  const double L = 0.7, R = 2.3;
  const TilingSpec t = make_tiling(L, R);
  int expect = 0;
  for (int j = -10; j <= 10; ++j)
    for (int i = -10; i <= 10; ++i) {
      // brute force: sample the closed square densely
      bool hit = false;
      for (int b = 0; b <= 200 && !hit; ++b)
        for (int a = 0; a <= 200 && !hit; ++a) {
          const double x = (i - 0.5 + a / 200.0) * L, y = (j - 0.5 + b / 200.0) * L;
          hit = x * x + y * y <= R * R;
        }
      expect += hit;
    }
  CHECK(int(t.index.size()) == expect);
}

TEST_CASE("coarse graining reproduces piecewise constant densities") {
  const double h = 0.05, L = 7 * h;  // tile edges fall between nodes
  const GridSpec g = node_grid(2.0, h);
  const TilingSpec t = make_tiling(L, 1.2);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u01(0.1, 1.0);
  std::vector<double> level(t.index.size());
  for (auto& v : level) v = u01(rng);
  ComplexField u = make_field(g);
  for (int j = 1; j < g.nodes_y() - 1; ++j)
    for (int i = 1; i < g.nodes_x() - 1; ++i) {
      const int ti = int(std::floor(g.x(i) / L + 0.5)), tj = int(std::floor(g.y(j) / L + 0.5));
      for (std::size_t k = 0; k < t.index.size(); ++k)
        if (t.index[k][0] == ti && t.index[k][1] == tj) u.values[g.index(i, j)] = std::sqrt(level[k]);
    }
  const CoarseDensity cd = coarse_grain(u, t);
  for (std::size_t k = 0; k < level.size(); ++k) CHECK(cd.values[k] == doctest::Approx(level[k]).epsilon(1e-12));
  CHECK(cd.covered_mass == doctest::Approx(cd.total_mass).epsilon(1e-12));
  CHECK(cd.total_mass == doctest::Approx(mass(u)).epsilon(1e-12));
}

TEST_CASE("coarse graining is an L2 contraction") {
  const double h = 0.05;
  const GridSpec g = node_grid(2.0, h);
  const TilingSpec t = make_tiling(9 * h, 1.4);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n01;
  const auto w = quadrature_weights(g);
  for (int trial = 0; trial < 5; ++trial) {
    ComplexField a = make_field(g), b = make_field(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g.on_boundary(int(k % g.nodes_x()), int(k / g.nodes_x()))) continue;
      a.values[k] = cplx(n01(rng), n01(rng));
      b.values[k] = cplx(n01(rng), n01(rng));
    }
    const CoarseDensity ca = coarse_grain(a, t), cb = coarse_grain(b, t);
    double coarse = 0.0, fine = 0.0;
    for (std::size_t k = 0; k < ca.values.size(); ++k)
      coarse += std::pow(ca.values[k] - cb.values[k], 2) * t.side * t.side;
    // fine norm restricted to nodes inside the tiles
    for (int j = 0; j < g.nodes_y(); ++j)
      for (int i = 0; i < g.nodes_x(); ++i) {
        const int ti = int(std::floor(g.x(i) / t.side + 0.5)), tj = int(std::floor(g.y(j) / t.side + 0.5));
        bool in = false;
        for (const auto& ix : t.index) in = in || (ix[0] == ti && ix[1] == tj);
        const std::size_t k = g.index(i, j);
        if (in) fine += w[k] * std::pow(std::norm(a.values[k]) - std::norm(b.values[k]), 2);
      }
    CHECK(coarse <= fine * (1 + 1e-12));
  }
}

TEST_CASE("L2 distance of the empty density is the TF norm") {
  const TFProfile tf = test_profile();
  const GridSpec g = node_grid(tf.radius + 1.0, 0.05);
  const TilingSpec t = make_tiling(0.35, tf.radius);
  ComplexField u = make_field(g);
  u.values[g.index(1, 1)] = 1e-3;  // outside every tile
  const L2Distance d = l2_distance(coarse_grain(u, t), tf);
  // int rho^2 = s^2 * 2 pi lambda1^3 / (3 e^2) with lambda1 = sqrt(e / pi)
  const double e = 1.1596, lam = std::sqrt(e / kPi);
  const double s = std::pow(0.04, 0.25) / std::sqrt(std::sqrt(0.96));
  CHECK(d.value * d.value == doctest::Approx(s * s * 2 * kPi * std::pow(lam, 3) / (3 * e * e)).epsilon(1e-6));
  CHECK(d.times_ltf == doctest::Approx(d.value * std::pow(0.04, -0.25)).epsilon(1e-12));
}

TEST_CASE("L2 distance of coarse-grained TF scales like L^2 |grad rho|^2 / 12") {
  const TFProfile tf = test_profile();
  const double e = 1.1596, lam = std::sqrt(e / kPi);
  const double s = std::pow(0.04, 0.25) / std::sqrt(std::sqrt(0.96));
  // int |grad rho|^2 = 2 pi s^4 lambda1^2 / e^2
  const double grad2 = 2 * kPi * std::pow(s, 4) * lam * lam / (e * e);
  const double h = 0.01;
  const GridSpec g = node_grid(tf.radius + 0.6, h);
  const ComplexField u = tf_field(tf, g);
  std::vector<double> normalized;
  for (int m : {41, 21, 11}) {
    const TilingSpec t = make_tiling(m * h, tf.radius);
    const double d2 = std::pow(l2_distance(coarse_grain(u, t), tf).value, 2);
    normalized.push_back(d2 / (t.side * t.side * grad2 / 12));
  }
  for (double r : normalized) CHECK(std::abs(r - 1) < 0.25);
  CHECK(std::abs(normalized[2] - 1) < std::abs(normalized[0] - 1));
}

TEST_CASE("rescaled deposits conserve mass") {
  const TFProfile tf = test_profile();
  const GridSpec g = node_grid(tf.radius + 0.5, 0.04);
  const ComplexField u = tf_field(tf, g);
  const double S = tf.params.tf_length();
  const RescaledDensity a = rescale_density(u, S, 1.5 * tf.radius1, 0.05);
  const RescaledDensity b = rescale_density(tf, S, 1.5 * tf.radius1, 0.05);
  double ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < a.rho.size(); ++k) {
    ma += a.rho[k] * a.grid.h * a.grid.h;
    mb += b.rho[k] * b.grid.h * b.grid.h;
  }
  CHECK(ma == doctest::Approx(mass(u)).epsilon(1e-12));
  CHECK(mb == doctest::Approx(1.0).epsilon(1e-4));
  // a fine sampling of the TF density is close to the TF deposit
  CHECK(dual_lipschitz(a.grid, a.rho, b.rho) < 0.01);
}

TEST_CASE("metric report of the TF density itself") {
  const TFProfile tf = test_profile();
  const GridSpec g = node_grid(tf.radius + 0.5, 0.02);
  const ComplexField u = tf_field(tf, g);
  const TilingSpec t = make_tiling(21 * 0.02, tf.radius);
  const MetricReport m = metric_report(u, 0.99 + tf.energy, 0.99, tf, t);
  CHECK(m.energy_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.energy_ratio_raw == doctest::Approx(1.0 - 0.01 / tf.energy).epsilon(1e-12));
  CHECK(m.covered_mass == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(m.dual_lipschitz < 0.01);
  CHECK(m.l2_times_ltf == doctest::Approx(m.l2_distance * tf.params.tf_length()));
}

TEST_CASE("coarse graining rejects tiles outside the grid") {
  const TFProfile tf = test_profile();
  const GridSpec g = node_grid(1.0, 0.05);
  CHECK_THROWS_AS(coarse_grain(tf_field(tf, g), make_tiling(0.35, tf.radius)), Error);
}
