#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <random>
#include <vector>

#include "core/error.hpp"
#include "core/transport.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace vtf;

namespace {

std::vector<double> random_measure(std::size_t n, std::mt19937_64& rng, double zero_frac = 0.3) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng) < zero_frac ? 0.0 : u(rng);
  return v;
}

// Dense two-phase simplex (Bland's rule): min c.x, A x = b, x >= 0, b >= 0.
double simplex_min(std::vector<std::vector<double>> A, std::vector<double> b, const std::vector<double>& c) {
  const std::size_t m = A.size(), n = c.size();
  // tableau with artificials n..n+m-1
  std::vector<std::vector<double>> T(m + 1, std::vector<double>(n + m + 1, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1.0;
    T[i][n + m] = b[i];
    basis[i] = n + i;
  }
  auto pivot = [&](std::size_t r, std::size_t col) {
    const double p = T[r][col];
    for (auto& v : T[r]) v /= p;
    for (std::size_t i = 0; i <= m; ++i)
      if (i != r && T[i][col] != 0.0) {
        const double f = T[i][col];
        for (std::size_t j = 0; j <= n + m; ++j) T[i][j] -= f * T[r][j];
      }
    basis[r] = col;
  };
  auto run = [&](std::size_t ncols) {
    while (true) {
      std::size_t col = ncols;
      for (std::size_t j = 0; j < ncols; ++j)
        if (T[m][j] < -1e-12) {
          col = j;
          break;
        }
      if (col == ncols) return;
      std::size_t r = m;
      double best = 1e300;
      for (std::size_t i = 0; i < m; ++i)
        if (T[i][col] > 1e-12) {
          const double q = T[i][n + m] / T[i][col];
          if (q < best - 1e-15 || (std::abs(q - best) <= 1e-15 && basis[i] < basis[r])) {
            best = q;
            r = i;
          }
        }
      REQUIRE(r < m);
      pivot(r, col);
    }
  };
  // phase 1: minimize the sum of artificials
  for (std::size_t j = 0; j <= n + m; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) s += T[i][j];
    T[m][j] = j >= n && j < n + m ? 0.0 : -s;
  }
  run(n + m);
  REQUIRE(std::abs(T[m][n + m]) < 1e-9);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] >= n)
      for (std::size_t j = 0; j < n; ++j)
        if (std::abs(T[i][j]) > 1e-12) {
          pivot(i, j);
          break;
        }
  // phase 2
  for (std::size_t j = 0; j <= n + m; ++j) T[m][j] = j < n ? c[j] : 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double f = T[m][basis[i]];
    if (f != 0.0)
      for (std::size_t j = 0; j <= n + m; ++j) T[m][j] -= f * T[i][j];
  }
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t j = n; j < n + m; ++j) T[i][j] = i == m ? 0.0 : T[i][j];
  run(n);
  return -T[m][n + m];
}

// Transport cost with graph shortest-path distances (Floyd-Warshall) between
// the positive and negative parts of a - b, the pinned node absorbing the imbalance.
double transport_oracle(const MeasureGrid& g, const std::vector<double>& a, const std::vector<double>& b,
                        int stencil) {
  const int n = int(g.size());
  std::vector<std::vector<double>> D(n, std::vector<double>(n, 1e300));
  for (int u = 0; u < n; ++u) {
    D[u][u] = 0;
    const int i = u % g.nx, j = u / g.nx;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        if ((di == 0 && dj == 0) || (stencil == 4 && di != 0 && dj != 0)) continue;
        const int ii = i + di, jj = j + dj;
        if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) continue;
        D[u][jj * g.nx + ii] = g.h * std::hypot(di, dj);
      }
  }
  for (int k = 0; k < n; ++k)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) D[u][v] = std::min(D[u][v], D[u][k] + D[k][v]);
  std::vector<double> s(n);
  double rest = 0;
  for (int u = 0; u < n; ++u)
    if (std::size_t(u) != g.center) {
      s[u] = (a[u] - b[u]) * g.h * g.h;
      rest += s[u];
    }
  s[g.center] = -rest;
  std::vector<int> src, snk;
  for (int u = 0; u < n; ++u) (s[u] > 0 ? src : snk).push_back(u);
  const std::size_t nv = src.size() * snk.size();
  std::vector<std::vector<double>> A;
  std::vector<double> rhs, cost(nv);
  for (std::size_t p = 0; p < src.size(); ++p) {
    std::vector<double> row(nv, 0.0);
    for (std::size_t q = 0; q < snk.size(); ++q) row[p * snk.size() + q] = 1.0;
    A.push_back(row);
    rhs.push_back(s[src[p]]);
  }
  for (std::size_t q = 0; q + 1 < snk.size(); ++q) {
    std::vector<double> row(nv, 0.0);
    for (std::size_t p = 0; p < src.size(); ++p) row[p * snk.size() + q] = 1.0;
    A.push_back(row);
    rhs.push_back(-s[snk[q]]);
  }
  for (std::size_t p = 0; p < src.size(); ++p)
    for (std::size_t q = 0; q < snk.size(); ++q) cost[p * snk.size() + q] = D[src[p]][snk[q]];
  return simplex_min(A, rhs, cost);
}

}  // namespace

TEST_CASE("identical measures are at distance zero") {
  std::mt19937_64 rng(1);
  const MeasureGrid g = disk_grid(1.0, 0.1);
  const auto a = random_measure(g.size(), rng);
  CHECK(dual_lipschitz(g, a, a) == doctest::Approx(0.0));
}

TEST_CASE("unit point masses at grid distance t") {
  const MeasureGrid g = box_grid(12, 12, 0.25, 0.0, 0.0);
  const double w = 1.0 / (g.h * g.h);
  for (auto [di, dj] : {std::pair{5, 0}, std::pair{0, 3}, std::pair{4, 4}}) {
    std::vector<double> a(g.size(), 0.0), b(g.size(), 0.0);
    a[g.index(2, 2)] = w;
    b[g.index(2 + di, 2 + dj)] = w;
    const double t = g.h * std::hypot(di, dj);
    CHECK(dual_lipschitz(g, a, b, 8) == doctest::Approx(t).epsilon(1e-12));
  }
}

TEST_CASE("4-neighbour LP equals brute-force enumeration on 5x5 grids") {
  std::mt19937_64 rng(11);
  const MeasureGrid g = box_grid(5, 5, 1.0, 0.0, 0.0);
  for (int t = 0; t < 6; ++t) {
    const auto a = random_measure(25, rng), b = random_measure(25, rng);
    std::vector<double> c(25);
    for (int k = 0; k < 25; ++k) c[k] = k == 12 ? 0.0 : a[k] - b[k];
    const LipschitzResult r = dual_lipschitz_lp(g, a, b, 4);
    CHECK(std::abs(r.value - oracle::lipschitz_enumeration_5x5(c)) < 1e-9);
    CHECK(std::abs(r.value - r.dual_value) < 1e-9);
  }
}

TEST_CASE("8-neighbour LP equals an independent transport simplex") {
  std::mt19937_64 rng(12);
  for (auto [nx, ny] : {std::pair{4, 4}, std::pair{5, 5}, std::pair{3, 6}}) {
    MeasureGrid g = box_grid(nx, ny, 0.5, 0.0, 0.0);
    for (int t = 0; t < 3; ++t) {
      const auto a = random_measure(g.size(), rng), b = random_measure(g.size(), rng);
      CHECK(std::abs(dual_lipschitz(g, a, b, 8) - transport_oracle(g, a, b, 8)) < 1e-9);
      CHECK(std::abs(dual_lipschitz(g, a, b, 4) - transport_oracle(g, a, b, 4)) < 1e-9);
    }
  }
}

TEST_CASE("metric axioms on random equal-mass triples") {
  std::mt19937_64 rng(5);
  const MeasureGrid g = disk_grid(1.0, 0.125);
  auto unit = [&] {
    auto v = random_measure(g.size(), rng);
    double m = 0;
    for (std::size_t k = 0; k < v.size(); ++k) m += g.mask[k] ? v[k] : (v[k] = 0.0);
    for (auto& x : v) x /= m * g.h * g.h;
    return v;
  };
  for (int t = 0; t < 5; ++t) {
    const auto a = unit(), b = unit(), c = unit();
    const double ab = dual_lipschitz(g, a, b), ba = dual_lipschitz(g, b, a);
    const double bc = dual_lipschitz(g, b, c), ac = dual_lipschitz(g, a, c);
    CHECK(std::abs(ab - ba) < 1e-9);
    CHECK(ac <= ab + bc + 1e-9);
    CHECK(ab > 0.0);
  }
}

TEST_CASE("distance bounded by diameter times L1 norm") {
  std::mt19937_64 rng(9);
  const double R = 1.5;
  const MeasureGrid g = disk_grid(R, 0.1);
  for (int t = 0; t < 4; ++t) {
    const auto a = random_measure(g.size(), rng), b = random_measure(g.size(), rng);
    double l1 = 0;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (g.mask[k]) l1 += std::abs(a[k] - b[k]) * g.h * g.h;
    CHECK(dual_lipschitz(g, a, b) <= 2 * R * l1 + 1e-12);
  }
}

TEST_CASE("transport guards") {
  const MeasureGrid g = box_grid(4, 4, 1.0, 0.0, 0.0);
  std::vector<double> a(16, 0.0), b(15, 0.0);
  CHECK_THROWS_AS(dual_lipschitz(g, a, b), Error);
  CHECK_THROWS_AS(dual_lipschitz(g, a, a, 6), Error);
  MeasureGrid h = g;
  h.mask[h.center] = 0;
  CHECK_THROWS_AS(dual_lipschitz(h, a, a), Error);
}
