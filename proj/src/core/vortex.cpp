#include "core/vortex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/transport.hpp"

namespace vtf {

int VortexSet::winding_sum() const {
  int s = 0;
  for (int w : windings) s += w;
  return s;
}

namespace {

constexpr double kPi = std::numbers::pi;

// Node value at lattice position (i, j), 0 <= i <= nodes_x, 0 <= j <= nodes_y;
// periodic grids extend across the seams by the magnetic twists.
cplx extended(const GridSpec& g, const std::vector<cplx>& v, int i, int j) {
  if (g.bc != Boundary::periodic) return v[g.index(i, j)];
  const int ii = i % g.nx, jj = j % g.ny;
  double phase = 0.0;
  if (i >= g.nx) phase += g.lx * g.y(j);
  if (j >= g.ny) phase -= g.ly * g.x(ii);
  return std::polar(1.0, phase) * v[g.index(ii, jj)];
}

double wrapped(double a) { return std::remainder(a, 2 * kPi); }

// Phase increment along the lattice edge p -> q (q = p + e1 or p + e2). Edges
// lying on the far seams are evaluated as the magnetic translate of their
// copy on the near seams, so both plaquettes sharing an edge see the same
// wrapped increment even when a zero sits on the edge.
double edge_phase(const GridSpec& g, const std::vector<cplx>& v, int i0, int j0, int i1, int j1) {
  int sx = 0, sy = 0;
  if (g.bc == Boundary::periodic) {
    sx = i0 >= g.nx ? 1 : 0;
    sy = j0 >= g.ny ? 1 : 0;
  }
  const cplx a = extended(g, v, i0 - sx * g.nx, j0 - sy * g.ny);
  const cplx b = extended(g, v, i1 - sx * g.nx, j1 - sy * g.ny);
  return wrapped(std::arg(b) - std::arg(a)) + sx * g.lx * (g.y(j1) - g.y(j0)) - sy * g.ly * (g.x(i1) - g.x(i0));
}

struct Census {
  std::vector<std::array<double, 2>> pos;
  std::vector<int> wind;
  int unresolved = 0;
  bool exact_zero = false;
};

Census count(const GridSpec& g, const std::vector<cplx>& v, double floor_abs) {
  Census c;
  const bool per = g.bc == Boundary::periodic;
  const int px = per ? g.nx : g.nodes_x() - 1, py = per ? g.ny : g.nodes_y() - 1;
  for (int j = 0; j < py; ++j)
    for (int i = 0; i < px; ++i) {
      if (g.bc == Boundary::dirichlet && (i == 0 || j == 0 || i + 1 == px || j + 1 == py)) {
        ++c.unresolved;  // touches the imposed zeros
        continue;
      }
      const cplx q[4] = {extended(g, v, i, j), extended(g, v, i + 1, j), extended(g, v, i + 1, j + 1),
                         extended(g, v, i, j + 1)};
      double top = 0.0;
      for (const cplx& z : q) {
        if (z == cplx(0.0)) c.exact_zero = true;
        top = std::max(top, std::norm(z));
      }
      if (c.exact_zero) return c;
      if (top < floor_abs) {
        ++c.unresolved;
        continue;
      }
      const double circ = edge_phase(g, v, i, j, i + 1, j) + edge_phase(g, v, i + 1, j, i + 1, j + 1) -
                          edge_phase(g, v, i, j + 1, i + 1, j + 1) - edge_phase(g, v, i, j, i, j + 1);
      const int w = int(std::lround(circ / (2 * kPi)));
      if (w != 0) {
        c.pos.push_back({g.x(i) + 0.5 * g.hx(), g.y(j) + 0.5 * g.hy()});
        c.wind.push_back(w);
      }
    }
  return c;
}

// Compares sum_j w_j g_s(x - a_j) with (1/4 pi)(4 + (Laplacian g_s) * log|u|^2)
// on a sample lattice of spacing about s/2 restricted to points whose 5 s
// window is resolved and inside the grid.
void smear_check(const GridSpec& g, const std::vector<cplx>& v, double floor_abs, double s, VortexSet& out) {
  const bool per = g.bc == Boundary::periodic;
  const double hx = g.hx(), hy = g.hy();
  const int rx = int(std::ceil(5 * s / hx)), ry = int(std::ceil(5 * s / hy));
  const int nx = g.nodes_x(), ny = g.nodes_y();
  if (!per && (2 * rx + 2 >= nx || 2 * ry + 2 >= ny)) return;
  const auto w = quadrature_weights(g);
  std::vector<double> logd(g.size());
  std::vector<char> low(g.size(), 0);
  // cell mean of log(s^2 + t^2) over [-1, 1]^2
  const double cell_log = std::log(2.0) - 3.0 + 0.5 * kPi;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = g.index(i, j);
      const double n2 = std::norm(v[k]);
      const bool inner = per || (i > 0 && j > 0 && i + 1 < nx && j + 1 < ny);
      double a2 = 0.0;
      if (inner) {
        auto at = [&](int ii, int jj) { return std::norm(v[g.index((ii + nx) % nx, (jj + ny) % ny)]); };
        a2 = 0.25 * ((at(i + 1, j) + at(i - 1, j)) / (hx * hx) + (at(i, j + 1) + at(i, j - 1)) / (hy * hy));
      }
      if (a2 > 0.0 && n2 < 1e-6 * a2 * hx * hy) {
        // simple zero on the node: use the cell mean of log(a^2 r^2)
        logd[k] = std::log(a2 * hx * hy / 4) + cell_log;
      } else {
        logd[k] = std::log(std::max(n2, 1e-300));
        low[k] = n2 < floor_abs;
      }
    }
  const double s2 = s * s;
  auto gauss = [&](double r2) { return std::exp(-r2 / (2 * s2)) / (2 * kPi * s2); };
  auto lap_gauss = [&](double r2) { return gauss(r2) * (r2 / (s2 * s2) - 2 / s2); };

  const int step = std::max(1, int(std::lround(0.5 * s / std::min(hx, hy))));
  const double sh = step * std::min(hx, hy);
  std::vector<int> si, sj;
  for (int j = per ? 0 : ry + 1; j < (per ? ny : ny - ry - 1); j += step) sj.push_back(j);
  for (int i = per ? 0 : rx + 1; i < (per ? nx : nx - rx - 1); i += step) si.push_back(i);
  if (si.empty() || sj.empty()) return;
  const int mx = int(si.size()), my = int(sj.size());
  MeasureGrid mg = box_grid(mx, my, sh, 0.0, 0.0);
  std::vector<double> a(mg.size(), 0.0), b(mg.size(), 0.0);
  std::fill(mg.mask.begin(), mg.mask.end(), 0);
  for (int q = 0; q < my; ++q)
    for (int p = 0; p < mx; ++p) {
      const int i0 = si[p], j0 = sj[q];
      const double x = g.x(i0), y = g.y(j0);
      bool ok = true;
      double conv = 0.0;
      for (int dj = -ry; dj <= ry && ok; ++dj)
        for (int di = -rx; di <= rx; ++di) {
          int i = i0 + di, j = j0 + dj;
          if (per) {
            i = ((i % nx) + nx) % nx;
            j = ((j % ny) + ny) % ny;
          }
          const std::size_t k = g.index(i, j);
          if (low[k]) {
            ok = false;
            break;
          }
          const double ddx = di * hx, ddy = dj * hy;
          conv += w[k] * lap_gauss(ddx * ddx + ddy * ddy) * logd[k];
        }
      if (!ok) continue;
      double mu = 0.0;
      const int kx = per ? int(std::ceil(5 * s / g.lx)) + 1 : 0, ky = per ? int(std::ceil(5 * s / g.ly)) + 1 : 0;
      for (std::size_t n = 0; n < out.positions.size(); ++n)
        for (int qy = -ky; qy <= ky; ++qy)
          for (int qx = -kx; qx <= kx; ++qx) {
            const double dx = x - out.positions[n][0] + qx * g.lx, dy = y - out.positions[n][1] + qy * g.ly;
            mu += out.windings[n] * gauss(dx * dx + dy * dy);
          }
      const std::size_t m = mg.index(p, q);
      mg.mask[m] = 1;
      a[m] = mu;
      b[m] = (4.0 + conv) / (4 * kPi);
    }
  // pin the unmasked node closest to the lattice middle
  double best = 1e300;
  for (std::size_t m = 0; m < mg.size(); ++m)
    if (mg.mask[m]) {
      const double dx = double(m % mx) - 0.5 * (mx - 1), dy = double(m / mx) - 0.5 * (my - 1);
      if (dx * dx + dy * dy < best) {
        best = dx * dx + dy * dy;
        mg.center = m;
      }
    }
  if (best == 1e300) return;
  out.smear_distance = dual_lipschitz(mg, a, b, 8);
  out.smear_tolerance = std::max(hx, hy) * (1.0 + double(out.positions.size()));
  out.smear_checked = true;
}

}  // namespace

VortexSet vortex_census(const ComplexField& u, const VortexOptions& opt) {
  validate(u);
  const GridSpec& g = u.grid;
  double top = 0.0;
  for (const cplx& z : u.values) top = std::max(top, std::norm(z));
  require(top > 0.0, Errc::invalid_argument, "vortex census of the zero field");
  const double floor_abs = opt.density_floor * top;

  VortexSet out;
  std::vector<cplx> v = u.values;
  Census c = count(g, v, floor_abs);
  if (c.exact_zero) {
    // shift by a tiny constant so that no zero sits on a node
    out.perturbed = true;
    const double eps = 1e-9 * std::sqrt(top);
    for (std::size_t k = 0; k < v.size(); ++k)
      if (g.bc == Boundary::periodic || !g.on_boundary(int(k % g.nodes_x()), int(k / g.nodes_x())))
        v[k] += eps;
    c = count(g, v, floor_abs);
    require(!c.exact_zero, Errc::numeric, "field vanishes on grid nodes after perturbation");
  }
  out.positions = std::move(c.pos);
  out.windings = std::move(c.wind);
  out.unresolved = c.unresolved;
  if (opt.sigma > 0.0) smear_check(g, v, floor_abs, opt.sigma, out);
  return out;
}

}  // namespace vtf
