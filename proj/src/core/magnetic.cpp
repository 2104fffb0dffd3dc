#include "core/magnetic.hpp"

#include <cmath>

#include "core/error.hpp"

namespace vtf {

std::vector<Link> peierls_links(const GridSpec& g) {
  validate(g);
  const double hx = g.hx(), hy = g.hy();
  const double rx = hy / hx, ry = hx / hy;
  const int mx = g.nodes_x(), my = g.nodes_y();
  const bool per = g.bc == Boundary::periodic;
  std::vector<Link> links;
  links.reserve(2 * g.size());
  for (int j = 0; j < my; ++j)
    for (int i = 0; i < mx; ++i) {
      const double x = g.x(i), y = g.y(j);
      // x-link towards i+1
      if (i + 1 < mx) {
        const double w = (!per && (j == 0 || j == g.ny)) ? 0.5 : 1.0;
        links.push_back({g.index(i, j), g.index(i + 1, j), std::polar(1.0, y * hx), w * rx});
      } else if (per) {
        links.push_back({g.index(i, j), g.index(0, j), std::polar(1.0, y * hx + g.lx * y), rx});
      }
      // y-link towards j+1
      if (j + 1 < my) {
        const double w = (!per && (i == 0 || i == g.nx)) ? 0.5 : 1.0;
        links.push_back({g.index(i, j), g.index(i, j + 1), std::polar(1.0, -x * hy), w * ry});
      } else if (per) {
        links.push_back({g.index(i, j), g.index(i, 0), std::polar(1.0, -x * hy - g.ly * x), ry});
      }
    }
  return links;
}

VecC MagneticOperator::restrict(const std::vector<cplx>& full) const {
  VecC v(n());
  for (long k = 0; k < n(); ++k) v[k] = full[node_of_free[k]];
  return v;
}

std::vector<cplx> MagneticOperator::extend(const VecC& v) const {
  std::vector<cplx> full(grid.size(), cplx(0.0));
  for (long k = 0; k < n(); ++k) full[node_of_free[k]] = v[k];
  return full;
}

VecR MagneticOperator::x() const {
  VecR r(n());
  for (long k = 0; k < n(); ++k) r[k] = grid.x(int(node_of_free[k] % grid.nodes_x()));
  return r;
}

VecR MagneticOperator::y() const {
  VecR r(n());
  for (long k = 0; k < n(); ++k) r[k] = grid.y(int(node_of_free[k] / grid.nodes_x()));
  return r;
}

MagneticOperator build_operator(const GridSpec& g) {
  validate(g);
  MagneticOperator op;
  op.grid = g;
  op.free_of_node.assign(g.size(), -1);
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i) {
      if (g.bc == Boundary::dirichlet && g.on_boundary(i, j)) continue;
      op.free_of_node[g.index(i, j)] = long(op.node_of_free.size());
      op.node_of_free.push_back(g.index(i, j));
    }
  const auto w = quadrature_weights(g);
  op.m.resize(op.n());
  for (long k = 0; k < op.n(); ++k) op.m[k] = w[op.node_of_free[k]];

  std::vector<Eigen::Triplet<cplx>> t;
  for (const Link& l : peierls_links(g)) {
    const long a = op.free_of_node[l.a], b = op.free_of_node[l.b];
    const double c = 0.5 * l.w;
    if (a >= 0) t.emplace_back(a, a, c);
    if (b >= 0) t.emplace_back(b, b, c);
    if (a >= 0 && b >= 0) {
      t.emplace_back(a, b, -c * l.U);
      t.emplace_back(b, a, -c * std::conj(l.U));
    }
  }
  op.S.resize(op.n(), op.n());
  op.S.setFromTriplets(t.begin(), t.end());
  op.S.makeCompressed();
  return op;
}

std::array<ComplexField, 2> magnetic_gradient(const ComplexField& u) {
  validate(u);
  const GridSpec& g = u.grid;
  const double hx = g.hx(), hy = g.hy();
  const int mx = g.nodes_x(), my = g.nodes_y();
  const bool per = g.bc == Boundary::periodic;
  std::array<ComplexField, 2> out{make_field(g), make_field(g)};
  const cplx mi(0.0, -1.0);
  // Transported neighbour values: U(x -> x +- h e) u(x +- h e), with twists across the seam.
  auto along_x = [&](int i, int j, int s, bool& ok) -> cplx {
    const double y = g.y(j);
    int k = i + s;
    cplx twist = 1.0;
    if (k < 0 || k >= mx) {
      if (!per) { ok = false; return 0.0; }
      if (k >= mx) { k -= mx; twist = std::polar(1.0, g.lx * y); }
      else { k += mx; twist = std::polar(1.0, -g.lx * y); }
    }
    ok = true;
    return std::polar(1.0, s * y * hx) * twist * u.values[g.index(k, j)];
  };
  auto along_y = [&](int i, int j, int s, bool& ok) -> cplx {
    const double x = g.x(i);
    int k = j + s;
    cplx twist = 1.0;
    if (k < 0 || k >= my) {
      if (!per) { ok = false; return 0.0; }
      if (k >= my) { k -= my; twist = std::polar(1.0, -g.ly * x); }
      else { k += my; twist = std::polar(1.0, g.ly * x); }
    }
    ok = true;
    return std::polar(1.0, -s * x * hy) * twist * u.values[g.index(i, k)];
  };
  for (int j = 0; j < my; ++j)
    for (int i = 0; i < mx; ++i) {
      const cplx c = u.values[g.index(i, j)];
      bool okp, okm;
      cplx p = along_x(i, j, +1, okp), m = along_x(i, j, -1, okm);
      cplx dx = okp && okm ? (p - m) / (2 * hx) : okp ? (p - c) / hx : (c - m) / hx;
      p = along_y(i, j, +1, okp);
      m = along_y(i, j, -1, okm);
      cplx dy = okp && okm ? (p - m) / (2 * hy) : okp ? (p - c) / hy : (c - m) / hy;
      out[0].values[g.index(i, j)] = mi * dx;
      out[1].values[g.index(i, j)] = mi * dy;
    }
  return out;
}

std::vector<double> gauge_phase(const GridSpec& g, double cx, double cy) {
  validate(g);
  std::vector<double> phi(g.size());
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i) phi[g.index(i, j)] = -cy * g.x(i) + cx * g.y(j);
  return phi;
}

std::array<std::vector<double>, 2> real_gradient(const GridSpec& g, const std::vector<double>& f) {
  const int mx = g.nodes_x(), my = g.nodes_y();
  const double hx = g.hx(), hy = g.hy();
  std::array<std::vector<double>, 2> d{std::vector<double>(g.size()), std::vector<double>(g.size())};
  for (int j = 0; j < my; ++j)
    for (int i = 0; i < mx; ++i) {
      auto at = [&](int a, int b) { return f[g.index(a, b)]; };
      d[0][g.index(i, j)] = i == 0        ? (at(1, j) - at(0, j)) / hx
                            : i == mx - 1 ? (at(i, j) - at(i - 1, j)) / hx
                                          : (at(i + 1, j) - at(i - 1, j)) / (2 * hx);
      d[1][g.index(i, j)] = j == 0        ? (at(i, 1) - at(i, 0)) / hy
                            : j == my - 1 ? (at(i, j) - at(i, j - 1)) / hy
                                          : (at(i, j + 1) - at(i, j - 1)) / (2 * hy);
    }
  return d;
}

double kinetic_energy(const ComplexField& u) {
  double k = 0.0;
  const bool dir = u.grid.bc == Boundary::dirichlet;
  const GridSpec& g = u.grid;
  auto val = [&](std::size_t n) {
    if (dir) {
      const int i = int(n % g.nodes_x()), j = int(n / g.nodes_x());
      if (g.on_boundary(i, j)) return cplx(0.0);
    }
    return u.values[n];
  };
  for (const Link& l : peierls_links(g)) k += 0.5 * l.w * std::norm(l.U * val(l.b) - val(l.a));
  return k;
}

EnergyBreakdown energy_terms(const ComplexField& u, double g, double trap_coeff) {
  validate(u);
  const GridSpec& gr = u.grid;
  const auto w = quadrature_weights(gr);
  const bool dir = gr.bc == Boundary::dirichlet;
  EnergyBreakdown e;
  e.kinetic = kinetic_energy(u);
  for (int j = 0; j < gr.nodes_y(); ++j)
    for (int i = 0; i < gr.nodes_x(); ++i) {
      if (dir && gr.on_boundary(i, j)) continue;
      const std::size_t n = gr.index(i, j);
      const double r = std::norm(u.values[n]);
      e.interaction += 0.5 * g * w[n] * r * r;
      if (trap_coeff != 0.0) {
        const double x = gr.x(i), y = gr.y(j);
        e.trap += trap_coeff * w[n] * (x * x + y * y) * r;
      }
    }
  e.total = e.kinetic + e.interaction + e.trap;
  require(std::isfinite(e.total), Errc::numeric, "energy quadrature produced a non-finite value");
  return e;
}

EnergyBreakdown energy(const ComplexField& u, const RegimeParams& p, bool include_trap) {
  validate(p);
  return energy_terms(u, p.g, include_trap ? p.trap_coeff() : 0.0);
}

}  // namespace vtf
