#include "core/grid.hpp"

#include <cmath>
#include <numbers>

#include "core/error.hpp"

namespace vtf {

std::string to_string(Boundary bc) {
  switch (bc) {
    case Boundary::dirichlet: return "dirichlet";
    case Boundary::neumann: return "neumann";
    case Boundary::periodic: return "magnetic-periodic";
  }
  return "?";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "dirichlet") return Boundary::dirichlet;
  if (s == "neumann") return Boundary::neumann;
  if (s == "magnetic-periodic" || s == "periodic") return Boundary::periodic;
  fail(Errc::invalid_argument, "unknown boundary condition '" + s + "'");
}

bool GridSpec::on_boundary(int i, int j) const {
  if (bc == Boundary::periodic) return false;
  return i == 0 || j == 0 || i == nx || j == ny;
}

double GridSpec::flux() const { return lx * ly / std::numbers::pi; }

void validate(const GridSpec& g) {
  require(g.nx >= 8 && g.ny >= 8, Errc::grid, "grid needs at least 8 cells per axis");
  require(std::isfinite(g.lx) && std::isfinite(g.ly) && g.lx > 0 && g.ly > 0, Errc::grid,
          "box sides must be positive and finite");
  const double hx = g.lx / g.nx, hy = g.ly / g.ny;
  if (g.bc == Boundary::periodic)
    require(hx / hy >= 0.8 && hx / hy <= 1.25, Errc::grid, "grid cells too elongated");
  else
    require(std::abs(hx - hy) <= 1e-12 * hx, Errc::grid, "grid cells are not square");
  if (g.bc == Boundary::periodic) {
    const double f = g.flux();
    require(f >= 1.0 - 1e-9 && std::abs(f - std::round(f)) <= 1e-9, Errc::flux,
            "magnetic-periodic box needs lx*ly in pi*N, got lx*ly/pi = " + std::to_string(f));
  }
}

GridSpec square_grid(int n, double l, Boundary bc, Origin origin) {
  GridSpec g{n, n, l, l, origin, bc};
  validate(g);
  return g;
}

std::vector<double> quadrature_weights(const GridSpec& g) {
  const double h2 = g.hx() * g.hy();
  std::vector<double> w(g.size(), h2);
  if (g.bc == Boundary::periodic) return w;
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i) {
      double f = h2;
      if (i == 0 || i == g.nx) f *= 0.5;
      if (j == 0 || j == g.ny) f *= 0.5;
      w[g.index(i, j)] = f;
    }
  return w;
}

ComplexField make_field(const GridSpec& g, double mass_target) {
  validate(g);
  return ComplexField{g, std::vector<cplx>(g.size(), cplx(0.0)), mass_target};
}

void validate(const ComplexField& u) {
  validate(u.grid);
  require(u.values.size() == u.grid.size(), Errc::grid, "field size does not match grid");
  for (const cplx& z : u.values)
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), Errc::numeric, "field has non-finite values");
  require(u.mass_target >= 0.0, Errc::invalid_argument, "negative mass target");
}

double mass(const GridSpec& g, const std::vector<cplx>& v) {
  const auto w = quadrature_weights(g);
  double m = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) m += w[k] * std::norm(v[k]);
  return m;
}

double mass(const ComplexField& u) { return mass(u.grid, u.values); }

cplx inner(const GridSpec& g, const std::vector<cplx>& a, const std::vector<cplx>& b) {
  const auto w = quadrature_weights(g);
  cplx s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += w[k] * std::conj(a[k]) * b[k];
  return s;
}

double sup_abs(const ComplexField& u) {
  double s = 0.0;
  for (const cplx& z : u.values) s = std::max(s, std::abs(z));
  return s;
}

void normalize(ComplexField& u, double target) {
  const double m = mass(u);
  require(m > 0.0, Errc::numeric, "cannot normalize a zero field");
  const double f = std::sqrt(target / m);
  for (cplx& z : u.values) z *= f;
  u.mass_target = target;
}

}  // namespace vtf
