#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace vtf {

using cplx = std::complex<double>;

enum class Boundary { dirichlet, neumann, periodic };
enum class Origin { centered, corner };

std::string to_string(Boundary bc);
Boundary boundary_from_string(const std::string& s);

/// Uniform grid. nx, ny count cells; periodic grids carry nx*ny nodes,
/// bounded boxes carry (nx+1)*(ny+1) nodes including the boundary. Cells are
/// square except on tori whose aspect ratio admits no integer square grid.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double lx = 0.0;
  double ly = 0.0;
  Origin origin = Origin::centered;
  Boundary bc = Boundary::periodic;

  double h() const { return lx / nx; }
  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
  int nodes_x() const { return bc == Boundary::periodic ? nx : nx + 1; }
  int nodes_y() const { return bc == Boundary::periodic ? ny : ny + 1; }
  std::size_t size() const { return std::size_t(nodes_x()) * std::size_t(nodes_y()); }
  double x0() const { return origin == Origin::centered ? -0.5 * lx : 0.0; }
  double y0() const { return origin == Origin::centered ? -0.5 * ly : 0.0; }
  double x(int i) const { return x0() + i * h(); }
  double y(int j) const { return y0() + j * hy(); }
  std::size_t index(int i, int j) const { return std::size_t(j) * nodes_x() + i; }
  bool on_boundary(int i, int j) const;
  /// Flux quanta lx*ly/pi (integer for magnetic-periodic grids).
  double flux() const;
};

/// Throws on nx/ny < 8, non-square cells (periodic grids tolerate a cell
/// aspect within [0.8, 1.25]), or non-quantized periodic flux.
void validate(const GridSpec& g);

/// Builds a square-cell grid of n cells per side on an l x l box.
GridSpec square_grid(int n, double l, Boundary bc, Origin origin = Origin::centered);

/// Quadrature weight per node (hx*hy times trapezoid factors).
std::vector<double> quadrature_weights(const GridSpec& g);

struct ComplexField {
  GridSpec grid;
  std::vector<cplx> values;
  double mass_target = 0.0;
};

ComplexField make_field(const GridSpec& g, double mass_target = 0.0);
void validate(const ComplexField& u);

double mass(const ComplexField& u);
double mass(const GridSpec& g, const std::vector<cplx>& v);
cplx inner(const GridSpec& g, const std::vector<cplx>& a, const std::vector<cplx>& b);
double sup_abs(const ComplexField& u);
/// Rescales u so its quadrature mass equals target.
void normalize(ComplexField& u, double target);

template <class F>
ComplexField sample(const GridSpec& g, F&& f, double mass_target = 0.0) {
  ComplexField u = make_field(g, mass_target);
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i) u.values[g.index(i, j)] = f(g.x(i), g.y(j));
  return u;
}

}  // namespace vtf
