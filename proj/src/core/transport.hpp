#pragma once

#include <cstddef>
#include <vector>

namespace vtf {

/// Masked uniform grid graph. Nodes are the unmasked points of an nx x ny
/// lattice with spacing h; edges join unmasked 4- or 8-neighbours with their
/// Euclidean length as cost.
struct MeasureGrid {
  int nx = 0;
  int ny = 0;
  double h = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  std::vector<char> mask;  // nx*ny, row-major, 1 = inside
  std::size_t center = 0;  // lattice index of the pinned node

  double x(int i) const { return x0 + i * h; }
  double y(int j) const { return y0 + j * h; }
  std::size_t index(int i, int j) const { return std::size_t(j) * nx + i; }
  std::size_t size() const { return std::size_t(nx) * ny; }
};

/// Lattice of spacing close to h covering the closed disk of radius r around
/// the origin; the origin is a lattice point and the pinned node.
MeasureGrid disk_grid(double radius, double h);
/// Full rectangular lattice; the pinned node is the one nearest its middle.
MeasureGrid box_grid(int nx, int ny, double h, double x0, double y0);

struct LipschitzResult {
  double value = 0.0;       // min-cost flow (primal)
  double dual_value = 0.0;  // sum phi (a - b) h^2 at the certified potential
  std::vector<double> phi;  // optimal test function on lattice nodes (0 off-mask)
  int augmentations = 0;
};

/// sup { sum_i phi_i (a_i - b_i) h^2 : |phi_u - phi_v| <= |x_u - x_v| on graph
/// edges, phi(center) = 0 }, with a, b densities on lattice nodes (ignored
/// off-mask). Solved as an uncapacitated min-cost flow on the grid graph in
/// which the pinned node absorbs any mass imbalance.
LipschitzResult dual_lipschitz_lp(const MeasureGrid& g, const std::vector<double>& a, const std::vector<double>& b,
                                  int stencil = 8);

double dual_lipschitz(const MeasureGrid& g, const std::vector<double>& a, const std::vector<double>& b,
                      int stencil = 8);

}  // namespace vtf
