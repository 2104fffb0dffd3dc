#pragma once

#include <array>
#include <vector>

#include "core/grid.hpp"

namespace vtf {

struct VortexOptions {
  double density_floor = 1e-8;  // plaquettes with all |u|^2 below floor * max|u|^2 are skipped
  double sigma = 0.5;           // Gaussian width of the smeared check; <= 0 disables it
};

struct VortexSet {
  std::vector<std::array<double, 2>> positions;
  std::vector<int> windings;
  int unresolved = 0;     // plaquettes skipped by the density floor
  bool perturbed = false; // a grid node held an exact zero and the field was shifted
  bool smear_checked = false;
  double smear_distance = 0.0;   // dual-Lipschitz distance of the two smeared densities
  double smear_tolerance = 0.0;  // h * (1 + number of vortices)
  int winding_sum() const;
};

/// Phase circulation of u around every grid plaquette (twisted across the
/// seams of magnetic-periodic grids), plus the smeared comparison of the
/// vortex measure with (1/4 pi)(4 + Laplacian log|u|^2).
VortexSet vortex_census(const ComplexField& u, const VortexOptions& opt = {});

}  // namespace vtf
