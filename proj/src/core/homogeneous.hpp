#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/gp.hpp"
#include "core/torus.hpp"

namespace vtf {

struct HomogeneousRun {
  Boundary bc = Boundary::periodic;
  double l1 = 0.0;
  double l2 = 0.0;
  int d = 0;  // flux quanta through the box (integer for periodic runs)
  double mass = 0.0;
  double g = 0.0;
  double density = 0.0;  // mass / area
  EnergyBreakdown energy;
  ComplexField state;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes the homogeneous GP functional on grid.lx x grid.ly with grid.bc.
/// Periodic runs start from the quartic minimizer of the torus LLL unless a
/// warm start is given; bounded boxes start from random noise.
HomogeneousRun minimize_homogeneous(const GridSpec& grid, double mass, double g, std::uint64_t seed,
                                    const ComplexField* warm = nullptr, const GPOptions& opt = {});

/// Copies a magnetic-periodic field onto the Neumann grid of the same box
/// (twisted copies on the closing edges) or onto the Dirichlet grid (requires
/// vanishing values on the seam rows).
ComplexField periodic_to_box(const ComplexField& u, Boundary bc);

struct SupnormCheck {
  double sup = 0.0;
  double bound_ratio = 0.0;  // sup|u| / sqrt(rho)
};
SupnormCheck supnorm_check(const HomogeneousRun& run);

/// ||u - Pi_L u||^2 / ||u||^2.
double lll_fraction(const HomogeneousRun& run, const LLLBasis& basis);

struct ScalingRow {
  double rho = 0.0;
  double energy = 0.0;
  double kinetic = 0.0;
  double interaction = 0.0;
  double supnorm = NAN;
  double r = NAN;           // (E - lambda0 rho L^2) / (g rho^2 L^2 / 2)
  double r_continuum = NAN; // same with the continuum Landau energy 1
  double lambda0 = 1.0;     // lowest discrete Landau eigenvalue on the grid
  double multiplier = NAN;
  double supnorm_ratio = NAN;
  double lll_fraction = NAN;
  int iterations = 0;
  bool converged = false;
  std::string error;
};

struct ScalingTable {
  TorusSpec torus;
  double g = 0.0;
  std::vector<ScalingRow> rows;
  double r_extrapolated = NAN;  // intercept of a linear fit of r against sqrt(rho)
};

ScalingTable scaling_law_sweep(const TorusSpec& t, double g, const std::vector<double>& rho_list, int n1,
                               std::uint64_t seed);

}  // namespace vtf
