#pragma once

#include <cstdint>
#include <vector>

#include "core/gp.hpp"
#include "core/params.hpp"

namespace vtf {

struct TrappedRun {
  RegimeParams params;
  double box_radius = 0.0;  // half-width of the centered Dirichlet box
  GridSpec grid;
  ComplexField state;
  EnergyBreakdown energy;
  double outside_mass = 0.0;  // mass outside 1.5 L^TF
  int iterations = 0;
  bool converged = false;
};

struct LLLRun {
  RegimeParams params;
  int degree = 0;
  std::vector<cplx> coeffs;
  EnergyBreakdown energy;  // kinetic = 1 exactly
  double tail_weight = 0.0;  // mass at degrees > 0.9 N
  int iterations = 0;
  bool converged = false;
};

/// Default box half-width: max(3 L^TF, 8).
double default_box_radius(const RegimeParams& p);
/// Default Fock-Bargmann degree ceil(4 (L^TF)^2), at least 16.
int default_degree(const RegimeParams& p);
/// Spacing sqrt(pi)/n closest to h, so that a one-flux torus carries an
/// integer grid with exactly this spacing.
double snap_spacing(double h);
/// Centered Dirichlet grid of spacing snap_spacing(h) covering [-R, R]^2.
GridSpec trapped_grid(double box_radius, double h);
/// Lowest eigenvalue of the discretized Landau operator at spacing
/// snap_spacing(h) (one-flux torus); tends to 1 as h -> 0.
double discrete_landau_energy(double h);

/// Exact coefficient-space quartic int |sum c_n phi_n|^4; optional real gradient.
double fb_quartic(const std::vector<cplx>& c, std::vector<cplx>* grad = nullptr);
/// Samples sum c_n phi_n on a grid.
ComplexField fb_field(const GridSpec& g, const std::vector<cplx>& c);

TrappedRun minimize_trapped(const RegimeParams& p, double box_radius, double h, std::uint64_t seed,
                            const ComplexField* warm = nullptr, const GPOptions& opt = {});

LLLRun minimize_lll(const RegimeParams& p, int degree, std::uint64_t seed, int restarts = 4);

struct GapResult {
  double e_gp = 0.0;
  double e_lll = 0.0;
  /// Discretized GP energy of the LLL minimizer sampled on the GP grid; the
  /// variational upper bound for e_gp under the same discretization.
  double e_lll_grid = 0.0;
  double gap_normalized = 0.0;      // (e_lll_grid - e_gp) / sqrt(G (1 - omega^2))
  double gap_raw_normalized = 0.0;  // (e_lll - e_gp) / sqrt(G (1 - omega^2))
  TrappedRun gp;
  LLLRun lll;
};

GapResult gp_lll_gap(const RegimeParams& p, double box_radius, double h, int degree, std::uint64_t seed);

struct DecayProfile {
  std::vector<double> radius;
  std::vector<double> mass_outside;
  double fitted_slope = NAN;  // d log(mass outside r) / dr beyond 1.2 L^TF
  double reference_slope = NAN;  // -sqrt(lambda - 1)
};

DecayProfile decay_profile(const TrappedRun& run);

/// Mass of the field outside the disk of radius r.
double mass_outside(const ComplexField& u, double r);

}  // namespace vtf
