#pragma once

#include <array>
#include <optional>
#include <vector>

#include "core/grid.hpp"
#include "core/tf.hpp"
#include "core/transport.hpp"
#include "core/trapped.hpp"

namespace vtf {

struct TilingSpec {
  double side = 0.0;
  double eta = NAN;  // NAN when the side was given directly
  std::vector<std::array<int, 2>> index;       // tile (i, j) is centred at (i L, j L)
  std::vector<std::array<double, 2>> centers;
  bool eta_admissible = true;
};

/// Open interval (max{(1+2 delta)/6, 1-delta}, (1+delta)/4) of admissible eta.
std::array<double, 2> eta_interval(double delta);
double default_eta(double delta);

/// Tiles of side (1 - omega^2)^(-eta) whose closed square meets the TF disk.
/// eta defaults to the midpoint of eta_interval; the params need delta then.
TilingSpec make_tiling(const TFProfile& tf, std::optional<double> eta = std::nullopt);
/// Tiles of the given side meeting the closed disk of the given radius.
TilingSpec make_tiling(double side, double support_radius);

struct CoarseDensity {
  TilingSpec tiling;
  std::vector<double> values;  // tile averages of |u|^2
  double covered_mass = 0.0;   // sum values * L^2
  double total_mass = 0.0;     // quadrature mass of the whole field
};

/// Tile averages; each node goes to the tile containing it (half-open tiles),
/// so covered mass is an exact partial sum of the quadrature mass.
CoarseDensity coarse_grain(const ComplexField& u, const TilingSpec& tiling);

struct L2Distance {
  double value = 0.0;
  double times_ltf = 0.0;  // value * L^TF
};

/// L2 distance between the piecewise constant coarse density (zero outside the
/// tiles) and the TF density, by Gauss sub-quadrature on every tile.
L2Distance l2_distance(const CoarseDensity& cd, const TFProfile& tf);

/// Density on a disk lattice in rescaled coordinates y = x / S, as rho(S y) S^2.
struct RescaledDensity {
  MeasureGrid grid;
  std::vector<double> rho;
};

/// Masses of |u|^2 deposited bilinearly onto the disk lattice.
RescaledDensity rescale_density(const ComplexField& u, double scale, double radius, double h);
/// Same deposit for the TF density, integrated by an 8 x 8 midpoint rule per cell.
RescaledDensity rescale_density(const TFProfile& tf, double scale, double radius, double h);

struct MetricReport {
  double l2_distance = 0.0;
  double l2_times_ltf = 0.0;
  double dual_lipschitz = 0.0;
  double energy_ratio = 0.0;      // (E - eps_L) / E^TF
  double energy_ratio_raw = 0.0;  // (E - 1) / E^TF
  double scale = 0.0;             // ((1 - omega^2) / G)^(-1/4)
  double covered_mass = 0.0;
};

struct LDAOptions {
  double radius_factor = 1.5;  // comparison disk radius in units of the unit TF radius
  double bin = 0.05;           // rescaled lattice spacing
  int stencil = 8;
  double lll_spacing = 0.1;    // sampling spacing for LLL fields
};

/// Metrics for a single density. landau is the lowest kinetic level of the
/// discretization used to produce energy (1 in the continuum).
MetricReport metric_report(const ComplexField& u, double energy, double landau, const TFProfile& tf,
                           const TilingSpec& tiling, const LDAOptions& opt = {});

/// Samples an LLL run on a centred grid wide enough for the comparisons.
ComplexField lll_field(const LLLRun& run, const TFProfile& tf, const LDAOptions& opt = {});

struct LDAReport {
  TFProfile tf;
  TilingSpec tiling;
  MetricReport gp;
  MetricReport lll;
  double e_gp = 0.0;
  double e_lll = 0.0;
  double gap_raw_normalized = 0.0;  // (E_lll - E_gp) / sqrt(G (1 - omega^2))
  int n_vortices = 0;           // census of the GP state
};

LDAReport lda_report(const TrappedRun& gp, const LLLRun& lll, const TFProfile& tf, const TilingSpec& tiling,
                     const LDAOptions& opt = {});

}  // namespace vtf
