#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/torus.hpp"

namespace vtf {

struct AbrikosovEstimate {
  TorusSpec torus;
  double ratio = NAN;
  std::vector<cplx> coefficients;  // orthonormal-basis coefficients, unit norm
  int restarts = 0;
  bool converged = false;
};

enum class LatticeType { square, hexagonal };

/// beta = |K| int|u|^4 / (int|u|^2)^2 for u = sum c_l phi_l.
double quartic_ratio(const LLLBasis& b, const std::vector<cplx>& c);

AbrikosovEstimate minimize_quartic(const LLLBasis& b, int restarts = 64, std::uint64_t seed = 1);

/// Coefficients (orthonormal basis) of the lattice state; throws when the
/// torus cannot host the lattice.
std::vector<cplx> lattice_trial(const LLLBasis& b, LatticeType type);
bool lattice_compatible(const TorusSpec& t, LatticeType type);

/// Default periodic grid for quartic evaluation (spacing <= 0.2).
GridSpec abrikosov_grid(const TorusSpec& t);

struct FluxRow {
  TorusSpec torus;
  double beta_min = NAN;
  double beta_square = NAN;
  double beta_hex = NAN;
  int restarts = 0;
  bool converged = false;
};

std::vector<FluxRow> eab_vs_flux(const std::vector<int>& d_list, double aspect, std::uint64_t seed,
                                 int restarts = 64);

}  // namespace vtf
