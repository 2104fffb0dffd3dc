#pragma once

#include <Eigen/Sparse>
#include <array>
#include <vector>

#include "core/grid.hpp"
#include "core/params.hpp"

namespace vtf {

/// One lattice link: kinetic contribution 0.5 * w * |U u[b] - u[a]|^2.
struct Link {
  std::size_t a;
  std::size_t b;
  cplx U;
  double w;
};

/// Peierls links for A = x^perp, including twisted wraparound links on
/// magnetic-periodic grids.
std::vector<Link> peierls_links(const GridSpec& g);

using SpMat = Eigen::SparseMatrix<cplx>;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;

/// Discrete Landau operator restricted to free nodes (all nodes except the
/// Dirichlet boundary). Kinetic energy is v^* S v, mass is v^* diag(m) v.
struct MagneticOperator {
  GridSpec grid;
  std::vector<long> free_of_node;  // -1 for fixed nodes
  std::vector<std::size_t> node_of_free;
  SpMat S;
  VecR m;

  long n() const { return long(node_of_free.size()); }
  VecC restrict(const std::vector<cplx>& full) const;
  std::vector<cplx> extend(const VecC& v) const;
  /// Positions of free nodes.
  VecR x() const;
  VecR y() const;
};

MagneticOperator build_operator(const GridSpec& g);

/// Components of (-i grad - x^perp) u by centered covariant differences,
/// one-sided at bounded-box edges.
std::array<ComplexField, 2> magnetic_gradient(const ComplexField& u);

/// phi(x) = center^perp . x sampled on the grid.
std::vector<double> gauge_phase(const GridSpec& g, double cx, double cy);

/// Plain centered differences of a real nodal field (one-sided at edges).
std::array<std::vector<double>, 2> real_gradient(const GridSpec& g, const std::vector<double>& f);

double kinetic_energy(const ComplexField& u);

/// Energy terms with explicit coefficients: interaction (g/2)|u|^4 and trap a|x|^2|u|^2.
EnergyBreakdown energy_terms(const ComplexField& u, double g, double trap_coeff);

/// GP energy; the trap uses (1 - omega^2) / (2 omega^2) when include_trap.
EnergyBreakdown energy(const ComplexField& u, const RegimeParams& p, bool include_trap);

}  // namespace vtf
