#pragma once

#include <cstdint>
#include <vector>

#include "core/linalg.hpp"

namespace vtf {

/// Constrained minimization of v^* S v + (g/2) sum m|v|^4 + sum m V |v|^2
/// subject to sum m|v|^2 = mass, over the free nodes of a MagneticOperator.
struct GPProblem {
  const MagneticOperator* op = nullptr;
  VecR V;  // potential per free node (empty = 0)
  double g = 0.0;
  double mass = 1.0;
};

struct GPOptions {
  double energy_tol = 1e-10;    // absolute energy decrease per step
  double residual_tol = 1e-6;   // Euler-Lagrange residual relative to ||v||
  int max_iter = 20000;
  double tau0 = 0.0;            // 0 picks a default from the initial state
  double tau_max = 1e3;
  /// Gradient-flow steps before switching to preconditioned Riemannian
  /// L-BFGS for the remaining iterations; negative keeps the flow throughout.
  int flow_iter = 40;
  std::uint64_t seed = 1;
};

struct GPResult {
  VecC v;
  EnergyBreakdown energy;
  int iterations = 0;
  int factorizations = 0;
  bool converged = false;
  bool monotone = true;
  double sigma = 0.0;
};

EnergyBreakdown gp_energy(const GPProblem& p, const VecC& v);
/// Multiplier and relative Euler-Lagrange residual, stored in the breakdown.
void gp_residual(const GPProblem& p, const VecC& v, EnergyBreakdown& e);

/// Random complex Gaussian start normalized to the problem mass.
VecC gp_random_start(const GPProblem& p, std::uint64_t seed);

/// Semi-implicit stabilized normalized gradient flow:
/// (M + tau (S + MV - sigma M)) w = M [(1 + tau (lambda - sigma)) v - tau g |v|^2 v],
/// v <- w rescaled to the mass sphere; sigma is the lowest linear eigenvalue.
/// Steps that raise the energy are rejected and tau is halved.
GPResult minimize_gp(const GPProblem& p, VecC v0, const GPOptions& opt = {});

}  // namespace vtf
