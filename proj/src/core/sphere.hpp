#pragma once

#include <functional>

#include "core/linalg.hpp"

namespace vtf {

/// f(x) and, when grad != nullptr, its real gradient 2 df/dconj(x).
using SphereObjective = std::function<double(const VecC& x, VecC* grad)>;

struct SphereOptions {
  double grad_tol = 1e-9;  // on the Riemannian gradient norm, relative to max(1, |f|)
  int max_iter = 5000;
  /// Optional symmetric positive definite approximation of the inverse
  /// Hessian, used as the initial L-BFGS matrix.
  std::function<VecC(const VecC&)> precondition;
};

struct SphereResult {
  VecC x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Riemannian L-BFGS on the unit sphere of C^n with normalization
/// retraction, projection transport and Armijo backtracking.
SphereResult minimize_on_sphere(const SphereObjective& f, VecC x0, const SphereOptions& opt = {});

}  // namespace vtf
