#pragma once

#include <Eigen/CholmodSupport>
#include <Eigen/Dense>
#include <cstdint>
#include <memory>

#include "core/magnetic.hpp"

namespace vtf {

using MatC = Eigen::MatrixXcd;

/// Sparse Hermitian positive-definite factorization (CHOLMOD).
class HermitianSolver {
 public:
  void factor(const SpMat& A);
  VecC solve(const VecC& b) const;
  MatC solve(const MatC& b) const;

 private:
  std::shared_ptr<Eigen::CholmodDecomposition<SpMat, Eigen::Lower>> llt_;
};

struct EigenResult {
  VecR values;
  MatC vectors;  // columns M-orthonormal
  VecR residuals;  // ||A v - e M v||_{M^-1} / max(1, |e|)
  int iterations = 0;
  bool converged = false;
};

struct EigenOptions {
  double tol = 1e-9;
  int max_iter = 300;
  int extra = 4;  // block size beyond k
  double shift = 0.0;  // A - shift*M must be positive definite
  std::uint64_t seed = 1;
};

/// Lowest k eigenpairs of A v = e diag(m) v for Hermitian A via shift-invert
/// block iteration with Rayleigh-Ritz on [X, (A - shift M)^{-1} M X].
EigenResult lowest_eigenpairs(const SpMat& A, const VecR& m, int k, const EigenOptions& opt);

/// Gaussian complex random matrix, deterministic per seed.
MatC random_matrix(long rows, long cols, std::uint64_t seed);

}  // namespace vtf
