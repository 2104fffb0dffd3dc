#include "core/linalg.hpp"

#include <algorithm>
#include <random>

#include "core/error.hpp"

namespace vtf {

void HermitianSolver::factor(const SpMat& A) {
  llt_ = std::make_shared<Eigen::CholmodDecomposition<SpMat, Eigen::Lower>>();
  llt_->compute(A);
  require(llt_->info() == Eigen::Success, Errc::numeric, "sparse Cholesky factorization failed");
}

VecC HermitianSolver::solve(const VecC& b) const {
  VecC x = llt_->solve(b);
  return x;
}

MatC HermitianSolver::solve(const MatC& b) const {
  MatC x = llt_->solve(b);
  return x;
}

MatC random_matrix(long rows, long cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  MatC X(rows, cols);
  for (long c = 0; c < cols; ++c)
    for (long r = 0; r < rows; ++r) {
      const double re = nd(rng);
      X(r, c) = cplx(re, nd(rng));
    }
  return X;
}

namespace {

MatC orthonormal_columns(const MatC& X) {
  Eigen::HouseholderQR<MatC> qr(X);
  return qr.householderQ() * MatC::Identity(X.rows(), X.cols());
}

}  // namespace

EigenResult lowest_eigenpairs(const SpMat& A, const VecR& m, int k, const EigenOptions& opt) {
  const long n = A.rows();
  require(k >= 1 && k < n, Errc::invalid_argument, "eigenpair count out of range");
  const int p = int(std::min<long>(k + opt.extra, n / 2));
  const VecR sm = m.cwiseSqrt();
  const VecR ism = sm.cwiseInverse();

  SpMat shifted = A;
  if (opt.shift != 0.0) {
    SpMat Md(n, n);
    std::vector<Eigen::Triplet<cplx>> t;
    for (long i = 0; i < n; ++i) t.emplace_back(i, i, m[i]);
    Md.setFromTriplets(t.begin(), t.end());
    shifted = A - opt.shift * Md;
  }
  HermitianSolver solver;
  solver.factor(shifted);

  // Work with y = M^{1/2} v so the problem is a standard Hermitian one.
  auto apply_h = [&](const MatC& Y) -> MatC {
    MatC V = ism.asDiagonal() * Y;
    MatC AV = A * V;
    return ism.asDiagonal() * AV;
  };
  auto apply_t = [&](const MatC& Y) -> MatC {
    MatC rhs = sm.asDiagonal() * Y;
    MatC Z = solver.solve(rhs);
    return sm.asDiagonal() * Z;
  };

  EigenResult res;
  MatC X = orthonormal_columns(random_matrix(n, p, opt.seed));
  for (int it = 1; it <= opt.max_iter; ++it) {
    MatC B(n, 2 * p);
    B << X, apply_t(X);
    MatC V = orthonormal_columns(B);
    MatC HV = apply_h(V);
    MatC Hr = V.adjoint() * HV;
    Hr = 0.5 * (Hr + Hr.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatC> es(Hr);
    const MatC W = es.eigenvectors().leftCols(p);
    X = V * W;
    const MatC HX = HV * W;
    VecR theta = es.eigenvalues().head(p);
    VecR r(k);
    for (int i = 0; i < k; ++i)
      r[i] = (HX.col(i) - theta[i] * X.col(i)).norm() / std::max(1.0, std::abs(theta[i]));
    res.iterations = it;
    res.values = theta.head(k);
    res.residuals = r;
    if (r.maxCoeff() < opt.tol) {
      res.converged = true;
      break;
    }
  }
  res.vectors = ism.asDiagonal() * X.leftCols(k);
  return res;
}

}  // namespace vtf
