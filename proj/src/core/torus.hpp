#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "core/linalg.hpp"

namespace vtf {

/// Magnetic torus with l1 * l2 = pi * d (d flux quanta for B = 2).
struct TorusSpec {
  int d = 0;
  double l1 = 0.0;
  double l2 = 0.0;
  double aspect() const { return l2 / l1; }
  double area() const { return l1 * l2; }
};

TorusSpec make_torus(int d, double aspect = 1.0);
void validate(const TorusSpec& t);

/// Periodic grid on the torus with n1 cells along l1 (cells along l2 follow
/// from the aspect ratio, which must give an integer count).
GridSpec torus_grid(const TorusSpec& t, int n1, Origin origin = Origin::centered);
void check_grid_matches(const TorusSpec& t, const GridSpec& g);

struct SpectrumResult {
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  MatC vectors;  // nodal values, M-orthonormal columns
  int iterations = 0;
};

/// Lowest k eigenvalues of the Peierls-discretized Landau operator.
SpectrumResult landau_spectrum(const TorusSpec& t, const GridSpec& g, int k, std::uint64_t seed = 1);

/// Analytic theta state of Landau level `level` (0 or 1), index l in [0, d),
/// normalized to unit L2 norm on the cell. Terms |j - j0| <= K around the
/// nearest Gaussian centre are summed.
cplx theta_state(const TorusSpec& t, int l, double x1, double x2, int K, int level = 0);

struct LLLBasis {
  TorusSpec torus;
  GridSpec grid;
  int truncation = 8;
  MatC values;  // nodes x d, quadrature-orthonormal after Gram-Schmidt
  MatC gram;    // quadrature Gram matrix of the analytic theta states
  MatC R;       // raw theta coefficients -> orthonormal coefficients
  double gram_offdiag_max = 0.0;

  int dim() const { return torus.d; }
  ComplexField field(int l) const;
  /// Field of sum_l c_l phi_l.
  ComplexField combine(const std::vector<cplx>& c) const;
  /// Orthonormal coefficients of u projected on the span.
  std::vector<cplx> coefficients(const ComplexField& u) const;
};

LLLBasis lll_basis(const TorusSpec& t, const GridSpec& g, int truncation = 8);

/// Sine of the largest principal angle between the basis span and the
/// M-orthonormal columns of V.
double subspace_angle(const LLLBasis& b, const MatC& V);

/// Writes one snapshot per basis element plus manifest.json into dir.
void export_basis(const LLLBasis& b, const std::string& dir);

enum class ProjectorKind { torus, plane };

class Projector {
 public:
  static Projector torus(std::shared_ptr<const LLLBasis> basis);
  /// Full-plane LLL projector truncated to Fock-Bargmann degree <= N,
  /// applied on the given (bounded or periodic) grid.
  static Projector plane(const GridSpec& g, int N);

  ProjectorKind kind() const { return kind_; }
  int truncation() const;
  ComplexField apply(const ComplexField& u) const;
  /// Analytic kernel Pi(x, y).
  cplx kernel(double x1, double x2, double y1, double y2) const;
  /// Integral of |Pi(x, y)| over the torus cell (torus kind only).
  double row_mass(double x1, double x2) const;
  const LLLBasis* basis() const { return basis_.get(); }

 private:
  ProjectorKind kind_ = ProjectorKind::torus;
  std::shared_ptr<const LLLBasis> basis_;
  GridSpec grid_;
  int N_ = 0;
  MatC fb_;  // nodes x (N+1) Fock-Bargmann functions on grid_
};

/// phi_n(z) = z^n e^{-|z|^2/2} / sqrt(pi n!) evaluated in log space.
cplx fock_bargmann(int n, double x1, double x2);
/// Plane LLL kernel (1/pi) e^{i(x2 y1 - x1 y2)} e^{-|x-y|^2/2}.
cplx plane_kernel(double x1, double x2, double y1, double y2);

}  // namespace vtf
