#include "core/abrikosov.hpp"

#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/sphere.hpp"

namespace vtf {

namespace {

struct Quartic {
  const LLLBasis& b;
  VecR w;
  explicit Quartic(const LLLBasis& basis) : b(basis) {
    const auto wv = quadrature_weights(b.grid);
    w = Eigen::Map<const VecR>(wv.data(), long(wv.size()));
  }
  double operator()(const VecC& c, VecC* grad) const {
    const VecC u = b.values * c;
    const VecR r = u.cwiseAbs2();
    if (grad) *grad = 4.0 * (b.values.adjoint() * (w.cwiseProduct(r).cast<cplx>().cwiseProduct(u)));
    return w.dot(r.cwiseProduct(r));
  }
};

// Cauchy-Schwarz with quadrature weights summing to the area gives beta >= 1
// exactly; anything below flags a broken basis or quadrature.
double checked(double beta) {
  require(beta >= 1.0 - 1e-12, Errc::numeric, "quartic ratio below 1: " + std::to_string(beta));
  return beta;
}

}  // namespace

double quartic_ratio(const LLLBasis& b, const std::vector<cplx>& c) {
  require(int(c.size()) == b.dim(), Errc::invalid_argument, "coefficient count must equal d");
  VecC cv = Eigen::Map<const VecC>(c.data(), b.dim());
  require(cv.norm() > 0.0, Errc::invalid_argument, "zero coefficient vector");
  const auto wv = quadrature_weights(b.grid);
  const VecR w = Eigen::Map<const VecR>(wv.data(), long(wv.size()));
  const VecR r = (b.values * cv).cwiseAbs2();
  const double m = w.dot(r);
  return checked(b.torus.area() * w.dot(r.cwiseProduct(r)) / (m * m));
}

AbrikosovEstimate minimize_quartic(const LLLBasis& b, int restarts, std::uint64_t seed) {
  require(restarts >= 1, Errc::invalid_argument, "restarts must be >= 1");
  const Quartic q(b);
  AbrikosovEstimate best;
  best.torus = b.torus;
  best.restarts = restarts;
  SphereOptions opt;
  opt.grad_tol = 1e-8;
  for (int r = 0; r < restarts; ++r) {
    const VecC x0 = random_matrix(b.dim(), 1, seed * 1000003ULL + r).col(0);
    const SphereResult s = minimize_on_sphere(q, x0, opt);
    const double beta = b.torus.area() * s.f;
    if (!(beta >= best.ratio)) {
      best.ratio = beta;
      best.coefficients.assign(s.x.data(), s.x.data() + s.x.size());
      best.converged = s.converged;
    }
  }
  checked(best.ratio);
  return best;
}

bool lattice_compatible(const TorusSpec& t, LatticeType type) {
  const double sp = std::sqrt(std::numbers::pi);
  if (type == LatticeType::square) {
    const double m = t.l2 / sp;
    const long mi = std::lround(m);
    return std::abs(m - mi) < 1e-9 && mi >= 1 && t.d % mi == 0 && std::abs(t.l1 / sp - t.d / mi) < 1e-9;
  }
  const long m = std::lround(std::sqrt(t.d / 2.0));
  return std::abs(t.aspect() - std::sqrt(3.0)) < 1e-9 && m >= 1 && 2 * m * m == t.d;
}

std::vector<cplx> lattice_trial(const LLLBasis& b, LatticeType type) {
  const TorusSpec& t = b.torus;
  require(lattice_compatible(t, type), Errc::precondition,
          type == LatticeType::square
              ? "square lattice needs l1, l2 integer multiples of sqrt(pi)"
              : "hexagonal lattice needs aspect sqrt(3) and d = 2 m^2");
  const int d = t.d;
  VecC raw = VecC::Zero(d);
  if (type == LatticeType::square) {
    const long m = std::lround(t.l2 / std::sqrt(std::numbers::pi));
    for (int l = 0; l < d; l += int(m)) raw[l] = 1.0;
  } else {
    const long m = std::lround(std::sqrt(d / 2.0));
    const cplx ph[2] = {1.0, cplx(0.0, 1.0)};
    for (long r = 0; r < 2 * m; ++r) raw[m * r] = ph[r % 2];
  }
  const VecC c = (b.R * raw).normalized();
  return {c.data(), c.data() + d};
}

GridSpec abrikosov_grid(const TorusSpec& t) {
  const int n1 = std::max(16, int(std::ceil(t.l1 / 0.2)));
  return torus_grid(t, n1);
}

std::vector<FluxRow> eab_vs_flux(const std::vector<int>& d_list, double aspect, std::uint64_t seed, int restarts) {
  std::vector<FluxRow> rows;
  for (int d : d_list) {
    const TorusSpec t = make_torus(d, aspect);
    const LLLBasis b = lll_basis(t, abrikosov_grid(t));
    const AbrikosovEstimate e = minimize_quartic(b, restarts, seed);
    FluxRow row;
    row.torus = t;
    row.beta_min = e.ratio;
    row.restarts = e.restarts;
    row.converged = e.converged;
    if (lattice_compatible(t, LatticeType::square)) row.beta_square = quartic_ratio(b, lattice_trial(b, LatticeType::square));
    if (lattice_compatible(t, LatticeType::hexagonal)) row.beta_hex = quartic_ratio(b, lattice_trial(b, LatticeType::hexagonal));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace vtf
