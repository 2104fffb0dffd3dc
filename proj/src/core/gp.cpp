#include "core/gp.hpp"

#include <cmath>

#include "core/error.hpp"
#include "core/sphere.hpp"

namespace vtf {

namespace {

SpMat diag(const VecR& d) {
  SpMat D(d.size(), d.size());
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(d.size());
  for (long i = 0; i < d.size(); ++i) t.emplace_back(i, i, d[i]);
  D.setFromTriplets(t.begin(), t.end());
  return D;
}

VecR potential(const GPProblem& p) { return p.V.size() ? p.V : VecR::Zero(p.op->n()); }

}  // namespace

EnergyBreakdown gp_energy(const GPProblem& p, const VecC& v) {
  const VecR& m = p.op->m;
  const VecR r = v.cwiseAbs2();
  EnergyBreakdown e;
  e.kinetic = v.dot(p.op->S * v).real();
  e.interaction = 0.5 * p.g * m.dot(r.cwiseProduct(r));
  if (p.V.size()) e.trap = m.dot(p.V.cwiseProduct(r));
  e.total = e.kinetic + e.interaction + e.trap;
  return e;
}

void gp_residual(const GPProblem& p, const VecC& v, EnergyBreakdown& e) {
  const VecR& m = p.op->m;
  const double mass = m.dot(v.cwiseAbs2());
  e.multiplier = (e.kinetic + 2.0 * e.interaction + e.trap) / mass;
  const VecR V = potential(p);
  const VecC Sv = p.op->S * v;
  const VecR pot = p.g * v.cwiseAbs2() + V;
  const VecC r = Sv.cwiseQuotient(m.cast<cplx>()) + pot.cast<cplx>().cwiseProduct(v) - e.multiplier * v;
  e.residual = std::sqrt(m.dot(r.cwiseAbs2()) / mass);
}

VecC gp_random_start(const GPProblem& p, std::uint64_t seed) {
  VecC v = random_matrix(p.op->n(), 1, seed).col(0);
  v *= std::sqrt(p.mass / p.op->m.dot(v.cwiseAbs2()));
  return v;
}

GPResult minimize_gp(const GPProblem& p, VecC v, const GPOptions& opt) {
  require(p.op != nullptr, Errc::invalid_argument, "GP problem without operator");
  require(p.mass > 0.0, Errc::invalid_argument, "mass must be positive");
  require(v.size() == p.op->n(), Errc::invalid_argument, "initial state has the wrong size");
  const VecR& m = p.op->m;
  const VecR V = potential(p);
  const SpMat M = diag(m);
  const SpMat K = p.op->S + diag(m.cwiseProduct(V));

  auto rescale = [&](VecC& x) { x *= std::sqrt(p.mass / m.dot(x.cwiseAbs2())); };
  rescale(v);

  GPResult res;
  {
    EigenOptions eo;
    eo.seed = opt.seed;
    eo.tol = 1e-6;
    eo.extra = 3;
    const EigenResult er = lowest_eigenpairs(K, m, 1, eo);
    res.sigma = er.values[0] - 1e-8 * std::abs(er.values[0]);
  }
  const double sigma = res.sigma;

  EnergyBreakdown e = gp_energy(p, v);
  gp_residual(p, v, e);
  double tau = opt.tau0;
  if (tau <= 0.0) {
    const double peak = p.g * v.cwiseAbs2().maxCoeff();
    tau = std::min(opt.tau_max, 0.5 / std::max(peak, 1e-3));
  }
  HermitianSolver solver;
  auto refactor = [&]() {
    solver.factor(M + tau * (K - sigma * M));
    ++res.factorizations;
  };
  refactor();
  int streak = 0;
  const int flow_steps = opt.flow_iter < 0 ? opt.max_iter : std::min(opt.flow_iter, opt.max_iter);
  for (int it = 1; it <= flow_steps; ++it) {
    res.iterations = it;
    const VecR r = v.cwiseAbs2();
    const VecC rhs = m.cast<cplx>().cwiseProduct((1.0 + tau * (e.multiplier - sigma)) * v -
                                                 tau * p.g * r.cast<cplx>().cwiseProduct(v));
    VecC w = solver.solve(rhs);
    rescale(w);
    EnergyBreakdown en = gp_energy(p, w);
    if (!std::isfinite(en.total)) fail(Errc::numeric, "gradient flow produced non-finite energy");
    if (en.total > e.total + 1e-14 * std::abs(e.total)) {
      tau *= 0.5;
      require(tau > 1e-12, Errc::not_converged, "gradient flow step size underflow");
      refactor();
      streak = 0;
      continue;
    }
    const double drop = e.total - en.total;
    v = std::move(w);
    e = en;
    gp_residual(p, v, e);
    if (drop < opt.energy_tol && e.residual < opt.residual_tol) {
      res.converged = true;
      break;
    }
    if (++streak >= 8 && tau < opt.tau_max) {
      tau = std::min(opt.tau_max, 2.0 * tau);
      refactor();
      streak = 0;
    }
  }
  if (!res.converged && res.iterations < opt.max_iter) {
    // Polish in y = sqrt(M) v on the sphere |y|^2 = mass, preconditioned by
    // the shifted linear operator.
    const VecR sm = m.cwiseSqrt();
    const double rm = std::sqrt(p.mass);
    solver.factor(K + (1.0 - sigma) * M);
    ++res.factorizations;
    auto obj = [&](const VecC& x, VecC* grad) {
      const VecC u = (rm * x).cwiseQuotient(sm.cast<cplx>());
      const EnergyBreakdown en = gp_energy(p, u);
      if (grad) {
        const VecR pot = p.g * u.cwiseAbs2() + V;
        const VecC gv = 2.0 * (p.op->S * u + m.cwiseProduct(pot).cast<cplx>().cwiseProduct(u));
        *grad = rm * gv.cwiseQuotient(sm.cast<cplx>());
      }
      return en.total;
    };
    SphereOptions so;
    so.max_iter = opt.max_iter - res.iterations;
    so.grad_tol = 1.8 * opt.residual_tol * p.mass / std::max(1.0, std::abs(e.total));
    so.precondition = [&](const VecC& q) {
      return VecC(sm.cast<cplx>().cwiseProduct(solver.solve(VecC(sm.cast<cplx>().cwiseProduct(q)))));
    };
    const SphereResult sr = minimize_on_sphere(obj, v.cwiseProduct(sm.cast<cplx>()), so);
    res.iterations += sr.iterations;
    if (sr.f <= e.total) {
      v = (rm * sr.x).cwiseQuotient(sm.cast<cplx>());
      e = gp_energy(p, v);
      gp_residual(p, v, e);
    }
    res.converged = e.residual < opt.residual_tol;
  }
  res.v = v;
  res.energy = e;
  return res;
}

}  // namespace vtf
