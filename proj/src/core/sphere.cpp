#include "core/sphere.hpp"

#include <cmath>
#include <deque>

#include "core/error.hpp"

namespace vtf {

namespace {

VecC tangent(const VecC& x, const VecC& v) { return v - x.dot(v).real() * x; }
double rdot(const VecC& a, const VecC& b) { return a.dot(b).real(); }

}  // namespace

SphereResult minimize_on_sphere(const SphereObjective& f, VecC x, const SphereOptions& opt) {
  require(x.norm() > 0.0, Errc::invalid_argument, "zero starting point");
  x.normalize();
  VecC g;
  double fx = f(x, &g);
  VecC rg = tangent(x, g);
  // Riemannian L-BFGS; stored pairs are re-projected onto the current tangent space.
  constexpr std::size_t kMem = 12;
  std::deque<VecC> S, Y;
  std::deque<double> rho;
  SphereResult res;
  auto tol = [&](double fv) { return opt.grad_tol * std::max(1.0, std::abs(fv)); };
  for (int it = 1; it <= opt.max_iter && rg.norm() >= tol(fx); ++it) {
    res.iterations = it;
    VecC q = rg;
    std::vector<double> alpha(S.size());
    for (std::size_t k = S.size(); k-- > 0;) {
      alpha[k] = rho[k] * rdot(S[k], q);
      q -= alpha[k] * Y[k];
    }
    if (opt.precondition) {
      double gamma = 1.0;
      if (!S.empty()) gamma = rdot(S.back(), Y.back()) / rdot(Y.back(), opt.precondition(Y.back()));
      q = gamma * opt.precondition(q);
    } else {
      double gamma = 1.0 / std::max(1e-12, rg.norm());
      if (!S.empty()) gamma = rdot(S.back(), Y.back()) / rdot(Y.back(), Y.back());
      q *= gamma;
    }
    for (std::size_t k = 0; k < S.size(); ++k) {
      const double b = rho[k] * rdot(Y[k], q);
      q += (alpha[k] - b) * S[k];
    }
    VecC dir = tangent(x, -q);
    double slope = rdot(rg, dir);
    if (!(slope < 0.0)) {
      S.clear(); Y.clear(); rho.clear();
      dir = opt.precondition ? tangent(x, -opt.precondition(rg)) : VecC(-rg * (1.0 / std::max(1e-12, rg.norm())));
      slope = rdot(rg, dir);
    }
    double t = 1.0;
    VecC xn, gn, rgn;
    double fn = 0.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      xn = (x + t * dir).normalized();
      fn = f(xn, &gn);
      rgn = tangent(xn, gn);
      if (fn <= fx + 1e-4 * t * slope) { accepted = true; break; }
      // At rounding level f stalls; accept if the gradient shrinks.
      if (fn <= fx + 4e-16 * std::abs(fx) && rgn.norm() < 0.9 * rg.norm()) { accepted = true; break; }
      t *= 0.5;
    }
    if (!accepted) {
      if (S.empty()) break;
      S.clear(); Y.clear(); rho.clear();
      continue;
    }
    const VecC s = tangent(xn, xn - x);
    const VecC y = rgn - tangent(xn, rg);
    for (auto& v : S) v = tangent(xn, v);
    for (auto& v : Y) v = tangent(xn, v);
    const double sy = rdot(s, y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      S.push_back(s);
      Y.push_back(y);
      rho.push_back(1.0 / sy);
      if (S.size() > kMem) { S.pop_front(); Y.pop_front(); rho.pop_front(); }
    }
    x = xn;
    fx = fn;
    rg = rgn;
  }
  res.x = x;
  res.f = fx;
  res.grad_norm = rg.norm();
  res.converged = res.grad_norm < tol(fx);
  return res;
}

}  // namespace vtf
