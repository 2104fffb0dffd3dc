#include "core/trapped.hpp"

#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/sphere.hpp"
#include "core/torus.hpp"

namespace vtf {

namespace {

constexpr double kPi = std::numbers::pi;

/// gamma(m, k) = sqrt(C(m, k) / 2^m) for 0 <= k <= m <= 2N.
std::vector<double> gamma_table(int N) {
  const int mm = 2 * N;
  std::vector<double> t(std::size_t(mm + 1) * (N + 1), 0.0);
  for (int m = 0; m <= mm; ++m)
    for (int k = std::max(0, m - N); k <= std::min(m, N); ++k)
      t[std::size_t(m) * (N + 1) + k] = std::exp(
          0.5 * (std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0) - m * std::log(2.0)));
  return t;
}

struct LLLObjective {
  RegimeParams p;
  int N;
  std::vector<double> gam;
  LLLObjective(const RegimeParams& prm, int n) : p(prm), N(n), gam(gamma_table(n)) {}

  double quartic(const VecC& c, VecC* grad) const {
    const int mm = 2 * N;
    std::vector<cplx> B(mm + 1, 0.0);
    for (int m = 0; m <= mm; ++m) {
      cplx s = 0.0;
      for (int k = std::max(0, m - N); k <= std::min(m, N); ++k)
        s += c[k] * c[m - k] * gam[std::size_t(m) * (N + 1) + k];
      B[m] = s;
    }
    double q = 0.0;
    for (const cplx& b : B) q += std::norm(b);
    q /= 2.0 * kPi;
    if (grad) {
      grad->setZero(N + 1);
      for (int j = 0; j <= N; ++j) {
        cplx s = 0.0;
        for (int m = j; m <= j + N; ++m) s += B[m] * std::conj(c[m - j]) * gam[std::size_t(m) * (N + 1) + j];
        (*grad)[j] = 2.0 * s / kPi;  // real gradient 2 dQ/dconj(c_j)
      }
    }
    return q;
  }

  double operator()(const VecC& c, VecC* grad) const {
    const double a = p.trap_coeff();
    double trap = 0.0;
    for (int n = 0; n <= N; ++n) trap += (n + 1) * std::norm(c[n]);
    const double q = quartic(c, grad);
    if (grad) {
      *grad *= 0.5 * p.g;
      for (int n = 0; n <= N; ++n) (*grad)[n] += 2.0 * a * (n + 1) * c[n];
    }
    return 1.0 + 0.5 * p.g * q + a * trap;
  }
};

}  // namespace

double default_box_radius(const RegimeParams& p) { return std::max(3.0 * p.tf_length(), 8.0); }

int default_degree(const RegimeParams& p) {
  return std::max(16, int(std::ceil(4.0 * p.tf_length() * p.tf_length())));
}

double snap_spacing(double h) {
  require(h > 0, Errc::invalid_argument, "spacing must be positive");
  const double sp = std::sqrt(kPi);
  return sp / std::max(8.0, std::round(sp / h));
}

double discrete_landau_energy(double h) {
  const double hs = snap_spacing(h);
  const TorusSpec t = make_torus(1);
  const int n = int(std::lround(t.l1 / hs));
  return landau_spectrum(t, torus_grid(t, n), 1).eigenvalues[0];
}

GridSpec trapped_grid(double box_radius, double h_target) {
  require(box_radius > 0 && h_target > 0, Errc::invalid_argument, "box radius and spacing must be positive");
  const double h = snap_spacing(h_target);
  const int n = 2 * int(std::ceil(box_radius / h));
  const double l = n * h;
  return square_grid(n, l, Boundary::dirichlet, Origin::centered);
}

double fb_quartic(const std::vector<cplx>& c, std::vector<cplx>* grad) {
  const int N = int(c.size()) - 1;
  require(N >= 0, Errc::invalid_argument, "empty coefficient vector");
  LLLObjective obj(regime(0.5, 0.0), N);
  const VecC cv = Eigen::Map<const VecC>(c.data(), N + 1);
  VecC g;
  const double q = obj.quartic(cv, grad ? &g : nullptr);
  if (grad) grad->assign(g.data(), g.data() + g.size());
  return q;
}

ComplexField fb_field(const GridSpec& g, const std::vector<cplx>& c) {
  ComplexField u = make_field(g);
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i) {
      const double x = g.x(i), y = g.y(j);
      const cplx z(x, y);
      cplx phi = std::exp(-0.5 * (x * x + y * y)) / std::sqrt(kPi);
      cplx s = 0.0;
      for (std::size_t n = 0; n < c.size(); ++n) {
        if (n > 0) phi *= z / std::sqrt(double(n));
        s += c[n] * phi;
      }
      u.values[g.index(i, j)] = s;
    }
  u.mass_target = mass(u);
  return u;
}

double mass_outside(const ComplexField& u, double r) {
  const GridSpec& g = u.grid;
  const auto w = quadrature_weights(g);
  double s = 0.0;
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i) {
      const double x = g.x(i), y = g.y(j);
      if (x * x + y * y > r * r) s += w[g.index(i, j)] * std::norm(u.values[g.index(i, j)]);
    }
  return s;
}

TrappedRun minimize_trapped(const RegimeParams& p, double box_radius, double h, std::uint64_t seed,
                            const ComplexField* warm, const GPOptions& opt_in) {
  validate(p);
  require(box_radius >= 3.0 * p.tf_length() - 1e-12, Errc::precondition, "box radius must be >= 3 L^TF");
  const GridSpec grid = trapped_grid(box_radius, h);
  const MagneticOperator op = build_operator(grid);
  const VecR x = op.x(), y = op.y();
  GPProblem prob{&op, p.trap_coeff() * (x.cwiseAbs2() + y.cwiseAbs2()), p.g, 1.0};
  GPOptions opt = opt_in;
  opt.seed = seed;
  VecC v0;
  if (warm) {
    require(warm->grid.nx == grid.nx && warm->grid.bc == grid.bc && std::abs(warm->grid.lx - grid.lx) < 1e-12,
            Errc::grid, "warm start grid mismatch");
    v0 = op.restrict(warm->values);
  } else {
    v0 = gp_random_start(prob, seed);
  }
  const GPResult r = minimize_gp(prob, v0, opt);

  TrappedRun run;
  run.params = p;
  run.box_radius = grid.lx / 2;
  run.grid = grid;
  run.state = make_field(grid, 1.0);
  run.state.values = op.extend(r.v);
  run.energy = r.energy;
  run.iterations = r.iterations;
  run.converged = r.converged;
  run.outside_mass = mass_outside(run.state, 1.5 * p.tf_length());
  // Mass near the Dirichlet wall means the box truncates the condensate.
  double band = 0.0;
  const auto w = quadrature_weights(grid);
  for (int j = 0; j < grid.nodes_y(); ++j)
    for (int i = 0; i < grid.nodes_x(); ++i)
      if (std::max(std::abs(grid.x(i)), std::abs(grid.y(j))) > 0.9 * run.box_radius)
        band += w[grid.index(i, j)] * std::norm(run.state.values[grid.index(i, j)]);
  require(band < 1e-6, Errc::precondition,
          "box too small: mass " + std::to_string(band) + " within 10% of the wall; retry with a larger box");
  return run;
}

LLLRun minimize_lll(const RegimeParams& p, int degree, std::uint64_t seed, int restarts) {
  validate(p);
  require(degree >= 1, Errc::invalid_argument, "degree must be >= 1");
  require(restarts >= 1, Errc::invalid_argument, "restarts must be >= 1");
  const int N = degree;
  const LLLObjective obj(p, N);
  // Thomas-Fermi-like envelope: degree n sits at radius sqrt(n).
  const double R2 = 1.25 * p.tf_length() * p.tf_length() + 1.0;
  SphereOptions so;
  so.grad_tol = 1e-9;
  so.max_iter = 20000;
  LLLRun best;
  best.params = p;
  best.degree = N;
  best.energy.total = INFINITY;
  for (int r = 0; r < restarts; ++r) {
    VecC c0 = random_matrix(N + 1, 1, seed * 7919ULL + r).col(0);
    for (int n = 0; n <= N; ++n) c0[n] *= std::sqrt(std::max(R2 - n, 0.0) + 1e-3);
    const SphereResult s = minimize_on_sphere(obj, c0, so);
    if (s.f < best.energy.total) {
      best.coeffs.assign(s.x.data(), s.x.data() + N + 1);
      best.energy.total = s.f;
      best.iterations = s.iterations;
      best.converged = s.converged;
    }
  }
  const VecC c = Eigen::Map<const VecC>(best.coeffs.data(), N + 1);
  best.energy.kinetic = 1.0;
  best.energy.interaction = 0.5 * p.g * obj.quartic(c, nullptr);
  double trap = 0.0;
  for (int n = 0; n <= N; ++n) trap += (n + 1) * std::norm(c[n]);
  best.energy.trap = p.trap_coeff() * trap;
  best.energy.total = best.energy.kinetic + best.energy.interaction + best.energy.trap;
  best.energy.multiplier = best.energy.total + best.energy.interaction;
  for (int n = 0; n <= N; ++n)
    if (n > 0.9 * N) best.tail_weight += std::norm(c[n]);
  require(best.tail_weight < 1e-8, Errc::precondition,
          "Fock-Bargmann truncation too small: tail weight " + std::to_string(best.tail_weight));
  return best;
}

GapResult gp_lll_gap(const RegimeParams& p, double box_radius, double h, int degree, std::uint64_t seed) {
  GapResult g;
  g.lll = minimize_lll(p, degree, seed);
  ComplexField warm = fb_field(trapped_grid(box_radius, h), g.lll.coeffs);
  normalize(warm, 1.0);
  g.e_lll_grid = energy(warm, p, true).total;
  g.gp = minimize_trapped(p, box_radius, h, seed, &warm);
  g.e_gp = g.gp.energy.total;
  g.e_lll = g.lll.energy.total;
  const double scale = std::sqrt(p.g * p.eps());
  const double den = scale > 0 ? scale : 1.0;
  g.gap_normalized = (g.e_lll_grid - g.e_gp) / den;
  g.gap_raw_normalized = (g.e_lll - g.e_gp) / den;
  return g;
}

DecayProfile decay_profile(const TrappedRun& run) {
  DecayProfile d;
  const double L = run.params.tf_length();
  const double h = run.grid.h();
  for (double r = 0.0; r <= run.box_radius; r += 4 * h) {
    d.radius.push_back(r);
    d.mass_outside.push_back(mass_outside(run.state, r));
  }
  d.reference_slope = -std::sqrt(std::max(0.0, run.energy.multiplier - 1.0));
  double s1 = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < d.radius.size(); ++k) {
    const double r = d.radius[k], m = d.mass_outside[k];
    if (r < 1.2 * L || !(m > 1e-13)) continue;
    const double ly = std::log(m);
    s1 += 1;
    sx += r;
    sy += ly;
    sxx += r * r;
    sxy += r * ly;
  }
  if (s1 >= 3) d.fitted_slope = (s1 * sxy - sx * sy) / (s1 * sxx - sx * sx);
  return d;
}

}  // namespace vtf
