#include "core/homogeneous.hpp"

#include <cmath>
#include <numbers>

#include "core/abrikosov.hpp"
#include "core/error.hpp"

namespace vtf {

HomogeneousRun minimize_homogeneous(const GridSpec& grid, double mass, double g, std::uint64_t seed,
                                    const ComplexField* warm, const GPOptions& opt_in) {
  validate(grid);
  require(mass > 0.0, Errc::invalid_argument, "mass must be positive");
  require(g >= 0.0, Errc::invalid_argument, "g must be nonnegative");
  const MagneticOperator op = build_operator(grid);
  GPProblem prob{&op, VecR(), g, mass};
  GPOptions opt = opt_in;
  opt.seed = seed;

  VecC v0;
  if (warm) {
    require(warm->values.size() == grid.size(), Errc::grid, "warm start grid mismatch");
    v0 = op.restrict(warm->values);
  } else if (grid.bc == Boundary::periodic) {
    const TorusSpec t = make_torus(int(std::lround(grid.flux())), grid.ly / grid.lx);
    const LLLBasis b = lll_basis(t, grid);
    const AbrikosovEstimate a = minimize_quartic(b, 8, seed);
    v0 = op.restrict(b.combine(a.coefficients).values);
  } else {
    v0 = gp_random_start(prob, seed);
  }
  const GPResult r = minimize_gp(prob, v0, opt);

  HomogeneousRun run;
  run.bc = grid.bc;
  run.l1 = grid.lx;
  run.l2 = grid.ly;
  run.d = grid.bc == Boundary::periodic ? int(std::lround(grid.flux())) : 0;
  run.mass = mass;
  run.g = g;
  run.density = mass / (grid.lx * grid.ly);
  run.energy = r.energy;
  run.state = make_field(grid, mass);
  run.state.values = op.extend(r.v);
  run.iterations = r.iterations;
  run.converged = r.converged;
  return run;
}

ComplexField periodic_to_box(const ComplexField& u, Boundary bc) {
  validate(u);
  require(u.grid.bc == Boundary::periodic, Errc::grid, "source field must be magnetic-periodic");
  require(bc != Boundary::periodic, Errc::invalid_argument, "target must be a bounded box");
  const GridSpec& s = u.grid;
  GridSpec g = s;
  g.bc = bc;
  ComplexField out = make_field(g, u.mass_target);
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      const int si = i % s.nx, sj = j % s.ny;
      cplx z = u.values[s.index(si, sj)];
      // u(x + l1 e1) = e^{i l1 x2} u(x), u(x + l2 e2) = e^{-i l2 x1} u(x)
      const double xs = s.x(si);
      if (j == g.ny) z *= std::polar(1.0, -s.ly * xs);
      if (i == g.nx) z *= std::polar(1.0, s.lx * g.y(j));
      out.values[g.index(i, j)] = z;
    }
  if (bc == Boundary::dirichlet) {
    double seam = 0.0;
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        if (g.on_boundary(i, j)) seam = std::max(seam, std::abs(out.values[g.index(i, j)]));
    require(seam == 0.0, Errc::precondition, "periodic field does not vanish on the box boundary");
  }
  return out;
}

SupnormCheck supnorm_check(const HomogeneousRun& run) {
  SupnormCheck c;
  c.sup = sup_abs(run.state);
  c.bound_ratio = c.sup / std::sqrt(run.density);
  return c;
}

double lll_fraction(const HomogeneousRun& run, const LLLBasis& basis) {
  require(run.bc == Boundary::periodic, Errc::precondition, "lll_fraction needs a periodic run");
  require(run.d == basis.torus.d && std::abs(run.l1 - basis.torus.l1) < 1e-9 &&
              run.state.values.size() == basis.grid.size(),
          Errc::grid, "run and basis live on different tori or grids");
  const ComplexField p = Projector::torus(std::make_shared<LLLBasis>(basis)).apply(run.state);
  std::vector<cplx> diff(p.values.size());
  for (std::size_t n = 0; n < diff.size(); ++n) diff[n] = run.state.values[n] - p.values[n];
  return mass(run.state.grid, diff) / mass(run.state);
}

ScalingTable scaling_law_sweep(const TorusSpec& t, double g, const std::vector<double>& rho_list, int n1,
                               std::uint64_t seed) {
  validate(t);
  ScalingTable tab;
  tab.torus = t;
  tab.g = g;
  const GridSpec grid = torus_grid(t, n1);
  const LLLBasis basis = lll_basis(t, grid);
  double lambda0 = NAN;
  for (double rho : rho_list) {
    ScalingRow row;
    row.rho = rho;
    try {
      require(rho > 0.0, Errc::invalid_argument, "density must be positive");
      if (!std::isfinite(lambda0)) lambda0 = landau_spectrum(t, grid, 1, seed).eigenvalues[0];
      row.lambda0 = lambda0;
      const double M = rho * t.area();
      const HomogeneousRun run = minimize_homogeneous(grid, M, g, seed);
      row.energy = run.energy.total;
      row.kinetic = run.energy.kinetic;
      row.interaction = run.energy.interaction;
      row.multiplier = run.energy.multiplier;
      row.iterations = run.iterations;
      row.converged = run.converged;
      const SupnormCheck sc = supnorm_check(run);
      row.supnorm = sc.sup;
      row.supnorm_ratio = sc.bound_ratio;
      row.lll_fraction = lll_fraction(run, basis);
      require(g > 0.0, Errc::invalid_argument, "r(rho) undefined for g = 0");
      const double den = 0.5 * g * rho * rho * t.area();
      row.r = (row.energy - lambda0 * M) / den;
      row.r_continuum = (row.energy - M) / den;
    } catch (const Error& e) {
      row.error = e.what();
    }
    tab.rows.push_back(row);
  }
  // Least-squares line r = a + b sqrt(rho) over successful rows.
  double s1 = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : tab.rows)
    if (r.error.empty() && std::isfinite(r.r)) {
      const double x = std::sqrt(r.rho);
      s1 += 1;
      sx += x;
      sy += r.r;
      sxx += x * x;
      sxy += x * r.r;
    }
  if (s1 >= 2) {
    const double b = (s1 * sxy - sx * sy) / (s1 * sxx - sx * sx);
    tab.r_extrapolated = (sy - b * sx) / s1;
  }
  return tab;
}

}  // namespace vtf
