#include "vtf/vtf.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "core/abrikosov.hpp"
#include "core/error.hpp"
#include "core/homogeneous.hpp"
#include "core/snapshot.hpp"
#include "core/tf.hpp"
#include "core/torus.hpp"
#include "core/transport.hpp"
#include "core/trapped.hpp"
#include "core/vortex.hpp"
#include "harness/sweep.hpp"
#include "harness/version.hpp"

struct vtf_field {
  vtf::ComplexField f;
};

namespace {

thread_local std::string g_message;
thread_local vtf_status g_code = VTF_OK;

vtf_status set_error(vtf_status code, const std::string& msg) {
  g_code = code;
  g_message = msg;
  return code;
}

template <class F>
vtf_status guard(F&& f) {
  try {
    f();
    return VTF_OK;
  } catch (const vtf::Error& e) {
    return set_error(static_cast<vtf_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(VTF_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(VTF_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(VTF_E_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  vtf::require(p != nullptr, vtf::Errc::invalid_argument, std::string(what) + " is NULL");
}

vtf::RegimeParams to_core(const vtf_regime& p) {
  vtf::RegimeParams r;
  r.omega = p.omega;
  r.g = p.g;
  if (std::isfinite(p.delta)) r.delta = p.delta;
  vtf::validate(r);
  return r;
}

vtf_regime from_core(const vtf::RegimeParams& r) { return {r.omega, r.g, r.delta ? *r.delta : NAN}; }

void fill(vtf_energy* out, const vtf::EnergyBreakdown& e, int iterations, bool converged) {
  if (!out) return;
  *out = {e.total, e.kinetic, e.interaction, e.trap, e.multiplier, e.residual, iterations, converged ? 1 : 0};
}

void emit(vtf_field** out, vtf::ComplexField f) {
  if (out) *out = new vtf_field{std::move(f)};
}

vtf::Boundary to_core(vtf_bc bc) {
  switch (bc) {
    case VTF_BC_DIRICHLET: return vtf::Boundary::dirichlet;
    case VTF_BC_NEUMANN: return vtf::Boundary::neumann;
    case VTF_BC_PERIODIC: return vtf::Boundary::periodic;
  }
  vtf::fail(vtf::Errc::invalid_argument, "unknown boundary condition");
}

vtf::SweepOverrides overrides(const vtf_sweep_options* opt) {
  vtf::SweepOverrides ov;
  if (!opt) return ov;
  if (opt->out_root) ov.out_root = opt->out_root;
  if (opt->threads > 0) ov.threads = opt->threads;
  if (opt->snapshot >= 0) ov.snapshot = opt->snapshot != 0;
  if (opt->seed_set) ov.seed = opt->seed;
  return ov;
}

vtf_status finish_sweep(const vtf::SweepOutcome& o, char* run_dir, size_t cap, vtf_sweep_summary* s) {
  if (run_dir && cap) {
    std::strncpy(run_dir, o.run_dir.c_str(), cap - 1);
    run_dir[cap - 1] = '\0';
  }
  if (s) *s = {o.points, o.rows, o.failures};
  if (o.failures > 0)
    return set_error(VTF_E_PARTIAL, std::to_string(o.failures) + " sweep row(s) failed; see the status column");
  return VTF_OK;
}

}  // namespace

extern "C" {

const char* vtf_version(void) { return vtf::kVersion; }
vtf_status vtf_last_error_code(void) { return g_code; }
const char* vtf_last_error(void) { return g_message.c_str(); }

vtf_status vtf_field_read(const char* path, vtf_field** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new vtf_field{vtf::read_snapshot(path)};
  });
}

vtf_status vtf_field_write(const vtf_field* f, const char* path) {
  return guard([&] {
    need(f, "field");
    need(path, "path");
    vtf::write_snapshot(f->f, path);
  });
}

void vtf_field_free(vtf_field* f) { delete f; }

vtf_status vtf_field_shape(const vtf_field* f, int* nx, int* ny, double* lx, double* ly, vtf_bc* bc,
                           size_t* nodes) {
  return guard([&] {
    need(f, "field");
    const vtf::GridSpec& g = f->f.grid;
    if (nx) *nx = g.nx;
    if (ny) *ny = g.ny;
    if (lx) *lx = g.lx;
    if (ly) *ly = g.ly;
    if (bc) *bc = static_cast<vtf_bc>(static_cast<int>(g.bc));
    if (nodes) *nodes = g.size();
  });
}

vtf_status vtf_field_values(const vtf_field* f, double* out, size_t cap) {
  return guard([&] {
    need(f, "field");
    need(out, "out");
    vtf::require(cap >= 2 * f->f.values.size(), vtf::Errc::invalid_argument, "output buffer too small");
    for (std::size_t k = 0; k < f->f.values.size(); ++k) {
      out[2 * k] = f->f.values[k].real();
      out[2 * k + 1] = f->f.values[k].imag();
    }
  });
}

vtf_status vtf_field_mass(const vtf_field* f, double* mass) {
  return guard([&] {
    need(f, "field");
    need(mass, "mass");
    *mass = vtf::mass(f->f);
  });
}

vtf_status vtf_regime_from_delta(double omega, double delta, vtf_regime* out) {
  return guard([&] {
    need(out, "out");
    *out = from_core(vtf::regime_from_delta(omega, delta));
  });
}

vtf_status vtf_regime_from_g(double omega, double g, vtf_regime* out) {
  return guard([&] {
    need(out, "out");
    *out = from_core(vtf::regime(omega, g));
  });
}

vtf_status vtf_landau_spectrum(int d, double aspect, int n1, int k, uint64_t seed, double* values,
                               double* max_residual) {
  return guard([&] {
    need(values, "values");
    const vtf::TorusSpec t = vtf::make_torus(d, aspect);
    const vtf::SpectrumResult s = vtf::landau_spectrum(t, vtf::torus_grid(t, n1), k, seed);
    double r = 0.0;
    for (int i = 0; i < k; ++i) {
      values[i] = s.eigenvalues[i];
      r = std::max(r, s.residuals[i]);
    }
    if (max_residual) *max_residual = r;
  });
}

vtf_status vtf_torus_state(int d, double aspect, int n1, int l, vtf_field** out) {
  return guard([&] {
    need(out, "out");
    const vtf::TorusSpec t = vtf::make_torus(d, aspect);
    const vtf::LLLBasis b = vtf::lll_basis(t, vtf::torus_grid(t, n1));
    vtf::require(l >= 0 && l < d, vtf::Errc::invalid_argument, "state index must lie in [0, d)");
    emit(out, b.field(l));
  });
}

vtf_status vtf_abrikosov_beta(int d, double aspect, int restarts, uint64_t seed, double* beta, vtf_field** state) {
  return guard([&] {
    need(beta, "beta");
    const vtf::TorusSpec t = vtf::make_torus(d, aspect);
    const vtf::LLLBasis b = vtf::lll_basis(t, vtf::abrikosov_grid(t));
    const vtf::AbrikosovEstimate e = vtf::minimize_quartic(b, restarts, seed);
    *beta = e.ratio;
    emit(state, b.combine(e.coefficients));
  });
}

vtf_status vtf_homogeneous(vtf_bc bc, int d, double aspect, int n1, double rho, double g, uint64_t seed,
                           vtf_energy* energy, vtf_field** state) {
  return guard([&] {
    const vtf::Boundary b = to_core(bc);
    const vtf::TorusSpec t = vtf::make_torus(d, aspect);
    vtf::require(b == vtf::Boundary::periodic || std::abs(aspect - 1.0) < 1e-12, vtf::Errc::invalid_argument,
                 "Dirichlet/Neumann boxes must be square");
    const vtf::GridSpec grid = b == vtf::Boundary::periodic ? vtf::torus_grid(t, n1) : vtf::square_grid(n1, t.l1, b);
    const vtf::HomogeneousRun run = vtf::minimize_homogeneous(grid, rho * t.area(), g, seed);
    fill(energy, run.energy, run.iterations, run.converged);
    emit(state, run.state);
  });
}

vtf_status vtf_trapped(vtf_regime p, double box_radius, double h, uint64_t seed, vtf_energy* energy,
                       double* outside_mass, vtf_field** state) {
  return guard([&] {
    const vtf::RegimeParams rp = to_core(p);
    const double box = box_radius > 0 ? box_radius : vtf::default_box_radius(rp);
    const vtf::TrappedRun run = vtf::minimize_trapped(rp, box, h, seed);
    fill(energy, run.energy, run.iterations, run.converged);
    if (outside_mass) *outside_mass = run.outside_mass;
    emit(state, run.state);
  });
}

vtf_status vtf_lll(vtf_regime p, int degree, uint64_t seed, vtf_energy* energy, double* tail_weight) {
  return guard([&] {
    const vtf::RegimeParams rp = to_core(p);
    const vtf::LLLRun run = vtf::minimize_lll(rp, degree > 0 ? degree : vtf::default_degree(rp), seed);
    fill(energy, run.energy, run.iterations, run.converged);
    if (tail_weight) *tail_weight = run.tail_weight;
  });
}

vtf_status vtf_tf_profile(vtf_regime p, double e_ab, vtf_tf* out) {
  return guard([&] {
    need(out, "out");
    const vtf::TFProfile tf = vtf::tf_profile(to_core(p), e_ab);
    *out = {tf.e_ab, tf.lambda_tf, tf.radius, tf.energy, tf.lambda1, tf.radius1, tf.energy1, tf.params.tf_length()};
  });
}

vtf_status vtf_dual_lipschitz(int nx, int ny, double h, const unsigned char* mask, size_t center, const double* a,
                              const double* b, int stencil, double* out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    vtf::MeasureGrid g = vtf::box_grid(nx, ny, h, 0.0, 0.0);
    if (mask) g.mask.assign(mask, mask + g.size());
    g.center = center;
    *out = vtf::dual_lipschitz(g, std::vector<double>(a, a + g.size()), std::vector<double>(b, b + g.size()),
                               stencil);
  });
}

vtf_status vtf_vortex_census(const vtf_field* f, double density_floor, int* count, int* winding_sum,
                             double* positions, int* windings, size_t cap) {
  return guard([&] {
    need(f, "field");
    vtf::VortexOptions o;
    if (density_floor >= 0) o.density_floor = density_floor;
    o.sigma = 0.0;
    const vtf::VortexSet v = vtf::vortex_census(f->f, o);
    if (count) *count = int(v.positions.size());
    if (winding_sum) *winding_sum = v.winding_sum();
    for (std::size_t k = 0; k < v.positions.size() && k < cap; ++k) {
      if (positions) {
        positions[2 * k] = v.positions[k][0];
        positions[2 * k + 1] = v.positions[k][1];
      }
      if (windings) windings[k] = v.windings[k];
    }
  });
}

vtf_status vtf_sweep_run_file(const char* path, const vtf_sweep_options* opt, char* run_dir, size_t cap,
                              vtf_sweep_summary* summary) {
  vtf::SweepOutcome o;
  const vtf_status s = guard([&] {
    need(path, "path");
    o = vtf::run_sweep(vtf::load_config(path), overrides(opt));
  });
  return s != VTF_OK ? s : finish_sweep(o, run_dir, cap, summary);
}

vtf_status vtf_sweep_run_yaml(const char* yaml, const vtf_sweep_options* opt, char* run_dir, size_t cap,
                              vtf_sweep_summary* summary) {
  vtf::SweepOutcome o;
  const vtf_status s = guard([&] {
    need(yaml, "yaml");
    o = vtf::run_sweep(vtf::parse_config(yaml), overrides(opt));
  });
  return s != VTF_OK ? s : finish_sweep(o, run_dir, cap, summary);
}

}  // extern "C"
