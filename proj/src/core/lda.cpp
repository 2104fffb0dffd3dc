#include "core/lda.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "core/error.hpp"
#include "core/vortex.hpp"

namespace vtf {

std::array<double, 2> eta_interval(double delta) {
  return {std::max((1 + 2 * delta) / 6, 1 - delta), (1 + delta) / 4};
}

double default_eta(double delta) {
  const auto iv = eta_interval(delta);
  require(iv[0] < iv[1], Errc::invalid_argument, "empty eta interval for this delta");
  return 0.5 * (iv[0] + iv[1]);
}

TilingSpec make_tiling(double side, double support_radius) {
  require(side > 0.0 && std::isfinite(side), Errc::invalid_argument, "tile side must be positive");
  require(support_radius > 0.0, Errc::invalid_argument, "support radius must be positive");
  TilingSpec t;
  t.side = side;
  const int k = int(std::ceil(support_radius / side + 0.5));
  for (int j = -k; j <= k; ++j)
    for (int i = -k; i <= k; ++i) {
      // distance from the origin to the closed square
      const double dx = std::max(std::abs(i * side) - 0.5 * side, 0.0);
      const double dy = std::max(std::abs(j * side) - 0.5 * side, 0.0);
      if (dx * dx + dy * dy <= support_radius * support_radius) {
        t.index.push_back({i, j});
        t.centers.push_back({i * side, j * side});
      }
    }
  return t;
}

TilingSpec make_tiling(const TFProfile& tf, std::optional<double> eta) {
  const RegimeParams& p = tf.params;
  double e;
  if (eta) {
    e = *eta;
  } else {
    require(p.delta.has_value(), Errc::invalid_argument, "default eta needs params with delta");
    e = default_eta(*p.delta);
  }
  TilingSpec t = make_tiling(std::pow(p.eps(), -e), tf.radius);
  t.eta = e;
  if (p.delta) {
    const auto iv = eta_interval(*p.delta);
    t.eta_admissible = e > iv[0] && e < iv[1];
  }
  return t;
}

CoarseDensity coarse_grain(const ComplexField& u, const TilingSpec& tiling) {
  validate(u);
  require(tiling.side > 0.0 && !tiling.index.empty(), Errc::invalid_argument, "empty tiling");
  const GridSpec& g = u.grid;
  const double L = tiling.side;
  const double xlo = g.x0(), xhi = g.x0() + g.lx, ylo = g.y0(), yhi = g.y0() + g.ly;
  std::map<std::array<int, 2>, std::size_t> slot;
  for (std::size_t k = 0; k < tiling.index.size(); ++k) {
    const auto [i, j] = tiling.index[k];
    require((i - 0.5) * L >= xlo - 1e-12 && (i + 0.5) * L <= xhi + 1e-12 && (j - 0.5) * L >= ylo - 1e-12 &&
                (j + 0.5) * L <= yhi + 1e-12,
            Errc::grid, "tile lies outside the grid");
    slot[tiling.index[k]] = k;
  }
  CoarseDensity cd;
  cd.tiling = tiling;
  std::vector<double> m(tiling.index.size(), 0.0);
  const auto w = quadrature_weights(g);
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i) {
      const std::size_t n = g.index(i, j);
      const double q = w[n] * std::norm(u.values[n]);
      cd.total_mass += q;
      const std::array<int, 2> key{int(std::floor(g.x(i) / L + 0.5)), int(std::floor(g.y(j) / L + 0.5))};
      auto it = slot.find(key);
      if (it != slot.end()) m[it->second] += q;
    }
  cd.values.resize(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    cd.values[k] = m[k] / (L * L);
    cd.covered_mass += m[k];
  }
  return cd;
}

L2Distance l2_distance(const CoarseDensity& cd, const TFProfile& tf) {
  const TilingSpec& t = cd.tiling;
  require(cd.values.size() == t.centers.size(), Errc::invalid_argument, "coarse density does not match tiling");
  // 3-point Gauss-Legendre on 32 x 32 sub-squares of each tile
  static const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const double gw[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
  const int sub = 32;
  const double L = t.side, hs = L / sub;
  double acc = 0.0;
  for (std::size_t k = 0; k < t.centers.size(); ++k) {
    const double cx = t.centers[k][0] - 0.5 * L, cy = t.centers[k][1] - 0.5 * L;
    double s = 0.0;
    for (int b = 0; b < sub; ++b)
      for (int a = 0; a < sub; ++a)
        for (int q = 0; q < 3; ++q)
          for (int p = 0; p < 3; ++p) {
            const double x = cx + (a + 0.5 + 0.5 * gx[p]) * hs, y = cy + (b + 0.5 + 0.5 * gx[q]) * hs;
            const double d = cd.values[k] - tf.density(x, y);
            s += gw[p] * gw[q] * d * d;
          }
    acc += s * 0.25 * hs * hs;
  }
  // TF mass outside the tiles: the tiles cover the support whenever they come
  // from make_tiling with radius >= tf.radius, so this term is usually zero.
  L2Distance r;
  r.value = std::sqrt(acc);
  r.times_ltf = r.value * tf.params.tf_length();
  return r;
}

namespace {

void deposit(const MeasureGrid& mg, std::vector<double>& mass, double y1, double y2, double q) {
  const double fx = (y1 - mg.x0) / mg.h, fy = (y2 - mg.y0) / mg.h;
  const int i = int(std::floor(fx)), j = int(std::floor(fy));
  const double tx = fx - i, ty = fy - j;
  const double wts[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
  const int ii[4] = {i, i + 1, i, i + 1}, jj[4] = {j, j, j + 1, j + 1};
  for (int k = 0; k < 4; ++k) {
    if (ii[k] < 0 || jj[k] < 0 || ii[k] >= mg.nx || jj[k] >= mg.ny) continue;
    const std::size_t n = mg.index(ii[k], jj[k]);
    if (mg.mask[n]) mass[n] += wts[k] * q;
  }
}

}  // namespace

RescaledDensity rescale_density(const ComplexField& u, double scale, double radius, double h) {
  validate(u);
  require(scale > 0.0, Errc::invalid_argument, "rescaling factor must be positive");
  RescaledDensity r;
  r.grid = disk_grid(radius, h);
  r.rho.assign(r.grid.size(), 0.0);
  const GridSpec& g = u.grid;
  const auto w = quadrature_weights(g);
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i) {
      const std::size_t n = g.index(i, j);
      deposit(r.grid, r.rho, g.x(i) / scale, g.y(j) / scale, w[n] * std::norm(u.values[n]));
    }
  for (double& v : r.rho) v /= r.grid.h * r.grid.h;
  return r;
}

RescaledDensity rescale_density(const TFProfile& tf, double scale, double radius, double h) {
  require(scale > 0.0, Errc::invalid_argument, "rescaling factor must be positive");
  RescaledDensity r;
  r.grid = disk_grid(radius, h);
  r.rho.assign(r.grid.size(), 0.0);
  const MeasureGrid& mg = r.grid;
  const int m = 8;
  const double hs = mg.h / m;
  for (int j = -1; j < mg.ny; ++j)
    for (int i = -1; i < mg.nx; ++i)
      for (int b = 0; b < m; ++b)
        for (int a = 0; a < m; ++a) {
          const double y1 = mg.x(i) + (a + 0.5) * hs, y2 = mg.y(j) + (b + 0.5) * hs;
          const double rho = scale * scale * tf.density(scale * y1, scale * y2);
          if (rho > 0.0) deposit(mg, r.rho, y1, y2, rho * hs * hs);
        }
  for (double& v : r.rho) v /= mg.h * mg.h;
  return r;
}

MetricReport metric_report(const ComplexField& u, double energy, double landau, const TFProfile& tf,
                           const TilingSpec& tiling, const LDAOptions& opt) {
  MetricReport m;
  m.scale = tf.params.tf_length();
  m.energy_ratio = (energy - landau) / tf.energy;
  m.energy_ratio_raw = (energy - 1.0) / tf.energy;
  const CoarseDensity cd = coarse_grain(u, tiling);
  m.covered_mass = cd.covered_mass;
  const L2Distance l2 = l2_distance(cd, tf);
  m.l2_distance = l2.value;
  m.l2_times_ltf = l2.times_ltf;
  const double radius = opt.radius_factor * tf.radius1;
  const RescaledDensity a = rescale_density(u, m.scale, radius, opt.bin);
  const RescaledDensity b = rescale_density(tf, m.scale, radius, opt.bin);
  m.dual_lipschitz = dual_lipschitz(a.grid, a.rho, b.rho, opt.stencil);
  require(std::isfinite(m.l2_distance) && std::isfinite(m.dual_lipschitz) && std::isfinite(m.energy_ratio),
          Errc::numeric, "non-finite LDA metric");
  return m;
}

ComplexField lll_field(const LLLRun& run, const TFProfile& tf, const LDAOptions& opt) {
  require(opt.lll_spacing > 0.0, Errc::invalid_argument, "sampling spacing must be positive");
  const double s = tf.params.tf_length();
  const double reach = std::max(opt.radius_factor * tf.radius1 * s, tf.radius) + 2.0 * std::max(s, 4.0);
  const int n = 2 * int(std::ceil(reach / opt.lll_spacing));
  GridSpec g = square_grid(n, n * opt.lll_spacing, Boundary::dirichlet);
  return fb_field(g, run.coeffs);
}

LDAReport lda_report(const TrappedRun& gp, const LLLRun& lll, const TFProfile& tf, const TilingSpec& tiling,
                     const LDAOptions& opt) {
  const RegimeParams& p = tf.params;
  require(std::abs(gp.params.omega - p.omega) <= 1e-14 && std::abs(gp.params.g - p.g) <= 1e-12 * p.g &&
              std::abs(lll.params.omega - p.omega) <= 1e-14 && std::abs(lll.params.g - p.g) <= 1e-12 * p.g,
          Errc::invalid_argument, "runs and TF profile do not share params");
  LDAReport r;
  r.tf = tf;
  r.tiling = tiling;
  r.e_gp = gp.energy.total;
  r.e_lll = lll.energy.total;
  r.gp = metric_report(gp.state, r.e_gp, discrete_landau_energy(gp.grid.h()), tf, tiling, opt);
  r.lll = metric_report(lll_field(lll, tf, opt), r.e_lll, 1.0, tf, tiling, opt);
  r.gap_raw_normalized = (r.e_lll - r.e_gp) / std::sqrt(p.g * p.eps());
  VortexOptions vo;
  vo.sigma = 0.0;
  r.n_vortices = int(vortex_census(gp.state, vo).positions.size());
  return r;
}

}  // namespace vtf
