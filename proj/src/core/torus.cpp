#include "core/torus.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include "json.hpp"
#include <numbers>

#include "core/error.hpp"
#include "core/snapshot.hpp"

namespace vtf {

namespace {
constexpr double kPi = std::numbers::pi;
}

TorusSpec make_torus(int d, double aspect) {
  require(d >= 1, Errc::invalid_argument, "flux number d must be >= 1");
  require(std::isfinite(aspect) && aspect > 0.0, Errc::invalid_argument, "aspect must be positive and finite");
  TorusSpec t;
  t.d = d;
  t.l1 = std::sqrt(kPi * d / aspect);
  t.l2 = aspect * t.l1;
  return t;
}

void validate(const TorusSpec& t) {
  require(t.d >= 1, Errc::invalid_argument, "flux number d must be >= 1");
  require(std::abs(t.l1 * t.l2 - kPi * t.d) <= 1e-9, Errc::flux, "torus area is not pi*d");
}

GridSpec torus_grid(const TorusSpec& t, int n1, Origin origin) {
  validate(t);
  const int n2 = std::max(8, int(std::lround(n1 * t.aspect())));
  GridSpec g{n1, n2, t.l1, t.l2, origin, Boundary::periodic};
  validate(g);
  return g;
}

void check_grid_matches(const TorusSpec& t, const GridSpec& g) {
  validate(t);
  validate(g);
  require(g.bc == Boundary::periodic, Errc::grid, "torus operations need a magnetic-periodic grid");
  require(std::abs(g.lx - t.l1) <= 1e-9 * t.l1 && std::abs(g.ly - t.l2) <= 1e-9 * t.l2, Errc::grid,
          "grid box does not match torus");
}

SpectrumResult landau_spectrum(const TorusSpec& t, const GridSpec& g, int k, std::uint64_t seed) {
  check_grid_matches(t, g);
  require(k >= 1 && k <= 4 * t.d, Errc::invalid_argument, "k must lie in [1, 4d]");
  const MagneticOperator op = build_operator(g);
  EigenOptions opt;
  opt.seed = seed;
  opt.extra = std::max(4, k / 2);
  const EigenResult er = lowest_eigenpairs(op.S, op.m, k, opt);
  if (!er.converged)
    fail(Errc::not_converged,
         "Landau eigensolver did not converge; max residual " + std::to_string(er.residuals.maxCoeff()));
  SpectrumResult r;
  r.eigenvalues.assign(er.values.data(), er.values.data() + k);
  r.residuals.assign(er.residuals.data(), er.residuals.data() + k);
  r.vectors = er.vectors;
  r.iterations = er.iterations;
  return r;
}

cplx theta_state(const TorusSpec& t, int l, double x1, double x2, int K, int level) {
  // Landau-gauge theta sum e^{i k_n x2} e^{-(x1 - k_n/2)^2}, k_n = 2 pi n / l2,
  // n = l + j d, moved to the symmetric gauge by e^{-i x1 x2}.
  const double kunit = 2.0 * kPi / t.l2;
  const double c0 = 0.5 * kunit * l;
  const long j0 = std::lround((x1 - c0) / t.l1);
  cplx s = 0.0;
  for (long j = j0 - K; j <= j0 + K; ++j) {
    const double n = double(l) + double(j) * t.d;
    const double c = 0.5 * kunit * n;
    const double dx = x1 - c;
    double amp = std::exp(-dx * dx);
    if (level == 1) amp *= 2.0 * dx;
    s += amp * std::polar(1.0, kunit * n * x2);
  }
  // Both levels integrate |theta|^2 to l2 sqrt(pi/2) over the cell.
  const double norm = std::sqrt(t.l2 * std::sqrt(kPi / 2.0));
  return std::polar(1.0, -x1 * x2) * s / norm;
}

ComplexField LLLBasis::field(int l) const {
  require(l >= 0 && l < dim(), Errc::invalid_argument, "basis index out of range");
  ComplexField u = make_field(grid, 1.0);
  for (std::size_t n = 0; n < grid.size(); ++n) u.values[n] = values(long(n), l);
  return u;
}

ComplexField LLLBasis::combine(const std::vector<cplx>& c) const {
  require(int(c.size()) == dim(), Errc::invalid_argument, "coefficient count must equal d");
  VecC cv = Eigen::Map<const VecC>(c.data(), dim());
  VecC v = values * cv;
  ComplexField u = make_field(grid, cv.squaredNorm());
  for (std::size_t n = 0; n < grid.size(); ++n) u.values[n] = v[long(n)];
  return u;
}

std::vector<cplx> LLLBasis::coefficients(const ComplexField& u) const {
  require(u.values.size() == grid.size(), Errc::grid, "field grid does not match basis grid");
  const auto w = quadrature_weights(grid);
  std::vector<cplx> c(dim(), 0.0);
  for (int l = 0; l < dim(); ++l)
    for (std::size_t n = 0; n < grid.size(); ++n) c[l] += w[n] * std::conj(values(long(n), l)) * u.values[n];
  return c;
}

LLLBasis lll_basis(const TorusSpec& t, const GridSpec& g, int truncation) {
  check_grid_matches(t, g);
  require(truncation >= 6, Errc::invalid_argument, "theta truncation K must be >= 6");
  LLLBasis b;
  b.torus = t;
  b.grid = g;
  b.truncation = truncation;
  const long nn = long(g.size());
  const int d = t.d;
  MatC raw(nn, d);
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i)
      for (int l = 0; l < d; ++l) raw(long(g.index(i, j)), l) = theta_state(t, l, g.x(i), g.y(j), truncation);
  const auto wv = quadrature_weights(g);
  const VecR w = Eigen::Map<const VecR>(wv.data(), nn);
  b.gram = raw.adjoint() * w.asDiagonal() * raw;
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c)
      if (a != c) b.gram_offdiag_max = std::max(b.gram_offdiag_max, std::abs(b.gram(a, c)));
  require(b.gram.diagonal().real().minCoeff() > 0.5, Errc::numeric,
          "theta Gram matrix is numerically singular (grid or truncation too coarse)");

  // Modified Gram-Schmidt in the quadrature inner product; raw = Q R.
  b.values = raw;
  b.R = MatC::Zero(d, d);
  for (int l = 0; l < d; ++l) {
    for (int p = 0; p < l; ++p) {
      const cplx r = (b.values.col(p).adjoint() * w.asDiagonal() * b.values.col(l))(0, 0);
      b.R(p, l) = r;
      b.values.col(l) -= r * b.values.col(p);
    }
    const double nrm = std::sqrt((b.values.col(l).adjoint() * w.asDiagonal() * b.values.col(l))(0, 0).real());
    require(nrm > 1e-6, Errc::numeric, "theta Gram matrix is numerically singular");
    b.R(l, l) = nrm;
    b.values.col(l) /= nrm;
  }
  return b;
}

double subspace_angle(const LLLBasis& b, const MatC& V) {
  const auto wv = quadrature_weights(b.grid);
  const VecR w = Eigen::Map<const VecR>(wv.data(), long(wv.size()));
  // Eigenvectors are M-orthonormal with M = w on periodic grids.
  MatC C = b.values.adjoint() * w.asDiagonal() * V;
  Eigen::JacobiSVD<MatC> svd(C);
  const double smin = svd.singularValues().minCoeff();
  return std::sqrt(std::max(0.0, 1.0 - smin * smin));
}

void export_basis(const LLLBasis& b, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, Errc::io, "cannot create directory " + dir);
  nlohmann::json files = nlohmann::json::array();
  for (int l = 0; l < b.dim(); ++l) {
    const std::string name = "basis_" + std::to_string(l) + ".vtf";
    write_snapshot(b.field(l), (fs::path(dir) / name).string());
    files.push_back(name);
  }
  nlohmann::json m = {{"d", b.torus.d},          {"l1", b.torus.l1},
                      {"l2", b.torus.l2},        {"truncation", b.truncation},
                      {"gram_offdiag_max", b.gram_offdiag_max},
                      {"extension", b.torus.aspect() != 1.0},
                      {"files", files}};
  std::ofstream os(fs::path(dir) / "manifest.json");
  require(bool(os), Errc::io, "cannot write basis manifest");
  os << m.dump(2) << "\n";
}

cplx fock_bargmann(int n, double x1, double x2) {
  const double r2 = x1 * x1 + x2 * x2;
  if (n == 0) return std::exp(-0.5 * r2) / std::sqrt(kPi);
  if (r2 == 0.0) return 0.0;
  const double lg = 0.5 * n * std::log(r2) - 0.5 * r2 - 0.5 * (std::lgamma(n + 1.0) + std::log(kPi));
  return std::polar(std::exp(lg), n * std::atan2(x2, x1));
}

cplx plane_kernel(double x1, double x2, double y1, double y2) {
  const double d1 = x1 - y1, d2 = x2 - y2;
  return std::polar(std::exp(-0.5 * (d1 * d1 + d2 * d2)) / kPi, x2 * y1 - x1 * y2);
}

Projector Projector::torus(std::shared_ptr<const LLLBasis> basis) {
  require(bool(basis), Errc::invalid_argument, "null basis");
  Projector p;
  p.kind_ = ProjectorKind::torus;
  p.basis_ = std::move(basis);
  p.grid_ = p.basis_->grid;
  return p;
}

Projector Projector::plane(const GridSpec& g, int N) {
  validate(g);
  require(N >= 0, Errc::invalid_argument, "plane projector degree must be >= 0");
  Projector p;
  p.kind_ = ProjectorKind::plane;
  p.grid_ = g;
  p.N_ = N;
  p.fb_.resize(long(g.size()), N + 1);
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i) {
      const double x1 = g.x(i), x2 = g.y(j);
      const double r2 = x1 * x1 + x2 * x2;
      const cplx e = r2 > 0 ? std::polar(1.0, std::atan2(x2, x1)) : cplx(0.0);
      const double lr = r2 > 0 ? 0.5 * std::log(r2) : 0.0;
      cplx ph = 1.0;
      for (int n = 0; n <= N; ++n) {
        cplx v;
        if (n == 0) v = std::exp(-0.5 * r2) / std::sqrt(kPi);
        else if (r2 == 0.0) v = 0.0;
        else v = std::exp(n * lr - 0.5 * r2 - 0.5 * (std::lgamma(n + 1.0) + std::log(kPi))) * ph;
        p.fb_(long(g.index(i, j)), n) = v;
        ph *= e;
      }
    }
  // Functions leaking out of the box break idempotence on the grid.
  const auto wv = quadrature_weights(g);
  const VecR w = Eigen::Map<const VecR>(wv.data(), long(wv.size()));
  MatC G = p.fb_.adjoint() * w.asDiagonal() * p.fb_;
  const double err = (G - MatC::Identity(N + 1, N + 1)).cwiseAbs().maxCoeff();
  require(err < 1e-7, Errc::precondition,
          "plane projector truncation N = " + std::to_string(N) +
              " does not fit the grid (Gram defect " + std::to_string(err) + ")");
  return p;
}

int Projector::truncation() const { return kind_ == ProjectorKind::torus ? basis_->truncation : N_; }

ComplexField Projector::apply(const ComplexField& u) const {
  validate(u);
  const GridSpec& g = u.grid;
  require(g.size() == grid_.size() && g.nx == grid_.nx && g.ny == grid_.ny &&
              std::abs(g.lx - grid_.lx) < 1e-12 && std::abs(g.ly - grid_.ly) < 1e-12 && g.bc == grid_.bc,
          Errc::grid, "field grid is incompatible with projector");
  const MatC& B = kind_ == ProjectorKind::torus ? basis_->values : fb_;
  const auto wv = quadrature_weights(g);
  const VecR w = Eigen::Map<const VecR>(wv.data(), long(wv.size()));
  const VecC v = Eigen::Map<const VecC>(u.values.data(), long(u.values.size()));
  const VecC c = B.adjoint() * (w.asDiagonal() * v);
  const VecC out = B * c;
  ComplexField r = make_field(g, u.mass_target);
  for (std::size_t n = 0; n < g.size(); ++n) r.values[n] = out[long(n)];
  return r;
}

cplx Projector::kernel(double x1, double x2, double y1, double y2) const {
  if (kind_ == ProjectorKind::plane) return plane_kernel(x1, x2, y1, y2);
  cplx s = 0.0;
  const TorusSpec& t = basis_->torus;
  for (int l = 0; l < t.d; ++l)
    s += theta_state(t, l, x1, x2, basis_->truncation) * std::conj(theta_state(t, l, y1, y2, basis_->truncation));
  return s;
}

double Projector::row_mass(double x1, double x2) const {
  require(kind_ == ProjectorKind::torus, Errc::invalid_argument, "row mass is defined for torus projectors");
  const LLLBasis& b = *basis_;
  const TorusSpec& t = b.torus;
  std::vector<cplx> ax(t.d);
  for (int l = 0; l < t.d; ++l) ax[l] = theta_state(t, l, x1, x2, b.truncation);
  const auto w = quadrature_weights(b.grid);
  double s = 0.0;
  for (int j = 0; j < b.grid.nodes_y(); ++j)
    for (int i = 0; i < b.grid.nodes_x(); ++i) {
      cplx k = 0.0;
      for (int l = 0; l < t.d; ++l) k += ax[l] * std::conj(theta_state(t, l, b.grid.x(i), b.grid.y(j), b.truncation));
      s += w[b.grid.index(i, j)] * std::abs(k);
    }
  return s;
}

}  // namespace vtf
