#include "core/tf.hpp"

#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "json.hpp"

namespace vtf {

namespace {

constexpr double kPi = std::numbers::pi;

void check_density(const std::vector<double>& rho) {
  double total = 0.0;
  for (double v : rho) {
    require(std::isfinite(v), Errc::numeric, "density has non-finite entries");
    require(v >= -1e-12, Errc::invalid_argument, "density has negative entries");
    total += std::max(v, 0.0);
  }
  require(total > 0.0, Errc::invalid_argument, "zero density is not admissible");
}

// Integrals of a, a^2, s*a over a segment where a is linear in s.
struct Seg {
  double ds, a0, a1, s0, s1;
  double i1() const { return ds * (a0 + a1) / 2; }
  double i2() const { return ds * (a0 * a0 + a0 * a1 + a1 * a1) / 3; }
  double is() const { return ds * (s0 * (2 * a0 + a1) + s1 * (a0 + 2 * a1)) / 6; }
};

template <class F>
double radial_sum(const RadialDensity& d, F&& f) {
  require(d.r.size() == d.rho.size() && d.r.size() >= 2, Errc::invalid_argument, "bad radial density");
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < d.r.size(); ++k) {
    const double s0 = 0.5 * d.r[k] * d.r[k], s1 = 0.5 * d.r[k + 1] * d.r[k + 1];
    s += f(Seg{s1 - s0, std::max(d.rho[k], 0.0), std::max(d.rho[k + 1], 0.0), s0, s1});
  }
  return 2 * kPi * s;  // r dr = ds
}

}  // namespace

double radial_mass(const RadialDensity& d) { return radial_sum(d, [](const Seg& g) { return g.i1(); }); }
double radial_integral_rho2(const RadialDensity& d) { return radial_sum(d, [](const Seg& g) { return g.i2(); }); }
double radial_integral_r2rho(const RadialDensity& d) {
  return 2.0 * radial_sum(d, [](const Seg& g) { return g.is(); });
}

TFProfile tf_profile(const RegimeParams& p, double e_ab, const std::string& source) {
  validate(p);
  require(std::isfinite(e_ab) && e_ab >= 1.0, Errc::invalid_argument, "e_ab must be >= 1");
  require(p.g > 0.0, Errc::invalid_argument, "TF profile needs g > 0");
  TFProfile t;
  t.e_ab = e_ab;
  t.e_ab_source = source;
  t.params = p;
  t.lambda1 = std::sqrt(e_ab / kPi);
  t.radius1 = std::sqrt(2.0 * t.lambda1);
  t.energy1 = 2.0 * t.lambda1 / 3.0;
  t.scale = std::pow(p.eps() / p.g, 0.25) / std::sqrt(p.omega);
  const double gs2 = p.g * t.scale * t.scale;
  t.lambda_tf = gs2 * t.lambda1;
  t.energy = gs2 * t.energy1;
  t.radius = t.radius1 / t.scale;
  const int n = 4096;
  const double dr = t.radius1 / 2048.0;
  t.unit_profile.r.resize(n);
  t.unit_profile.rho.resize(n);
  for (int k = 0; k < n; ++k) {
    t.unit_profile.r[k] = k * dr;
    t.unit_profile.rho[k] = t.unit_density(k * dr);
  }
  return t;
}

double TFProfile::unit_density(double r) const { return std::max(lambda1 - 0.5 * r * r, 0.0) / e_ab; }

double TFProfile::density(double x1, double x2) const {
  return scale * scale * unit_density(scale * std::sqrt(x1 * x1 + x2 * x2));
}

RadialDensity TFProfile::radial() const {
  RadialDensity d = unit_profile;
  for (std::size_t k = 0; k < d.r.size(); ++k) {
    d.r[k] /= scale;
    d.rho[k] *= scale * scale;
  }
  return d;
}

double tf_energy_of(const GridSpec& g, const std::vector<double>& rho, const RegimeParams& p, double e_ab) {
  validate(g);
  validate(p);
  require(rho.size() == g.size(), Errc::grid, "density size does not match grid");
  check_density(rho);
  const auto w = quadrature_weights(g);
  const double c = p.eps() / (p.omega * p.omega);
  double e = 0.0;
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i) {
      const std::size_t n = g.index(i, j);
      const double r = std::max(rho[n], 0.0);
      const double x = g.x(i), y = g.y(j);
      e += 0.5 * w[n] * (e_ab * p.g * r * r + c * (x * x + y * y) * r);
    }
  require(std::isfinite(e), Errc::numeric, "TF energy is not finite");
  return e;
}

double tf_energy_of(const RadialDensity& d, const RegimeParams& p, double e_ab) {
  validate(p);
  check_density(d.rho);
  const double c = p.eps() / (p.omega * p.omega);
  return 0.5 * (e_ab * p.g * radial_integral_rho2(d) + c * radial_integral_r2rho(d));
}

std::string tf_json(const TFProfile& tf) {
  nlohmann::json j = {{"omega", tf.params.omega},
                      {"g", tf.params.g},
                      {"delta", tf.params.delta ? nlohmann::json(*tf.params.delta) : nlohmann::json(nullptr)},
                      {"e_ab", tf.e_ab},
                      {"lambda_tf", tf.lambda_tf},
                      {"radius", tf.radius},
                      {"energy", tf.energy},
                      {"e_ab_source", tf.e_ab_source}};
  return j.dump();
}

}  // namespace vtf
