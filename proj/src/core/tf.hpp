#pragma once

#include <string>
#include <vector>

#include "core/grid.hpp"
#include "core/params.hpp"

namespace vtf {

/// Radial density sampled at nodes r_k, linear in s = r^2/2 between nodes
/// (exact for inverted parabolas whose edge is a node).
struct RadialDensity {
  std::vector<double> r;
  std::vector<double> rho;
};

double radial_mass(const RadialDensity& d);
double radial_integral_rho2(const RadialDensity& d);
double radial_integral_r2rho(const RadialDensity& d);

struct TFProfile {
  double e_ab = 0.0;
  std::string e_ab_source;
  RegimeParams params;
  double lambda_tf = 0.0;
  double radius = 0.0;
  double energy = 0.0;
  // unit problem (1/2) int (e rho^2 + |x|^2 rho)
  double lambda1 = 0.0;
  double radius1 = 0.0;
  double energy1 = 0.0;
  double scale = 0.0;  // s with rho(x) = s^2 rho_1(s x)
  RadialDensity unit_profile;  // 4096 nodes, edge at node 2048

  double density(double x1, double x2) const;
  double unit_density(double r) const;
  /// Physical profile on 4096 radial nodes.
  RadialDensity radial() const;
};

TFProfile tf_profile(const RegimeParams& p, double e_ab, const std::string& source = "given");

/// (1/2) int (e_ab G rho^2 + (1 - omega^2)/omega^2 |x|^2 rho) by grid quadrature.
double tf_energy_of(const GridSpec& g, const std::vector<double>& rho, const RegimeParams& p, double e_ab);
/// Same functional for a radial density (exact for piecewise-linear rho(r^2)).
double tf_energy_of(const RadialDensity& d, const RegimeParams& p, double e_ab);

/// JSON object {omega, g, delta, e_ab, lambda_tf, radius, energy, e_ab_source}.
std::string tf_json(const TFProfile& tf);

}  // namespace vtf
