#pragma once

#include <cmath>
#include <optional>

namespace vtf {

struct RegimeParams {
  double omega = 0.0;
  double g = 0.0;
  std::optional<double> delta;

  /// Trap coefficient (1 - omega^2) / (2 omega^2).
  double trap_coeff() const { return (1.0 - omega * omega) / (2.0 * omega * omega); }
  double eps() const { return 1.0 - omega * omega; }
  /// TF length scale G^{1/4} (1 - omega^2)^{-1/4}.
  double tf_length() const { return std::pow(g, 0.25) * std::pow(eps(), -0.25); }
};

RegimeParams regime_from_delta(double omega, double delta);
RegimeParams regime(double omega, double g);
void validate(const RegimeParams& p);

struct EnergyBreakdown {
  double kinetic = 0.0;
  double interaction = 0.0;
  double trap = 0.0;
  double total = 0.0;
  double multiplier = NAN;
  double residual = NAN;
};

}  // namespace vtf
