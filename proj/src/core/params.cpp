#include "core/params.hpp"

#include <string>

#include "core/error.hpp"

namespace vtf {

RegimeParams regime_from_delta(double omega, double delta) {
  RegimeParams p;
  p.omega = omega;
  p.delta = delta;
  p.g = std::pow(1.0 - omega * omega, -delta);
  validate(p);
  return p;
}

RegimeParams regime(double omega, double g) {
  RegimeParams p;
  p.omega = omega;
  p.g = g;
  validate(p);
  return p;
}

void validate(const RegimeParams& p) {
  require(std::isfinite(p.omega) && p.omega > 0.0 && p.omega < 1.0, Errc::invalid_argument,
          "omega must lie in (0, 1)");
  require(std::isfinite(p.g) && p.g >= 0.0, Errc::invalid_argument, "g must be nonnegative");
  if (p.delta) {
    const double want = std::pow(1.0 - p.omega * p.omega, -*p.delta);
    require(std::abs(p.g - want) <= 1e-12 * want, Errc::invalid_argument,
            "g inconsistent with delta: expected " + std::to_string(want));
  }
}

}  // namespace vtf
