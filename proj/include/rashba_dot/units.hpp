#pragma once

#include <cmath>

#include "rashba_dot/error.hpp"

namespace rashba_dot {

/// hbar^2 / (2 m_e) in meV nm^2.
inline constexpr double kHbarSquaredOverTwoElectronMass = 38.0998;

/// Dot described in laboratory units.
struct PhysicalInputs {
  double effective_mass = 0.0;       ///< in units of the free-electron mass
  double dot_radius = 0.0;           ///< nm
  double well_depth = 0.0;           ///< meV
  double rashba_coefficient = 0.0;   ///< alpha_R = hbar beta_R, meV nm (any sign)
};

struct DimensionlessInputs {
  double v = 0.0;
  double beta = 0.0;
  double energy_scale = 0.0;  ///< hbar^2 / (2 mu rho0^2) in meV; E = e * energy_scale
};

/// Energies in units of hbar^2/(2 mu rho0^2), lengths in units of rho0:
/// v = V0 / scale, beta = 2 mu rho0 alpha_R / hbar^2.
inline DimensionlessInputs to_dimensionless(const PhysicalInputs& p) {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(p.effective_mass) || !positive(p.dot_radius) || !positive(p.well_depth) ||
      !std::isfinite(p.rashba_coefficient)) {
    throw Error(ErrorCode::InvalidInput, "mass, radius and depth must be positive; rashba finite");
  }
  const double kinetic = kHbarSquaredOverTwoElectronMass / p.effective_mass;  // hbar^2/(2 mu)
  DimensionlessInputs d;
  d.energy_scale = kinetic / (p.dot_radius * p.dot_radius);
  d.v = p.well_depth / d.energy_scale;
  d.beta = p.dot_radius * p.rashba_coefficient / kinetic;
  return d;
}

}  // namespace rashba_dot
