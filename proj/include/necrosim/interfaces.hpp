#pragma once

#include <optional>

#include "necrosim/fourier.hpp"
#include "necrosim/stationary.hpp"

namespace necrosim {

/// Default admissibility constant 0.9 (R1 - R2) / (R1 + R2).
double default_amplitude_bound(const GeometryParams& geom);

/// Perturbations of the outer (rho1) and inner (rho2) interfaces,
/// Gamma_i = { R_i (1 + rho_i(theta)) (cos theta, sin theta) }.
struct InterfacePair {
  FourierSeries rho1;
  FourierSeries rho2;
  /// Admissibility constant a; the default bound is used when empty.
  std::optional<double> amplitude_bound;

  static InterfacePair zero(int max_mode);

  /// Common truncation; throws ContractError when rho1 and rho2 differ.
  int max_mode() const;

  /// The bound in effect. Throws ConfigError if a >= (R1 - R2) / (R1 + R2) or a <= 0.
  double bound(const GeometryParams& geom) const;

  /// Throws InterfaceCollision if ||rho_i||_inf >= a for either interface.
  void check_admissible(const GeometryParams& geom) const;

  const FourierSeries& operator[](int i) const { return i == 0 ? rho1 : rho2; }
  FourierSeries& operator[](int i) { return i == 0 ? rho1 : rho2; }

  InterfacePair rotated(double phi) const;
  InterfacePair reflected() const;
};

}  // namespace necrosim
