#pragma once

#include <array>
#include <vector>

#include "necrosim/quad.hpp"

namespace necrosim {

/// Reference radii of the annulus, 0 < R2 < R1.
struct GeometryParams {
  double R1 = 2.0;
  double R2 = 1.0;

  /// Throws ConfigError unless 0 < R2 < R1 and both are finite.
  void validate() const;

  /// (R1 - R2) / (R1 + R2), the supremum of admissible amplitude bounds.
  double max_amplitude_bound() const { return (R1 - R2) / (R1 + R2); }

  bool operator==(const GeometryParams&) const = default;
};

/// Model constants A, G and the necrotic offset psi0 > 0.
struct BioParams {
  double A = 0.0;
  double G = 0.0;
  double psi0 = 1.0;

  bool operator==(const BioParams&) const = default;
};

/// p(r) = a_log ln r + b_const and psi(r) = c1 I0(r) + c2 K0(r).
struct RadialProfiles {
  quad a_log = 0;
  quad b_const = 0;
  quad c1 = 0;
  quad c2 = 0;

  quad pressure(quad r) const;
  quad pressure_derivative(quad r) const;
  quad nutrient(quad r) const;
  quad nutrient_derivative(quad r) const;
};

/// Coefficients of a_i G + b_i AG = c_i, i = 1 (outer), 2 (inner).
struct StationaryCoefficients {
  quad a1 = 0, a2 = 0;
  quad b1 = 0, b2 = 0;
  quad c1 = 0, c2 = 0;

  quad det_ab() const { return a1 * b2 - a2 * b1; }
  quad det_cb() const { return c1 * b2 - c2 * b1; }
  quad det_ac() const { return a1 * c2 - a2 * c1; }
};

struct StationaryResult {
  bool solvable = false;
  quad A = 0;
  quad G = 0;
  double psi0_critical = 0.0;
  /// Left-hand sides psi'(R_i) - p'(R_i) - AG R_i / 2 at R1 and R2 (zero when not solvable).
  std::array<double, 2> residuals{0.0, 0.0};

  /// (A, G, psi0) rounded to double.
  BioParams bio(double psi0) const { return {static_cast<double>(A), static_cast<double>(G), psi0}; }
};

/// Numerator and denominator of the critical-constant fraction.
struct CriticalConstantParts {
  quad numerator = 0;
  quad denominator = 0;
};

/// Summary of the G = 0 nonexistence argument for one outer radius.
struct G0Certificate {
  double R1 = 0.0;
  int samples = 0;
  double g_at_R1 = 0.0;          ///< g(R1), zero by construction
  double max_g_prime = 0.0;      ///< largest g'(x) over interior samples (negative when certified)
  double min_margin = 0.0;       ///< min |g'(x)| over interior samples
  bool certified = false;        ///< g(R1) == 0 within 1e-12 and g' < 0 at every sample
};

/// Relative distance from psi0c below which psi0 counts as critical.
inline constexpr double kCriticalGuard = 1e-9;

/// Pressure part (a_log, b_const) for general bio; c1, c2 are left zero.
RadialProfiles radial_pressure_profile(const GeometryParams& geom, const BioParams& bio);
/// Nutrient part (c1, c2); a_log, b_const are left zero.
RadialProfiles radial_nutrient_profile(const GeometryParams& geom, const BioParams& bio);
/// Both parts, with (A, G, psi0) supplied in quad precision.
RadialProfiles radial_profiles(const GeometryParams& geom, quad A, quad G, quad psi0);

/// g(x) = K0(R1) x I1(x) + I0(R1) x K1(x) - R1 (K0(R1) I1(R1) + I0(R1) K1(R1)).
double g_function(double R1, double x);
/// g'(x) = x (I0(x) K0(R1) - I0(R1) K0(x)).
double g_prime(double R1, double x);
/// Samples g' at x_k = R1 k / (samples + 1), k = 1..samples.
G0Certificate g0_nonexistence_certificate(double R1, int samples);

StationaryCoefficients stationarity_coefficients(const GeometryParams& geom, quad psi0);
CriticalConstantParts psi0_critical_parts(const GeometryParams& geom);
double psi0_critical(const GeometryParams& geom);
StationaryResult solve_stationary(const GeometryParams& geom, double psi0);

/// psi'(R_i) - p'(R_i) - AG R_i / 2 for i = 1, 2.
std::array<quad, 2> stationarity_residuals(const GeometryParams& geom, quad A, quad G, quad psi0);

/// R2/R1 - (K0(R1) I1(R1) + I0(R1) K1(R1)) / (K0(R1) I1(R2) + I0(R1) K1(R2)).
double bine_residual(double R1, double R2);

}  // namespace necrosim
