#include "necrosim/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "necrosim/errors.hpp"
#include "necrosim/specfun.hpp"

namespace necrosim {
namespace {

using specfun::bessel_i;
using specfun::bessel_k;

void require_annulus(const GeometryParams& geom) {
  if (geom.R1 == geom.R2) throw DegenerateAnnulus("R1 == R2: ln(R1/R2) vanishes");
  geom.validate();
}

// Bessel values at the two radii, shared by every section-2 formula.
struct BesselTable {
  quad R1, R2, L;
  quad i0_1, i0_2, k0_1, k0_2;
  quad i1_1, i1_2, k1_1, k1_2;
  quad den;  // I0(R1) K0(R2) - I0(R2) K0(R1)

  explicit BesselTable(const GeometryParams& geom) : R1(geom.R1), R2(geom.R2) {
    using std::log;
    L = log(R1 / R2);
    i0_1 = bessel_i(0, R1);
    i0_2 = bessel_i(0, R2);
    k0_1 = bessel_k(0, R1);
    k0_2 = bessel_k(0, R2);
    i1_1 = bessel_i(1, R1);
    i1_2 = bessel_i(1, R2);
    k1_1 = bessel_k(1, R1);
    k1_2 = bessel_k(1, R2);
    den = i0_1 * k0_2 - i0_2 * k0_1;
  }
};

}  // namespace

void GeometryParams::validate() const {
  if (!std::isfinite(R1) || !std::isfinite(R2)) throw ConfigError("radii must be finite");
  if (!(R2 > 0)) throw ConfigError("inner radius R2 must be positive");
  if (!(R2 < R1)) throw ConfigError("inner radius R2 must be smaller than outer radius R1");
}

quad RadialProfiles::pressure(quad r) const {
  using std::log;
  return a_log * log(r) + b_const;
}

quad RadialProfiles::pressure_derivative(quad r) const { return a_log / r; }

quad RadialProfiles::nutrient(quad r) const { return c1 * bessel_i(0, r) + c2 * bessel_k(0, r); }

quad RadialProfiles::nutrient_derivative(quad r) const { return c1 * bessel_i(1, r) - c2 * bessel_k(1, r); }

RadialProfiles radial_profiles(const GeometryParams& geom, quad A, quad G, quad psi0) {
  using std::log;
  require_annulus(geom);
  const quad R1 = geom.R1;
  const quad R2 = geom.R2;
  const quad L = log(R1 / R2);
  const quad AG = A * G;

  RadialProfiles p;
  p.a_log = (1 / R1 + 1 / R2 + AG * (R2 * R2 - R1 * R1) / 4 + psi0) / L;
  p.b_const = 1 / R1 - AG * R1 * R1 / 4 - p.a_log * log(R1);

  const BesselTable t(geom);
  p.c1 = (G * t.k0_2 + (psi0 - G) * t.k0_1) / t.den;
  p.c2 = (-G * t.i0_2 - (psi0 - G) * t.i0_1) / t.den;
  return p;
}

RadialProfiles radial_pressure_profile(const GeometryParams& geom, const BioParams& bio) {
  RadialProfiles p = radial_profiles(geom, bio.A, bio.G, bio.psi0);
  p.c1 = 0;
  p.c2 = 0;
  return p;
}

RadialProfiles radial_nutrient_profile(const GeometryParams& geom, const BioParams& bio) {
  RadialProfiles p = radial_profiles(geom, bio.A, bio.G, bio.psi0);
  p.a_log = 0;
  p.b_const = 0;
  return p;
}

double g_function(double R1, double x) {
  const double k0 = bessel_k(0, R1);
  const double i0 = bessel_i(0, R1);
  const double at_r1 = R1 * (k0 * bessel_i(1, R1) + i0 * bessel_k(1, R1));
  return k0 * x * bessel_i(1, x) + i0 * x * bessel_k(1, x) - at_r1;
}

double g_prime(double R1, double x) {
  return x * (bessel_i(0, x) * bessel_k(0, R1) - bessel_i(0, R1) * bessel_k(0, x));
}

G0Certificate g0_nonexistence_certificate(double R1, int samples) {
  if (!(R1 > 0)) throw DomainError("g certificate requires R1 > 0");
  if (samples < 2) throw DomainError("g certificate requires at least two samples");
  G0Certificate c;
  c.R1 = R1;
  c.samples = samples;
  c.g_at_R1 = g_function(R1, R1);
  c.max_g_prime = -std::numeric_limits<double>::infinity();
  c.min_margin = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= samples; ++k) {
    const double x = R1 * k / (samples + 1);
    const double gp = g_prime(R1, x);
    c.max_g_prime = std::max(c.max_g_prime, gp);
    c.min_margin = std::min(c.min_margin, std::abs(gp));
  }
  c.certified = std::abs(c.g_at_R1) <= 1e-12 && c.max_g_prime < 0;
  return c;
}

StationaryCoefficients stationarity_coefficients(const GeometryParams& geom, quad psi0) {
  require_annulus(geom);
  if (!(psi0 > 0)) throw ConfigError("psi0 must be positive");
  const BesselTable t(geom);
  const quad s = 1 / t.R1 + 1 / t.R2;
  const quad diff_sq = t.R1 * t.R1 - t.R2 * t.R2;

  // Numerators over the common denominator t.den.
  auto a_num = [&](quad i1, quad k1) { return (t.k0_2 - t.k0_1) * i1 - (t.i0_1 - t.i0_2) * k1; };
  auto w = [&](quad i1, quad k1) { return t.k0_1 * i1 + t.i0_1 * k1; };
  auto b = [&](quad R) { return diff_sq / (4 * t.L * R) - R / 2; };
  auto c = [&](quad R, quad i1, quad k1) { return -psi0 * w(i1, k1) / t.den + (s + psi0) / (t.L * R); };

  StationaryCoefficients k;
  k.a1 = a_num(t.i1_1, t.k1_1) / t.den;
  k.a2 = a_num(t.i1_2, t.k1_2) / t.den;
  k.b1 = b(t.R1);
  k.b2 = b(t.R2);
  k.c1 = c(t.R1, t.i1_1, t.k1_1);
  k.c2 = c(t.R2, t.i1_2, t.k1_2);
  return k;
}

CriticalConstantParts psi0_critical_parts(const GeometryParams& geom) {
  require_annulus(geom);
  const BesselTable t(geom);
  const quad s = 1 / t.R1 + 1 / t.R2;
  const quad diff_sq = t.R1 * t.R1 - t.R2 * t.R2;
  const quad b1 = diff_sq / (4 * t.L * t.R1) - t.R1 / 2;
  const quad b2 = diff_sq / (4 * t.L * t.R2) - t.R2 / 2;

  CriticalConstantParts parts;
  parts.numerator = (b1 / t.R2 - b2 / t.R1) * s / t.L;
  parts.denominator = (t.k0_1 * (b1 * t.i1_2 - b2 * t.i1_1) + t.i0_1 * (b1 * t.k1_2 - b2 * t.k1_1)) / t.den +
                      diff_sq / (2 * t.R1 * t.R2 * t.L);
  return parts;
}

double psi0_critical(const GeometryParams& geom) {
  const CriticalConstantParts parts = psi0_critical_parts(geom);
  return static_cast<double>(parts.numerator / parts.denominator);
}

std::array<quad, 2> stationarity_residuals(const GeometryParams& geom, quad A, quad G, quad psi0) {
  const RadialProfiles p = radial_profiles(geom, A, G, psi0);
  std::array<quad, 2> out;
  const std::array<quad, 2> radii{quad(geom.R1), quad(geom.R2)};
  for (int i = 0; i < 2; ++i) {
    const quad R = radii[i];
    out[i] = p.nutrient_derivative(R) - p.pressure_derivative(R) - A * G * R / 2;
  }
  return out;
}

StationaryResult solve_stationary(const GeometryParams& geom, double psi0) {
  require_annulus(geom);
  if (!(psi0 > 0)) throw ConfigError("psi0 must be positive");
  StationaryResult r;
  r.psi0_critical = psi0_critical(geom);
  if (std::abs(psi0 - r.psi0_critical) <= kCriticalGuard * r.psi0_critical) return r;

  const StationaryCoefficients k = stationarity_coefficients(geom, psi0);
  r.solvable = true;
  r.A = k.det_ac() / k.det_cb();
  r.G = k.det_cb() / k.det_ab();
  const std::array<quad, 2> res = stationarity_residuals(geom, r.A, r.G, psi0);
  r.residuals = {static_cast<double>(res[0]), static_cast<double>(res[1])};
  return r;
}

double bine_residual(double R1, double R2) {
  if (!(R2 > 0) || !(R2 <= R1)) throw DomainError("bine_residual requires 0 < R2 <= R1");
  const double k0 = bessel_k(0, R1);
  const double i0 = bessel_i(0, R1);
  const double num = k0 * bessel_i(1, R1) + i0 * bessel_k(1, R1);
  const double den = k0 * bessel_i(1, R2) + i0 * bessel_k(1, R2);
  return R2 / R1 - num / den;
}

}  // namespace necrosim
