#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's own Bessel kernels or solvers.

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/float128.hpp>

#include <array>
#include <cmath>
#include <functional>

#include "necrosim/stationary.hpp"

namespace oracle {

using boost::multiprecision::float128;

inline double I(int m, double x) { return boost::math::cyl_bessel_i(m, x); }
inline double K(int m, double x) { return boost::math::cyl_bessel_k(m, x); }
inline float128 Iq(int m, float128 x) { return boost::math::cyl_bessel_i(m, x); }
inline float128 Kq(int m, float128 x) { return boost::math::cyl_bessel_k(m, x); }

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

inline double second_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
}

/// psi'(R_i) - p'(R_i) - A G R_i / 2 at both radii, built directly from the
/// boundary-value problems with Boost Bessel functions in quad precision.
inline std::array<float128, 2> stationarity_residuals(double R1d, double R2d, float128 A, float128 G, float128 psi0) {
  const float128 R1 = R1d, R2 = R2d;
  const float128 AG = A * G;
  // p = a ln r + b with p(R1) = 1/R1 - AG R1^2/4, p(R2) = -1/R2 - AG R2^2/4 - psi0.
  const float128 p1 = 1 / R1 - AG * R1 * R1 / 4;
  const float128 p2 = -1 / R2 - AG * R2 * R2 / 4 - psi0;
  const float128 a = (p1 - p2) / log(R1 / R2);
  // psi = c1 I0 + c2 K0 with psi(R1) = G, psi(R2) = G - psi0 (Cramer's rule).
  const float128 det = Iq(0, R1) * Kq(0, R2) - Iq(0, R2) * Kq(0, R1);
  const float128 c1 = (G * Kq(0, R2) - (G - psi0) * Kq(0, R1)) / det;
  const float128 c2 = (Iq(0, R1) * (G - psi0) - Iq(0, R2) * G) / det;
  std::array<float128, 2> out;
  const float128 R[2] = {R1, R2};
  for (int i = 0; i < 2; ++i) {
    const float128 dpsi = c1 * Iq(1, R[i]) - c2 * Kq(1, R[i]);
    out[i] = dpsi - a / R[i] - AG * R[i] / 2;
  }
  return out;
}

/// Normal velocities of a circular annulus with radii R1 (1 + e1) and R2 (1 + e2):
/// (psi'(r_i) - p'(r_i)) / R_i - AG (1 + e_i) / 2, where psi and p solve the
/// radial problems on the physical annulus with curvature 1/(1 + e_i) in the pressure data.
inline std::array<double, 2> radial_phi(const necrosim::GeometryParams& g, const necrosim::BioParams& bio, double e1,
                                        double e2) {
  const double r1 = g.R1 * (1 + e1), r2 = g.R2 * (1 + e2);
  const double AG = bio.A * bio.G;
  const double p1 = (1 / (1 + e1)) / g.R1 - AG * g.R1 * g.R1 / 4 * (1 + e1) * (1 + e1);
  const double p2 = -(1 / (1 + e2)) / g.R2 - AG * g.R2 * g.R2 / 4 * (1 + e2) * (1 + e2) - bio.psi0;
  const double a = (p1 - p2) / std::log(r1 / r2);
  const double det = I(0, r1) * K(0, r2) - I(0, r2) * K(0, r1);
  const double c1 = (bio.G * K(0, r2) - (bio.G - bio.psi0) * K(0, r1)) / det;
  const double c2 = (I(0, r1) * (bio.G - bio.psi0) - I(0, r2) * bio.G) / det;
  const double r[2] = {r1, r2};
  const double R[2] = {g.R1, g.R2};
  const double e[2] = {e1, e2};
  std::array<double, 2> out;
  for (int i = 0; i < 2; ++i) {
    const double dpsi = c1 * I(1, r[i]) - c2 * K(1, r[i]);
    out[i] = (dpsi - a / r[i]) / R[i] - AG * (1 + e[i]) / 2;
  }
  return out;
}

}  // namespace oracle
