#pragma once

#include "necrosim/quad.hpp"

namespace necrosim::specfun {

/// Value and order of I_m and K_m at one argument.
struct BesselEval {
  int order = 0;
  double argument = 0.0;
  double value_i = 0.0;
  double value_k = 0.0;
};

/// A Bessel value carried as mantissa * 2^binary_exponent * exp(exp_argument).
///
/// exp_argument is +x for I_m and -x for K_m, so I_m(x) and K_m(x) can be
/// represented (and divided) far outside the range of the plain type.
template <class Real>
struct ScaledBessel {
  Real mantissa = 0;
  int binary_exponent = 0;
  Real exp_argument = 0;
};

/// Modified Bessel function of the first kind I_m(x), m >= 0, x >= 0.
///
/// Throws DomainError for m < 0 or x < 0 and RangeError when the value
/// overflows or underflows the return type.
double bessel_i(int m, double x);
quad bessel_i(int m, quad x);

/// Modified Bessel function of the second kind K_m(x), m >= 0, x > 0.
double bessel_k(int m, double x);
quad bessel_k(int m, quad x);

/// dI_m/dx. For m = 0 this is bessel_i(1, x); otherwise (I_{m-1}+I_{m+1})/2.
double bessel_i_prime(int m, double x);
quad bessel_i_prime(int m, quad x);

/// dK_m/dx. For m = 0 this is -bessel_k(1, x); otherwise -(K_{m-1}+K_{m+1})/2.
double bessel_k_prime(int m, double x);
quad bessel_k_prime(int m, quad x);

/// e^{-x} I_m(x).
double bessel_i_scaled(int m, double x);

/// e^{x} K_m(x).
double bessel_k_scaled(int m, double x);

/// I_m(x) and K_m(x) together.
BesselEval evaluate(int m, double x);

/// Overflow-free representations used for ratios of high-order functions.
ScaledBessel<double> scaled_i(int m, double x);
ScaledBessel<double> scaled_k(int m, double x);
ScaledBessel<double> scaled_i_prime(int m, double x);
ScaledBessel<double> scaled_k_prime(int m, double x);  ///< represents -K_m'(x) > 0

/// a / b for two scaled values. Throws RangeError if the ratio is not finite.
double ratio(const ScaledBessel<double>& a, const ScaledBessel<double>& b);

/// Converts to a plain value, throwing RangeError when not representable.
double materialize(const ScaledBessel<double>& s);

}  // namespace necrosim::specfun
