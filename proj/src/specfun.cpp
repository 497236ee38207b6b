#include "necrosim/specfun.hpp"

#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "necrosim/errors.hpp"

namespace necrosim::specfun {
namespace {

template <class Real>
Real eps() {
  return std::numeric_limits<Real>::epsilon();
}

// Above this argument the Hankel expansion of e^{-x} I_nu is accurate to eps.
template <class Real>
Real i_series_limit() {
  using std::log;
  return -log(eps<Real>());
}

template <class Real>
Real quadrature_step_cap();
template <>
double quadrature_step_cap<double>() {
  return 0.1;
}
template <>
quad quadrature_step_cap<quad>() {
  return quad(0.05);
}

void check_order(int m) {
  if (m < 0) throw DomainError("Bessel order must be nonnegative, got " + std::to_string(m));
}

// I_nu(x) for nu in {0, 1} by the power series.
template <class Real>
Real i_series(int nu, Real x) {
  const Real q = x * x / 4;
  Real term = nu == 0 ? Real(1) : x / 2;
  Real sum = term;
  for (int k = 0; k < 10000; ++k) {
    term *= q / (Real(k + 1) * Real(k + 1 + nu));
    sum += term;
    if (term < eps<Real>() * sum / 4) break;
  }
  return sum;
}

// e^{-x} I_nu(x) for nu in {0, 1} by the Hankel expansion.
template <class Real>
Real i_asymptotic_scaled(int nu, Real x) {
  using std::abs;
  using std::sqrt;
  const Real mu = Real(4 * nu * nu);
  Real term = 1;
  Real sum = 1;
  Real previous = std::numeric_limits<Real>::max();
  for (int k = 1; k < 1000; ++k) {
    const Real odd = Real(2 * k - 1);
    const Real next = -term * (mu - odd * odd) / (Real(k) * 8 * x);
    if (abs(next) >= previous) break;
    previous = abs(next);
    term = next;
    sum += term;
    if (abs(term) < eps<Real>() * abs(sum) / 4) break;
  }
  return sum / sqrt(2 * boost::math::constants::pi<Real>() * x);
}

// K_0 and K_1 by their logarithmic series (small x).
template <class Real>
void k_series(Real x, Real& k0, Real& k1) {
  using std::log;
  const Real gamma = boost::math::constants::euler<Real>();
  const Real q = x * x / 4;
  const Real log_half = log(x / 2);

  Real t0 = 1;  // q^k / (k!)^2
  Real t1 = 1;  // q^k / (k! (k+1)!)
  Real harmonic = 0;
  Real i0 = 1;
  Real i1 = 1;
  Real sum0 = 0;
  Real sum1 = 2 * (-gamma) + 1;  // psi(1) + psi(2)
  for (int k = 1; k < 10000; ++k) {
    t0 *= q / (Real(k) * Real(k));
    t1 *= q / (Real(k) * Real(k + 1));
    harmonic += Real(1) / Real(k);
    const Real harmonic_next = harmonic + Real(1) / Real(k + 1);
    i0 += t0;
    i1 += t1;
    sum0 += t0 * harmonic;
    sum1 += t1 * (2 * (-gamma) + harmonic + harmonic_next);
    if (t0 * (harmonic + 1) < eps<Real>() * i0 / 8 && t1 * (harmonic_next + 1) < eps<Real>() / 8) break;
  }
  k0 = -(log_half + gamma) * i0 + sum0;
  k1 = 1 / x + log_half * (x / 2) * i1 - (x / 4) * sum1;
}

// e^{x} K_nu(x) = int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt, trapezoidal rule.
template <class Real>
Real k_quadrature_scaled(int nu, Real x) {
  using std::cosh;
  using std::exp;
  using std::min;
  using std::sqrt;
  const Real h = min(quadrature_step_cap<Real>(), Real(0.5) / sqrt(x));
  const Real cutoff = i_series_limit<Real>() + 6;
  Real sum = Real(0.5);
  for (int k = 1; k < 100000; ++k) {
    const Real t = h * k;
    const Real e = x * (cosh(t) - 1);
    if (e > cutoff) break;
    sum += exp(-e) * (nu == 0 ? Real(1) : cosh(t));
  }
  return h * sum;
}

template <class Real>
ScaledBessel<Real> normalized(Real mantissa, int binary_exponent, Real exp_argument) {
  using std::frexp;
  if (mantissa == 0) return {Real(0), 0, exp_argument};
  int e = 0;
  const Real m = frexp(mantissa, &e);
  return {m, binary_exponent + e, exp_argument};
}

template <class Real>
ScaledBessel<Real> scaled_i01(int nu, Real x) {
  if (x <= i_series_limit<Real>()) return normalized(i_series<Real>(nu, x), 0, Real(0));
  return normalized(i_asymptotic_scaled<Real>(nu, x), 0, x);
}

template <class Real>
ScaledBessel<Real> scaled_k01(int nu, Real x) {
  if (x <= 2) {
    Real k0;
    Real k1;
    k_series<Real>(x, k0, k1);
    return normalized(nu == 0 ? k0 : k1, 0, Real(0));
  }
  return normalized(k_quadrature_scaled<Real>(nu, x), 0, -x);
}

// I_m / I_{m-1} by the continued fraction 1/(2m/x + 1/(2(m+1)/x + ...)), modified Lentz.
template <class Real>
Real i_ratio_cf(int m, Real x) {
  using std::abs;
  const Real tiny = std::numeric_limits<Real>::min() * 16;
  auto b = [&](int j) { return Real(2 * (m + j)) / x; };
  Real h = b(0);
  Real c = h;
  Real d = 0;
  for (int j = 1; j < 100000; ++j) {
    d = b(j) + d;
    if (d == 0) d = tiny;
    c = b(j) + 1 / c;
    if (c == 0) c = tiny;
    d = 1 / d;
    const Real delta = c * d;
    h *= delta;
    if (abs(delta - 1) < eps<Real>()) break;
  }
  return 1 / h;
}

constexpr int kRescaleBits = 400;

template <class Real>
ScaledBessel<Real> scaled_i_impl(int m, Real x) {
  using std::ldexp;
  check_order(m);
  if (!(x >= 0)) throw DomainError("bessel_i requires x >= 0");
  if (x == 0) return {Real(m == 0 ? 0.5 : 0.0), m == 0 ? 1 : 0, Real(0)};
  if (m <= 1) return scaled_i01<Real>(m, x);

  const Real big = ldexp(Real(1), kRescaleBits);
  const Real r = i_ratio_cf<Real>(m, x);
  Real y_next = 1;      // y_{k+1}
  Real y = 1 / r;       // y_k, starting at k = m - 1
  int shift = 0;
  for (int k = m - 1; k >= 1; --k) {
    const Real y_prev = y_next + (Real(2 * k) / x) * y;
    y_next = y;
    y = y_prev;
    if (y > big) {
      y = ldexp(y, -kRescaleBits);
      y_next = ldexp(y_next, -kRescaleBits);
      shift += kRescaleBits;
    }
  }
  const ScaledBessel<Real> i0 = scaled_i01<Real>(0, x);
  return normalized(i0.mantissa / y, i0.binary_exponent - shift, i0.exp_argument);
}

template <class Real>
ScaledBessel<Real> scaled_k_impl(int m, Real x) {
  using std::ldexp;
  check_order(m);
  if (!(x > 0)) throw DomainError("bessel_k requires x > 0");
  if (m <= 1) return scaled_k01<Real>(m, x);

  // Both start values share exp_argument; align their binary exponents.
  const ScaledBessel<Real> k0 = scaled_k01<Real>(0, x);
  const ScaledBessel<Real> k1 = scaled_k01<Real>(1, x);
  Real prev = ldexp(k0.mantissa, k0.binary_exponent - k1.binary_exponent);
  Real cur = k1.mantissa;
  int shift = k1.binary_exponent;
  const Real big = ldexp(Real(1), kRescaleBits);
  for (int k = 1; k < m; ++k) {
    const Real next = prev + (Real(2 * k) / x) * cur;
    prev = cur;
    cur = next;
    if (cur > big) {
      cur = ldexp(cur, -kRescaleBits);
      prev = ldexp(prev, -kRescaleBits);
      shift += kRescaleBits;
    }
  }
  return normalized(cur, shift, k1.exp_argument);
}

// (a + b) / 2 for two values with the same exp_argument.
template <class Real>
ScaledBessel<Real> half_sum(const ScaledBessel<Real>& a, const ScaledBessel<Real>& b) {
  using std::ldexp;
  if (a.mantissa == 0) return normalized(b.mantissa, b.binary_exponent - 1, b.exp_argument);
  if (b.mantissa == 0) return normalized(a.mantissa, a.binary_exponent - 1, a.exp_argument);
  const int top = std::max(a.binary_exponent, b.binary_exponent);
  const Real sum = ldexp(a.mantissa, a.binary_exponent - top) + ldexp(b.mantissa, b.binary_exponent - top);
  return normalized(sum, top - 1, a.exp_argument);
}

template <class Real>
ScaledBessel<Real> scaled_i_prime_impl(int m, Real x) {
  check_order(m);
  if (m == 0) return scaled_i_impl<Real>(1, x);
  return half_sum(scaled_i_impl<Real>(m - 1, x), scaled_i_impl<Real>(m + 1, x));
}

template <class Real>
ScaledBessel<Real> scaled_k_prime_impl(int m, Real x) {
  check_order(m);
  if (m == 0) return scaled_k_impl<Real>(1, x);
  return half_sum(scaled_k_impl<Real>(m - 1, x), scaled_k_impl<Real>(m + 1, x));
}

// Converts to Real; on underflow either throws or returns zero.
template <class Real>
Real materialize_impl(const ScaledBessel<Real>& s, bool underflow_is_error) {
  using std::abs;
  using std::exp;
  using std::floor;
  using std::isfinite;
  using std::ldexp;
  using std::log;
  if (s.mantissa == 0) return Real(0);
  const Real ln2 = boost::math::constants::ln_two<Real>();
  const Real log_max = log(std::numeric_limits<Real>::max());
  const Real log_min = log(std::numeric_limits<Real>::min());
  const Real magnitude = log(abs(s.mantissa)) + Real(s.binary_exponent) * ln2 + s.exp_argument;
  if (!(magnitude < log_max)) throw RangeError("Bessel value overflows the floating-point range");
  if (magnitude < log_min) {
    if (underflow_is_error) throw RangeError("Bessel value underflows the floating-point range");
    return Real(0);
  }
  Real v;
  if (abs(s.exp_argument) < log_max / 2) {
    v = ldexp(s.mantissa * exp(s.exp_argument), s.binary_exponent);
  } else {
    const Real n = floor(s.exp_argument / ln2);
    const Real f = s.exp_argument - n * ln2;
    v = ldexp(s.mantissa * exp(f), s.binary_exponent + static_cast<int>(n));
  }
  if (!isfinite(v)) throw RangeError("Bessel value overflows the floating-point range");
  return v;
}

}  // namespace

double bessel_i(int m, double x) { return materialize_impl(scaled_i_impl<double>(m, x), true); }
quad bessel_i(int m, quad x) { return materialize_impl(scaled_i_impl<quad>(m, x), true); }

double bessel_k(int m, double x) { return materialize_impl(scaled_k_impl<double>(m, x), true); }
quad bessel_k(int m, quad x) { return materialize_impl(scaled_k_impl<quad>(m, x), true); }

double bessel_i_prime(int m, double x) { return materialize_impl(scaled_i_prime_impl<double>(m, x), true); }
quad bessel_i_prime(int m, quad x) { return materialize_impl(scaled_i_prime_impl<quad>(m, x), true); }

double bessel_k_prime(int m, double x) { return -materialize_impl(scaled_k_prime_impl<double>(m, x), true); }
quad bessel_k_prime(int m, quad x) { return -materialize_impl(scaled_k_prime_impl<quad>(m, x), true); }

double bessel_i_scaled(int m, double x) {
  ScaledBessel<double> s = scaled_i_impl<double>(m, x);
  s.exp_argument -= x;
  return materialize_impl(s, false);
}

double bessel_k_scaled(int m, double x) {
  ScaledBessel<double> s = scaled_k_impl<double>(m, x);
  s.exp_argument += x;
  return materialize_impl(s, false);
}

BesselEval evaluate(int m, double x) { return {m, x, bessel_i(m, x), bessel_k(m, x)}; }

ScaledBessel<double> scaled_i(int m, double x) { return scaled_i_impl<double>(m, x); }
ScaledBessel<double> scaled_k(int m, double x) { return scaled_k_impl<double>(m, x); }
ScaledBessel<double> scaled_i_prime(int m, double x) { return scaled_i_prime_impl<double>(m, x); }
ScaledBessel<double> scaled_k_prime(int m, double x) { return scaled_k_prime_impl<double>(m, x); }

double ratio(const ScaledBessel<double>& a, const ScaledBessel<double>& b) {
  if (b.mantissa == 0) throw RangeError("division by a zero Bessel value");
  const ScaledBessel<double> q{a.mantissa / b.mantissa, a.binary_exponent - b.binary_exponent,
                               a.exp_argument - b.exp_argument};
  return materialize_impl(q, false);
}

double materialize(const ScaledBessel<double>& s) { return materialize_impl(s, true); }

}  // namespace necrosim::specfun
