#pragma once

// Bessel functions of the first kind J_n(x) for real x and modified Bessel
// functions of the second kind K_n(z) for complex z with Re z > 0, integer
// orders only, plus radial derivatives of J_n(k r) and K_n(k r) taken
// through the ladder identities.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <string>

#include "rashba_dot/error.hpp"
#include "rashba_dot/numerics.hpp"

namespace rashba_dot {

inline constexpr int kBesselOrderCap = 64;
inline constexpr double kBesselJMaxArgument = 200.0;
inline constexpr double kBesselKMaxArgument = 1.0e4;

namespace detail {

// Internal evaluations may step two orders past the public cap (ladder
// derivatives of second order).
inline constexpr int kInternalOrderCap = kBesselOrderCap + 2;

inline void check_order(int n, int cap) {
  if (std::abs(n) > cap) {
    throw Error(ErrorCode::OrderCapExceeded,
                "Bessel order " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  }
}

// J_n(x) for n >= 0, 0 < x <= 12 by the power series in extended precision.
inline double bessel_j_series(int n, double x) {
  const long double half = 0.5L * x;
  const long double q = -half * half;
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term *= half / i;
  long double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<long double>(k) * (n + k));
    sum += term;
    if (k > half && std::abs(term) <= 1e-21L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

// J_n(x) for n >= 0, x > 0 by Miller's backward recurrence normalized with
// J_0 + 2 sum_k J_2k = 1.
inline double bessel_j_miller(int n, double x) {
  const double top = std::max(static_cast<double>(n), x);
  int start = static_cast<int>(top + 40.0 + 10.0 * std::cbrt(top));
  start += start % 2;

  const long double two_over_x = 2.0L / x;
  long double next = 0.0L;     // J_{j+1}, unnormalized
  long double current = 1e-30L;  // J_j
  long double value = (start == n) ? current : 0.0L;
  long double norm = 2.0L * current;  // start is even
  for (int j = start; j > 0; --j) {
    const long double prev = j * two_over_x * current - next;
    next = current;
    current = prev;  // now J_{j-1}
    if (j - 1 == n) value = current;
    if ((j - 1) % 2 == 0) norm += (j - 1 == 0 ? 1.0L : 2.0L) * current;
    if (std::abs(current) > 1e250L) {
      current *= 1e-250L;
      next *= 1e-250L;
      value *= 1e-250L;
      norm *= 1e-250L;
    }
  }
  return static_cast<double>(value / norm);
}

inline double bessel_j_unchecked(int n, double x) {
  if (!std::isfinite(x) || std::abs(x) > kBesselJMaxArgument) {
    throw Error(ErrorCode::ArgumentOutOfRange,
                "J_n argument " + std::to_string(x) + " outside |x| <= 200");
  }
  double sign = 1.0;
  if (n < 0) {
    n = -n;
    if (n % 2 != 0) sign = -sign;
  }
  if (x < 0.0) {
    x = -x;
    if (n % 2 != 0) sign = -sign;
  }
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  return sign * (x <= 12.0 ? bessel_j_series(n, x) : bessel_j_miller(n, x));
}

// e^z K_0(z) and e^z K_1(z) for Re z > 0, Im z >= 0.
struct ScaledK01 {
  Complex k0;
  Complex k1;
};

inline ScaledK01 bessel_k01_series(Complex z) {
  constexpr double euler_gamma = std::numbers::egamma;
  const Complex t = 0.25 * z * z;
  const Complex lg = std::log(0.5 * z);
  Complex term0 = 1.0;  // t^k / (k!)^2
  Complex term1 = 1.0;  // t^k / (k! (k+1)!)
  Complex i0 = 0.0, s0 = 0.0, i1 = 0.0, s1 = 0.0;
  double psi = -euler_gamma;  // psi(k+1)
  for (int k = 0; k < 200; ++k) {
    const double psi_next = psi + 1.0 / (k + 1);
    i0 += term0;
    s0 += psi * term0;
    i1 += term1;
    s1 += (psi + psi_next) * term1;
    term0 *= t / (static_cast<double>(k + 1) * (k + 1));
    term1 *= t / (static_cast<double>(k + 1) * (k + 2));
    psi = psi_next;
    if (k > 2 && std::abs(term0) < 1e-18 * std::abs(i0) && std::abs(term1) < 1e-18 * std::abs(i1)) {
      break;
    }
  }
  const Complex k0 = -lg * i0 + s0;
  const Complex k1 = 1.0 / z + lg * (0.5 * z * i1) - 0.25 * z * s1;
  const Complex scale = std::exp(z);
  return {k0 * scale, k1 * scale};
}

// Steed's continued fraction (Temme's CF2) for order 0 and 1.
inline ScaledK01 bessel_k01_continued_fraction(Complex z) {
  constexpr double eps = 1e-17;
  constexpr int max_iterations = 200000;
  const double a1 = 0.25;
  Complex b = 2.0 * (1.0 + z);
  Complex d = 1.0 / b;
  Complex h = d, delh = d;
  Complex q1 = 0.0, q2 = 1.0;
  double a = -a1;
  double c = a1;
  Complex q = a1;
  Complex s = 1.0 + q * delh;
  int i = 2;
  for (; i <= max_iterations; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const Complex qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const Complex dels = q * delh;
    s += dels;
    if (std::abs(dels) < eps * std::abs(s)) break;
  }
  if (i > max_iterations) {
    throw Error(ErrorCode::NoConvergence, "K_n continued fraction did not converge");
  }
  h *= a1;
  const Complex k0 = std::sqrt(std::numbers::pi / (2.0 * z)) / s;
  const Complex k1 = k0 * (z + 0.5 - h) / z;
  return {k0, k1};
}

// e^z K_n(z) for n >= 0, Re z > 0, Im z >= 0.
inline Complex bessel_k_scaled_upper(int n, Complex z) {
  const ScaledK01 base = std::abs(z) <= 2.0 ? bessel_k01_series(z) : bessel_k01_continued_fraction(z);
  if (n == 0) return base.k0;
  Complex prev = base.k0, current = base.k1;
  const Complex two_over_z = 2.0 / z;
  for (int k = 1; k < n; ++k) {
    const Complex next = prev + static_cast<double>(k) * two_over_z * current;
    prev = current;
    current = next;
  }
  return current;
}

inline void check_k_argument(Complex z) {
  if (!(z.real() > 0.0) || !std::isfinite(z.imag())) {
    throw Error(ErrorCode::DomainError, "K_n(z) requires Re z > 0");
  }
  if (std::abs(z) > kBesselKMaxArgument) {
    throw Error(ErrorCode::ArgumentOutOfRange, "K_n argument modulus exceeds 1e4");
  }
}

// Evaluated in the closed upper half-plane and conjugated otherwise, so
// K_n(conj z) == conj(K_n(z)) holds bit for bit.
inline Complex bessel_k_unchecked(int n, Complex z, bool scaled) {
  check_order(n, kInternalOrderCap);
  check_k_argument(z);
  n = std::abs(n);
  const bool lower = z.imag() < 0.0;
  const Complex zu = lower ? std::conj(z) : z;
  Complex value = bessel_k_scaled_upper(n, zu);
  if (!scaled) value *= std::exp(-zu);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw Error(ErrorCode::ArgumentOutOfRange, "K_n overflow for order " + std::to_string(n));
  }
  return lower ? std::conj(value) : value;
}

}  // namespace detail

/// J_n(x), |n| <= 64, |x| <= 200. Negative orders and arguments go through the
/// reflections J_{-n}(x) = J_n(-x) = (-1)^n J_n(x).
inline double bessel_j(int n, double x) {
  detail::check_order(n, kBesselOrderCap);
  return detail::bessel_j_unchecked(n, x);
}

/// K_n(z) for Re z > 0, |z| <= 1e4. K_{-n} = K_n.
inline Complex bessel_k_complex(int n, Complex z) {
  detail::check_order(n, kBesselOrderCap);
  return detail::bessel_k_unchecked(n, z, false);
}

/// e^z K_n(z); finite where K_n itself underflows.
inline Complex bessel_k_scaled(int n, Complex z) {
  detail::check_order(n, kBesselOrderCap);
  return detail::bessel_k_unchecked(n, z, true);
}

/// d/dr J_n(k r) = k (J_{n-1}(k r) - J_{n+1}(k r)) / 2.
inline double bessel_j_radial_derivative(int n, double k, double r) {
  detail::check_order(n, kBesselOrderCap);
  if (k == 0.0) return 0.0;
  const double x = k * r;
  return 0.5 * k * (detail::bessel_j_unchecked(n - 1, x) - detail::bessel_j_unchecked(n + 1, x));
}

/// d^2/dr^2 J_n(k r) by applying the ladder identities twice.
inline double bessel_j_radial_second_derivative(int n, double k, double r) {
  detail::check_order(n, kBesselOrderCap);
  if (k == 0.0) return 0.0;
  const double x = k * r;
  return 0.25 * k * k *
         (detail::bessel_j_unchecked(n - 2, x) - 2.0 * detail::bessel_j_unchecked(n, x) +
          detail::bessel_j_unchecked(n + 2, x));
}

/// d/dr K_n(k r) = -k (K_{n-1}(k r) + K_{n+1}(k r)) / 2.
inline Complex bessel_k_radial_derivative(int n, Complex k, double r, bool scaled = false) {
  detail::check_order(n, kBesselOrderCap);
  const Complex z = k * r;
  return -0.5 * k * (detail::bessel_k_unchecked(n - 1, z, scaled) + detail::bessel_k_unchecked(n + 1, z, scaled));
}

inline Complex bessel_k_radial_second_derivative(int n, Complex k, double r) {
  detail::check_order(n, kBesselOrderCap);
  const Complex z = k * r;
  return 0.25 * k * k *
         (detail::bessel_k_unchecked(n - 2, z, false) + 2.0 * detail::bessel_k_unchecked(n, z, false) +
          detail::bessel_k_unchecked(n + 2, z, false));
}

/// J_n(x) / x^p for p <= |n|, finite at x = 0. Used to strip the trivial
/// x^p zero of J_n(k r) as k -> 0.
inline double bessel_j_over_power(int n, double x, int p) {
  detail::check_order(n, detail::kInternalOrderCap);
  if (p <= 0) return detail::bessel_j_unchecked(n, x) * std::pow(x, -p);
  if (p > std::abs(n)) {
    throw Error(ErrorCode::InvalidInput, "bessel_j_over_power requires p <= |n|");
  }
  if (std::abs(x) >= 0.5) return detail::bessel_j_unchecked(n, x) / std::pow(x, p);

  double sign = 1.0;
  if (n < 0) {
    n = -n;
    if (n % 2 != 0) sign = -1.0;
  }
  // sum_k (-1)^k (x/2)^(2k) / (k! (n+k)!) * x^(n-p) / 2^n
  long double lead = 1.0L;
  for (int i = 1; i <= n; ++i) lead *= 0.5L / i;
  lead *= std::pow(static_cast<long double>(x), n - p);
  const long double q = -0.25L * x * x;
  long double term = lead, sum = lead;
  for (int k = 1; k < 100; ++k) {
    term *= q / (static_cast<long double>(k) * (n + k));
    sum += term;
    if (std::abs(term) <= 1e-21L * std::abs(sum)) break;
  }
  return sign * static_cast<double>(sum);
}

}  // namespace rashba_dot
