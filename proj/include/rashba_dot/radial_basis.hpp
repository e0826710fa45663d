#pragma once

// Radial solutions of the coupled spinor equations inside (r < 1) and outside
// (r > 1) a circular well of dimensionless depth v with Rashba strength beta.
//
// Inside, the spinor pairs (J_m(k r), +/-J_{m+1}(k r)) with k = k-/k+ solve
// the free equations; f1 and g1 are their half-sum and half-difference.
// Outside, the pairs (K_m(k r), +/-i K_{m+1}(k r)) with complex conjugate
// k+/k- decay; f2 and g2 are the real and imaginary parts of K_m(k+ r).

#include <cmath>
#include <numbers>
#include <string>

#include "rashba_dot/error.hpp"
#include "rashba_dot/numerics.hpp"
#include "rashba_dot/special_functions.hpp"

namespace rashba_dot {

/// Dimensionless problem instance: well depth v > 0, Rashba strength beta
/// (any sign) and the angular number m of the spin-up component.
struct DotParameters {
  double v = 0.0;
  double beta = 0.0;
  int m = 0;

  double window_lower() const { return -0.25 * beta * beta; }
  double window_upper() const { return v - 0.25 * beta * beta; }

  void validate() const {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidInput, "well depth v must be positive and finite");
    }
    if (!std::isfinite(beta)) throw Error(ErrorCode::InvalidInput, "beta must be finite");
    if (std::abs(m) > kBesselOrderCap || std::abs(m + 1) > kBesselOrderCap) {
      throw Error(ErrorCode::OrderCapExceeded, "angular number m out of range");
    }
  }

  bool in_window(double e) const { return e > window_lower() && e < window_upper(); }
};

struct InteriorWaveNumbers {
  double k_plus = 0.0;
  double k_minus = 0.0;
};

struct ExteriorWaveNumbers {
  Complex k_plus;
  Complex k_minus;  ///< conj(k_plus)
};

/// Values and radial derivatives of an (f, g) basis pair at one radius.
struct RadialBasisEval {
  double f = 0.0;
  double g = 0.0;
  double df = 0.0;
  double dg = 0.0;
};

struct RadialBasisSecond {
  double d2f = 0.0;
  double d2g = 0.0;
};

/// Asymptotic form of the exterior pair at large r:
/// f2 ~ A e^{-decay r} / sqrt(r) cos(phase_rate r + gamma/2),
/// g2 ~ -A e^{-decay r} / sqrt(r) sin(phase_rate r + gamma/2).
struct TailEnvelope {
  double amplitude = 0.0;
  double decay_rate = 0.0;
  double phase_rate = 0.0;
  double gamma = 0.0;

  double envelope(double r) const { return amplitude * std::exp(-decay_rate * r) / std::sqrt(r); }
  double phase(double r) const { return phase_rate * r + 0.5 * gamma; }
  double f(double r) const { return envelope(r) * std::cos(phase(r)); }
  double g(double r) const { return -envelope(r) * std::sin(phase(r)); }
};

/// k+- = sqrt(e + beta^2/4) +- beta/2, real for e above the window bottom.
inline InteriorWaveNumbers interior_wave_numbers(double e, double beta) {
  const double shift = 0.25 * beta * beta;
  if (!(e > -shift)) {
    throw Error(ErrorCode::BelowWindow, "e = " + std::to_string(e) + " <= -beta^2/4");
  }
  const double s = std::sqrt(e + shift);
  return {s + 0.5 * beta, s - 0.5 * beta};
}

/// k+- = sqrt(v - e - beta^2/4) +- i beta/2.
inline ExteriorWaveNumbers exterior_wave_numbers(double e, double v, double beta) {
  const double gap = v - e - 0.25 * beta * beta;
  if (!(gap > 0.0)) {
    throw Error(ErrorCode::AboveWindow, "e = " + std::to_string(e) + " >= v - beta^2/4");
  }
  const double q = std::sqrt(gap);
  return {Complex(q, 0.5 * beta), Complex(q, -0.5 * beta)};
}

inline RadialBasisEval interior_basis(int m, double e, double beta, double r) {
  if (!(r >= 0.0)) throw Error(ErrorCode::InvalidInput, "radius must be non-negative");
  const InteriorWaveNumbers k = interior_wave_numbers(e, beta);
  const double jm = bessel_j(m, k.k_minus * r);
  const double jp = bessel_j(m, k.k_plus * r);
  const double djm = bessel_j_radial_derivative(m, k.k_minus, r);
  const double djp = bessel_j_radial_derivative(m, k.k_plus, r);
  return {0.5 * (jm + jp), 0.5 * (jm - jp), 0.5 * (djm + djp), 0.5 * (djm - djp)};
}

inline RadialBasisSecond interior_basis_second(int m, double e, double beta, double r) {
  const InteriorWaveNumbers k = interior_wave_numbers(e, beta);
  const double a = bessel_j_radial_second_derivative(m, k.k_minus, r);
  const double b = bessel_j_radial_second_derivative(m, k.k_plus, r);
  return {0.5 * (a + b), 0.5 * (a - b)};
}

namespace detail {

inline RadialBasisEval exterior_basis_impl(int m, double e, double v, double beta, double r, bool scaled) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidInput, "exterior radius must be positive");
  const ExteriorWaveNumbers k = exterior_wave_numbers(e, v, beta);
  const Complex z = k.k_plus * r;
  Complex value = scaled ? bessel_k_scaled(m, z) : bessel_k_complex(m, z);
  Complex deriv = bessel_k_radial_derivative(m, k.k_plus, r, scaled);
  if (scaled) {
    // e^{z} K carries the phase e^{i Im z}; keep only the real factor e^{Re z}.
    const Complex unphase = std::polar(1.0, -z.imag());
    value *= unphase;
    deriv *= unphase;
  }
  return {value.real(), value.imag(), deriv.real(), deriv.imag()};
}

}  // namespace detail

/// f2 = Re K_m(k+ r), g2 = Im K_m(k+ r) and their radial derivatives.
inline RadialBasisEval exterior_basis(int m, double e, double v, double beta, double r) {
  return detail::exterior_basis_impl(m, e, v, beta, r, false);
}

/// exterior_basis multiplied by e^{r sqrt(v - e - beta^2/4)}; stays finite
/// for deep wells where K itself underflows.
inline RadialBasisEval exterior_basis_scaled(int m, double e, double v, double beta, double r) {
  return detail::exterior_basis_impl(m, e, v, beta, r, true);
}

inline RadialBasisSecond exterior_basis_second(int m, double e, double v, double beta, double r) {
  const ExteriorWaveNumbers k = exterior_wave_numbers(e, v, beta);
  const Complex d2 = bessel_k_radial_second_derivative(m, k.k_plus, r);
  return {d2.real(), d2.imag()};
}

inline TailEnvelope tail_envelope(double e, double v, double beta) {
  const ExteriorWaveNumbers k = exterior_wave_numbers(e, v, beta);
  TailEnvelope t;
  t.decay_rate = k.k_plus.real();
  t.phase_rate = 0.5 * beta;
  t.gamma = std::atan2(0.5 * beta, t.decay_rate);
  t.amplitude = std::sqrt(0.5 * std::numbers::pi) / std::sqrt(std::sqrt(v - e));
  return t;
}

}  // namespace rashba_dot
