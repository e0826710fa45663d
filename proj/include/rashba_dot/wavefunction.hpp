#pragma once

// Bound-state coefficients, normalization, and evaluation of the radial
// components u(r), w(r) and of the spinor
//   Psi_m(r, phi) = u(r) e^{i m phi} (1, 0) + w(r) e^{i (m+1) phi} (0, 1).

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "rashba_dot/error.hpp"
#include "rashba_dot/numerics.hpp"
#include "rashba_dot/radial_basis.hpp"
#include "rashba_dot/spectral_solver.hpp"

namespace rashba_dot {

/// u = c1 f1(m) + d1 g1(m), w = c1 g1(m+1) + d1 f1(m+1) for r < 1;
/// u = c2 f2(m) + d2 g2(m), w = c2 g2(m+1) - d2 f2(m+1) for r >= 1.
struct BoundState {
  DotParameters params;
  double e = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  bool normalized = false;

  Vector4 coefficients() const { return {c1, c2, d1, d2}; }
};

struct SpinorSample {
  double r = 0.0;
  double u = 0.0;
  double w = 0.0;
};

struct RadialValues {
  double u = 0.0;
  double w = 0.0;
  double du = 0.0;
  double dw = 0.0;
};

/// Nullspace of the matching matrix at a level: unit norm, largest component
/// positive.
inline BoundState solve_coefficients(const DotParameters& params, double e, double sing_tol = 1e-8) {
  const MatchMatrix mm = match_matrix(params, e);
  const NullspaceResult ns = nullspace_4x4(mm.entries, sing_tol);
  if (ns.rank_deficiency2) {
    throw Error(ErrorCode::RankDeficiency2, "degenerate level at e = " + std::to_string(e));
  }
  BoundState s;
  s.params = params;
  s.e = e;
  s.c1 = ns.vector[0];
  s.c2 = ns.vector[1];
  s.d1 = ns.vector[2];
  s.d2 = ns.vector[3];
  return s;
}

/// u, w and their radial derivatives; r = 1 belongs to the exterior.
inline RadialValues radial_values(const BoundState& s, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidInput, "radius must be >= 0");
  const auto& p = s.params;
  if (r < 1.0) {
    const RadialBasisEval a = interior_basis(p.m, s.e, p.beta, r);
    const RadialBasisEval b = interior_basis(p.m + 1, s.e, p.beta, r);
    return {s.c1 * a.f + s.d1 * a.g, s.c1 * b.g + s.d1 * b.f, s.c1 * a.df + s.d1 * a.dg,
            s.c1 * b.dg + s.d1 * b.df};
  }
  const RadialBasisEval a = exterior_basis(p.m, s.e, p.v, p.beta, r);
  const RadialBasisEval b = exterior_basis(p.m + 1, s.e, p.v, p.beta, r);
  return {s.c2 * a.f + s.d2 * a.g, s.c2 * b.g - s.d2 * b.f, s.c2 * a.df + s.d2 * a.dg,
          s.c2 * b.dg - s.d2 * b.df};
}

namespace detail {

inline double oscillation_half_period(double beta) {
  return beta == 0.0 ? std::numeric_limits<double>::infinity() : 2.0 * std::numbers::pi / std::abs(beta);
}

}  // namespace detail

/// int_0^inf (u_a u_b + w_a w_b) r dr; the two states must share (v, beta, m).
inline double overlap(const BoundState& a, const BoundState& b, const QuadratureSpec& spec = {}) {
  if (a.params.m != b.params.m || a.params.v != b.params.v || a.params.beta != b.params.beta) {
    throw Error(ErrorCode::InvalidInput, "overlap requires states of the same (v, beta, m)");
  }
  auto density = [&](double r) {
    const RadialValues x = radial_values(a, r);
    const RadialValues y = radial_values(b, r);
    return (x.u * y.u + x.w * y.w) * r;
  };
  const double decay = tail_envelope(a.e, a.params.v, a.params.beta).decay_rate +
                       tail_envelope(b.e, b.params.v, b.params.beta).decay_rate;
  return integrate_panel(density, 0.0, 1.0, spec) +
         integrate_tail(density, 1.0, decay, spec, detail::oscillation_half_period(a.params.beta));
}

/// int_0^inf (u^2 + w^2) r dr, split into the well [0, 1] and the tail.
struct NormIntegral {
  double interior = 0.0;
  double tail = 0.0;
  double total() const { return interior + tail; }
};

inline NormIntegral norm_integral(const BoundState& s, const QuadratureSpec& spec = {}) {
  auto density = [&](double r) {
    const RadialValues x = radial_values(s, r);
    return (x.u * x.u + x.w * x.w) * r;
  };
  const double decay = 2.0 * tail_envelope(s.e, s.params.v, s.params.beta).decay_rate;
  return {integrate_panel(density, 0.0, 1.0, spec),
          integrate_tail(density, 1.0, decay, spec, detail::oscillation_half_period(s.params.beta))};
}

/// Rescales the coefficients by one positive factor so the radial norm is 1.
///
/// Unit coefficient vectors can have a density many orders below 1, where the
/// absolute quadrature tolerance lets panels through early; a second pass on
/// the rescaled state restores full relative accuracy.
inline BoundState normalize(const BoundState& s, const QuadratureSpec& spec = {}) {
  BoundState out = s;
  for (int pass = 0; pass < 2; ++pass) {
    const double total = norm_integral(out, spec).total();
    if (!(total >= 1e-300) || !std::isfinite(total)) {
      throw Error(ErrorCode::DegenerateState, "norm integral vanishes or is not finite");
    }
    const double scale = 1.0 / std::sqrt(total);
    out.c1 *= scale;
    out.c2 *= scale;
    out.d1 *= scale;
    out.d2 *= scale;
  }
  out.normalized = true;
  return out;
}

inline void require_normalized(const BoundState& s) {
  if (!s.normalized) throw Error(ErrorCode::NotNormalized, "state has not been normalized");
}

inline SpinorSample evaluate_radial(const BoundState& s, double r) {
  require_normalized(s);
  const RadialValues x = radial_values(s, r);
  return {r, x.u, x.w};
}

/// (u(r) e^{i m phi}, w(r) e^{i (m+1) phi})
inline std::array<Complex, 2> evaluate_spinor(const BoundState& s, double r, double phi) {
  const SpinorSample x = evaluate_radial(s, r);
  return {x.u * std::polar(1.0, s.params.m * phi), x.w * std::polar(1.0, (s.params.m + 1) * phi)};
}

/// Residuals of the two coupled radial equations at r, each divided by the
/// largest magnitude among its terms. Second derivatives come from the
/// ladder identities.
inline std::pair<double, double> ode_residual(const BoundState& s, double r) {
  if (r == 0.0 || r == 1.0) throw Error(ErrorCode::BoundaryPoint, "residual undefined at r = 0 and r = 1");
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidInput, "radius must be positive");
  const auto& p = s.params;
  const double m = p.m, n = p.m + 1;

  double u, du, d2u, w, dw, d2w;
  double product;   // k+ k- : +e inside, -(v - e) outside
  double coupling;  // beta in both regions
  if (r < 1.0) {
    const RadialBasisEval a = interior_basis(p.m, s.e, p.beta, r);
    const RadialBasisEval b = interior_basis(p.m + 1, s.e, p.beta, r);
    const RadialBasisSecond a2 = interior_basis_second(p.m, s.e, p.beta, r);
    const RadialBasisSecond b2 = interior_basis_second(p.m + 1, s.e, p.beta, r);
    u = s.c1 * a.f + s.d1 * a.g;
    du = s.c1 * a.df + s.d1 * a.dg;
    d2u = s.c1 * a2.d2f + s.d1 * a2.d2g;
    w = s.c1 * b.g + s.d1 * b.f;
    dw = s.c1 * b.dg + s.d1 * b.df;
    d2w = s.c1 * b2.d2g + s.d1 * b2.d2f;
    const InteriorWaveNumbers k = interior_wave_numbers(s.e, p.beta);
    product = k.k_plus * k.k_minus;
    coupling = k.k_plus - k.k_minus;
  } else {
    const RadialBasisEval a = exterior_basis(p.m, s.e, p.v, p.beta, r);
    const RadialBasisEval b = exterior_basis(p.m + 1, s.e, p.v, p.beta, r);
    const RadialBasisSecond a2 = exterior_basis_second(p.m, s.e, p.v, p.beta, r);
    const RadialBasisSecond b2 = exterior_basis_second(p.m + 1, s.e, p.v, p.beta, r);
    u = s.c2 * a.f + s.d2 * a.g;
    du = s.c2 * a.df + s.d2 * a.dg;
    d2u = s.c2 * a2.d2f + s.d2 * a2.d2g;
    w = s.c2 * b.g - s.d2 * b.f;
    dw = s.c2 * b.dg - s.d2 * b.df;
    d2w = s.c2 * b2.d2g - s.d2 * b2.d2f;
    const ExteriorWaveNumbers k = exterior_wave_numbers(s.e, p.v, p.beta);
    product = -std::real(k.k_plus * k.k_minus);
    coupling = std::real(Complex(0.0, -1.0) * (k.k_plus - k.k_minus));
  }

  const std::array<double, 5> tu{r * r * d2u, r * du, (product * r * r - m * m) * u, -coupling * r * r * dw,
                                 -coupling * n * r * w};
  const std::array<double, 5> tw{r * r * d2w, r * dw, (product * r * r - n * n) * w, coupling * r * r * du,
                                 -coupling * m * r * u};
  auto scaled = [](const std::array<double, 5>& t) {
    double sum = 0.0, big = 0.0;
    for (double x : t) {
      sum += x;
      big = std::max(big, std::abs(x));
    }
    return big == 0.0 ? 0.0 : sum / big;
  };
  return {scaled(tu), scaled(tw)};
}

}  // namespace rashba_dot
