#pragma once

// Problem-agnostic numerical kernels: bracketed root refinement, 4x4
// determinants and nullspaces, and Gauss-Legendre quadrature over finite
// panels and exponentially decaying tails.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "rashba_dot/error.hpp"

namespace rashba_dot {

using Complex = std::complex<double>;

using Vector4 = std::array<double, 4>;
using Matrix4 = std::array<Vector4, 4>;

// ---------------------------------------------------------------------------
// Root refinement
// ---------------------------------------------------------------------------

/// An interval [lo, hi] on which a continuous function changes sign.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;

  bool valid() const { return lo < hi && f_lo * f_hi < 0.0; }
};

template <class F>
Bracket make_bracket(F&& f, double lo, double hi) {
  return Bracket{lo, hi, f(lo), f(hi)};
}

/// Brent's method (bisection safeguarding inverse-quadratic / secant steps).
///
/// On return the sign change of `f` is confined to an interval of width at
/// most `tol` (plus a few ulps of the root) containing the returned point.
template <class F>
double refine_root(F&& f, const Bracket& bracket, double tol, int max_iterations = 200) {
  if (!(bracket.lo < bracket.hi) || !(bracket.f_lo * bracket.f_hi < 0.0)) {
    throw Error(ErrorCode::BracketInvalid,
                "f(lo) and f(hi) must have strictly opposite signs on lo < hi");
  }
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "root tolerance must be positive");
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double a = bracket.lo, b = bracket.hi;
  double fa = bracket.f_lo, fb = bracket.f_hi;
  double c = a, fc = fa;
  double d = b - a, e = d;

  for (int iter = 0; iter < max_iterations; ++iter) {
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
    fb = f(b);
  }
  throw Error(ErrorCode::NoConvergence,
              "root refinement did not converge in " + std::to_string(max_iterations) + " iterations");
}

// ---------------------------------------------------------------------------
// Small dense linear algebra
// ---------------------------------------------------------------------------

inline double frobenius_norm(const Matrix4& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double x : row) s += x * x;
  return std::sqrt(s);
}

inline double euclidean_norm(const Vector4& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
}

inline Vector4 multiply(const Matrix4& m, const Vector4& x) {
  Vector4 y{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) y[i] += m[i][j] * x[j];
  return y;
}

/// Determinant by LU decomposition with partial pivoting.
inline double determinant_4x4(Matrix4 a) {
  double det = 1.0;
  for (std::size_t k = 0; k < 4; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < 4; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    if (a[p][k] == 0.0) return 0.0;
    if (p != k) {
      std::swap(a[p], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (std::size_t i = k + 1; i < 4; ++i) {
      const double l = a[i][k] / a[k][k];
      for (std::size_t j = k + 1; j < 4; ++j) a[i][j] -= l * a[k][j];
    }
  }
  return det;
}

struct NullspaceResult {
  Vector4 vector{};               ///< unit Euclidean norm
  bool rank_deficiency2 = false;  ///< two pivots below threshold: kernel dimension >= 2
  double pivot_ratio = 0.0;       ///< |last pivot| / |first pivot| after equilibration
};

/// Kernel vector of a numerically singular 4x4 matrix.
///
/// Columns are equilibrated to unit norm, then Gaussian elimination with full
/// pivoting is run; the last pivot must fall below `sing_tol` relative to the
/// first. The returned vector has unit norm and its first component of largest
/// magnitude is positive.
inline NullspaceResult nullspace_4x4(const Matrix4& m, double sing_tol = 1e-8) {
  Matrix4 a = m;
  Vector4 col_scale{1.0, 1.0, 1.0, 1.0};
  for (std::size_t j = 0; j < 4; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) s += a[i][j] * a[i][j];
    s = std::sqrt(s);
    if (s > 0.0) {
      col_scale[j] = s;
      for (std::size_t i = 0; i < 4; ++i) a[i][j] /= s;
    }
  }

  std::array<std::size_t, 4> perm{0, 1, 2, 3};  // column permutation
  for (std::size_t k = 0; k < 4; ++k) {
    std::size_t pi = k, pj = k;
    double best = -1.0;
    for (std::size_t i = k; i < 4; ++i)
      for (std::size_t j = k; j < 4; ++j)
        if (std::abs(a[i][j]) > best) {
          best = std::abs(a[i][j]);
          pi = i;
          pj = j;
        }
    std::swap(a[pi], a[k]);
    if (pj != k) {
      for (auto& row : a) std::swap(row[pj], row[k]);
      std::swap(perm[pj], perm[k]);
    }
    if (a[k][k] == 0.0) continue;
    for (std::size_t i = k + 1; i < 4; ++i) {
      const double l = a[i][k] / a[k][k];
      if (l == 0.0) continue;
      for (std::size_t j = k; j < 4; ++j) a[i][j] -= l * a[k][j];
    }
  }

  const double lead = std::abs(a[0][0]);
  if (lead == 0.0) {
    throw Error(ErrorCode::InvalidInput, "nullspace of the zero matrix is not unique");
  }
  NullspaceResult result;
  result.pivot_ratio = std::abs(a[3][3]) / lead;
  if (result.pivot_ratio > sing_tol) {
    throw Error(ErrorCode::NotSingular,
                "last pivot ratio " + std::to_string(result.pivot_ratio) + " exceeds " +
                    std::to_string(sing_tol));
  }
  result.rank_deficiency2 = std::abs(a[2][2]) <= sing_tol * lead;

  Vector4 y{};
  y[3] = 1.0;
  for (int i = 2; i >= 0; --i) {
    const auto ui = static_cast<std::size_t>(i);
    if (std::abs(a[ui][ui]) <= sing_tol * lead) {
      y[ui] = 0.0;
      continue;
    }
    double s = 0.0;
    for (std::size_t j = ui + 1; j < 4; ++j) s += a[ui][j] * y[j];
    y[ui] = -s / a[ui][ui];
  }

  Vector4 x{};
  for (std::size_t k = 0; k < 4; ++k) x[perm[k]] = y[k] / col_scale[perm[k]];
  const double norm = euclidean_norm(x);
  std::size_t big = 0;
  for (std::size_t i = 1; i < 4; ++i)
    if (std::abs(x[i]) > std::abs(x[big])) big = i;
  const double sign = x[big] < 0.0 ? -1.0 : 1.0;
  for (auto& xi : x) xi *= sign / norm;
  result.vector = x;
  return result;
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureSpec {
  int panel_order = 16;  ///< Gauss-Legendre points per panel
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;

  void validate() const {
    if (panel_order < 2) throw Error(ErrorCode::InvalidInput, "panel_order must be >= 2");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw Error(ErrorCode::InvalidInput, "quadrature tolerances must be positive");
  }
};

struct GaussLegendreRule {
  std::vector<double> nodes;    ///< on [-1, 1]
  std::vector<double> weights;
};

/// Nodes and weights by Newton iteration on P_n.
inline GaussLegendreRule gauss_legendre(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -z;
    rule.nodes[hi] = z;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  return rule;
}

namespace detail {

template <class F>
double apply_rule(F& f, const GaussLegendreRule& rule, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

template <class F>
double adaptive_panel(F& f, const GaussLegendreRule& rule, double a, double b, double whole,
                      const QuadratureSpec& spec, int depth, int max_depth) {
  const double mid = 0.5 * (a + b);
  const double left = apply_rule(f, rule, a, mid);
  const double right = apply_rule(f, rule, mid, b);
  const double refined = left + right;
  if (std::abs(refined - whole) <= std::max(spec.rel_tol * std::abs(refined), spec.abs_tol)) {
    return refined;
  }
  if (depth >= max_depth) {
    throw Error(ErrorCode::NoConvergence, "adaptive quadrature exceeded subdivision depth");
  }
  return adaptive_panel(f, rule, a, mid, left, spec, depth + 1, max_depth) +
         adaptive_panel(f, rule, mid, b, right, spec, depth + 1, max_depth);
}

}  // namespace detail

/// Adaptive Gauss-Legendre on [a, b]: a panel is accepted when the sum over
/// its two halves agrees with the whole-panel estimate to
/// max(rel_tol*|I|, abs_tol).
template <class F>
double integrate_panel(F&& f, double a, double b, const QuadratureSpec& spec = {},
                       int max_depth = 40) {
  spec.validate();
  if (!(a < b)) throw Error(ErrorCode::InvalidInput, "integrate_panel requires a < b");
  const GaussLegendreRule rule = gauss_legendre(spec.panel_order);
  const double whole = detail::apply_rule(f, rule, a, b);
  return detail::adaptive_panel(f, rule, a, b, whole, spec, 0, max_depth);
}

/// Integral over [a, inf) of a function bounded by C*exp(-decay_rate*r).
///
/// Panels of width 5/decay_rate are summed until one contributes less than
/// abs_tol. When `max_subpanel` is finite each panel is split into pieces no
/// wider than it (half an oscillation period for oscillating integrands).
template <class F>
double integrate_tail(F&& f, double a, double decay_rate, const QuadratureSpec& spec = {},
                      double max_subpanel = std::numeric_limits<double>::infinity(),
                      int max_panels = 50) {
  spec.validate();
  if (!(decay_rate > 0.0)) throw Error(ErrorCode::InvalidInput, "decay_rate must be positive");
  const double width = 5.0 / decay_rate;
  const int pieces = std::isfinite(max_subpanel) && max_subpanel > 0.0
                         ? std::max(1, static_cast<int>(std::ceil(width / max_subpanel)))
                         : 1;
  const double step = width / pieces;

  double total = 0.0;
  for (int panel = 0; panel < max_panels; ++panel) {
    const double start = a + panel * width;
    double contribution = 0.0;
    for (int k = 0; k < pieces; ++k) {
      const double lo = start + k * step;
      const double hi = (k + 1 == pieces) ? start + width : lo + step;
      contribution += integrate_panel(f, lo, hi, spec);
    }
    total += contribution;
    if (std::abs(contribution) < spec.abs_tol) return total;
  }
  throw Error(ErrorCode::DecayViolation,
              "tail integrand did not decay below abs_tol within " + std::to_string(max_panels) +
                  " panels");
}

}  // namespace rashba_dot
