#pragma once

// Matching matrix at the well boundary r = 1, its determinant, and the
// enumeration of bound-state energies inside the window
// -beta^2/4 < e < v - beta^2/4.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <vector>

#include "rashba_dot/error.hpp"
#include "rashba_dot/numerics.hpp"
#include "rashba_dot/radial_basis.hpp"
#include "rashba_dot/special_functions.hpp"

namespace rashba_dot {

/// Rows: continuity of u, u', w, w' at r = 1. Columns: c1, c2, d1, d2.
struct MatchMatrix {
  Matrix4 entries{};
  DotParameters params;
  double e = 0.0;
};

inline void require_in_window(const DotParameters& params, double e) {
  if (!params.in_window(e)) {
    throw Error(ErrorCode::WindowViolation, "energy " + std::to_string(e) +
                                                " outside the open window (-beta^2/4, v - beta^2/4)");
  }
}

inline MatchMatrix match_matrix(const DotParameters& params, double e) {
  params.validate();
  require_in_window(params, e);
  const int m = params.m;
  const RadialBasisEval in_m = interior_basis(m, e, params.beta, 1.0);
  const RadialBasisEval in_n = interior_basis(m + 1, e, params.beta, 1.0);
  const RadialBasisEval out_m = exterior_basis(m, e, params.v, params.beta, 1.0);
  const RadialBasisEval out_n = exterior_basis(m + 1, e, params.v, params.beta, 1.0);

  MatchMatrix mm{.params = params, .e = e};
  mm.entries = {{
      {in_m.f, -out_m.f, in_m.g, -out_m.g},
      {in_m.df, -out_m.df, in_m.dg, -out_m.dg},
      {in_n.g, -out_n.g, in_n.f, out_n.f},
      {in_n.dg, -out_n.dg, in_n.df, out_n.df},
  }};
  return mm;
}

inline double spectral_determinant(const DotParameters& params, double e) {
  return determinant_4x4(match_matrix(params, e).entries);
}

/// The two diagonal 2x2 blocks of the matching matrix. At beta = 0 the matrix
/// is block diagonal and its determinant is upper * lower.
struct ChannelDeterminants {
  double upper = 0.0;  ///< spin-up channel, order m
  double lower = 0.0;  ///< spin-down channel, order m + 1
};

inline ChannelDeterminants spin_channel_determinants(const DotParameters& params, double e) {
  const MatchMatrix mm = match_matrix(params, e);
  const auto& a = mm.entries;
  return {a[0][0] * a[1][1] - a[0][1] * a[1][0], a[2][2] * a[3][3] - a[2][3] * a[3][2]};
}

struct ScanSpec {
  int grid_points = 2000;
  double refine_tol = 1e-10;
  double suspect_threshold = 1e-6;
  double margin = 1e-9;               ///< kept clear of both window ends
  std::optional<double> energy_cap;   ///< optional upper limit of the search

  void validate() const {
    if (grid_points < 100) throw Error(ErrorCode::InvalidInput, "grid_points must be >= 100");
    if (!(refine_tol > 0.0)) throw Error(ErrorCode::InvalidInput, "refine_tol must be positive");
    if (!(suspect_threshold > 0.0) || !(margin > 0.0)) {
      throw Error(ErrorCode::InvalidInput, "suspect_threshold and margin must be positive");
    }
  }
};

/// A grid point where |det| has a local minimum far below the grid maximum
/// without a sign change nearby: a candidate even-multiplicity root.
struct SuspectRoot {
  double e = 0.0;
  double relative_det = 0.0;
};

struct EnergySpectrum {
  DotParameters params;
  std::vector<double> levels;          ///< strictly increasing
  std::vector<double> level_residuals; ///< |search det| at each level / max on grid
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::vector<SuspectRoot> diagnostics;
};

namespace detail {

inline double row_norm_product(const Matrix4& a) {
  double p = 1.0;
  for (const auto& row : a) p *= std::sqrt(row[0] * row[0] + row[1] * row[1] + row[2] * row[2] + row[3] * row[3]);
  return p;
}

// Column of the interior spinor solution (J_m(k r), sign * J_{m+1}(k r)) at
// r = 1 with its derivatives, divided by k^p.
inline Vector4 interior_spinor_column(int m, double k, int p, double sign) {
  const double u = bessel_j_over_power(m, k, p);
  const double du = 0.5 * (bessel_j_over_power(m - 1, k, p - 1) - bessel_j_over_power(m + 1, k, p - 1));
  const double w = bessel_j_over_power(m + 1, k, p);
  const double dw = 0.5 * (bessel_j_over_power(m, k, p - 1) - bessel_j_over_power(m + 2, k, p - 1));
  return {u, du, sign * w, sign * dw};
}

}  // namespace detail

/// A function with the same zeros and sign changes as the spectral
/// determinant inside the window (beta != 0), scale-free and without the
/// spurious zero at k- = 0 (or k+ = 0).
///
/// The c1/d1 columns are replaced by the k- and k+ spinor columns
/// (col1 +- col3), each divided by k^p with p = min(|m|, |m+1|), and the
/// exterior columns carry the factor e^{sqrt(v - e - beta^2/4)}. Then
/// det M = -(k- k+)^p e^{-2q} / 2 * det(this matrix); the result is divided
/// by the product of its row norms.
inline double search_determinant(const DotParameters& params, double e) {
  require_in_window(params, e);
  const int m = params.m;
  const int p = std::min(std::abs(m), std::abs(m + 1));
  const InteriorWaveNumbers k = interior_wave_numbers(e, params.beta);
  const Vector4 s_minus = detail::interior_spinor_column(m, k.k_minus, p, 1.0);
  const Vector4 s_plus = detail::interior_spinor_column(m, k.k_plus, p, -1.0);
  const RadialBasisEval out_m = exterior_basis_scaled(m, e, params.v, params.beta, 1.0);
  const RadialBasisEval out_n = exterior_basis_scaled(m + 1, e, params.v, params.beta, 1.0);
  const Matrix4 a{{
      {s_minus[0], -out_m.f, s_plus[0], -out_m.g},
      {s_minus[1], -out_m.df, s_plus[1], -out_m.dg},
      {s_minus[2], -out_n.g, s_plus[2], out_n.f},
      {s_minus[3], -out_n.dg, s_plus[3], out_n.df},
  }};
  return determinant_4x4(a) / detail::row_norm_product(a);
}

/// Matching condition of one spin channel at beta = 0:
/// f1 f2' - f2 f1' at r = 1 for order n, normalized by the row norms.
inline double channel_function(int n, double e, double v) {
  const RadialBasisEval in = interior_basis(n, e, 0.0, 1.0);
  const RadialBasisEval out = exterior_basis_scaled(n, e, v, 0.0, 1.0);
  const double w = in.f * out.df - out.f * in.df;
  return w / (std::hypot(in.f, out.f) * std::hypot(in.df, out.df));
}

namespace detail {

struct ScanResult {
  std::vector<double> roots;
  std::vector<double> residuals;
  std::vector<SuspectRoot> suspects;
};

template <class F>
ScanResult scan_for_roots(F&& f, double lo, double hi, const ScanSpec& scan) {
  ScanResult out;
  const auto n = static_cast<std::size_t>(scan.grid_points);
  std::vector<double> grid(n), values(n);
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = (i + 1 == n) ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    values[i] = f(grid[i]);
    max_abs = std::max(max_abs, std::abs(values[i]));
  }
  if (max_abs == 0.0) return out;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (values[i] == 0.0) {
      out.roots.push_back(grid[i]);
      continue;
    }
    if (values[i] * values[i + 1] < 0.0) {
      out.roots.push_back(refine_root(f, Bracket{grid[i], grid[i + 1], values[i], values[i + 1]}, scan.refine_tol));
    }
  }
  for (double root : out.roots) out.residuals.push_back(std::abs(f(root)) / max_abs);

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = std::abs(values[i]);
    const bool local_min = a < std::abs(values[i - 1]) && a < std::abs(values[i + 1]);
    const bool sign_change = values[i - 1] * values[i] <= 0.0 || values[i] * values[i + 1] <= 0.0;
    if (local_min && !sign_change && a < scan.suspect_threshold * max_abs) {
      out.suspects.push_back({grid[i], a / max_abs});
    }
  }
  return out;
}

}  // namespace detail

/// All bound-state energies of (v, beta, m): sign changes of the determinant
/// on a uniform grid over the window, refined by Brent's method.
///
/// At beta = 0 the two spin channels decouple and each is searched
/// separately, so levels shared by both channels cannot cancel.
inline EnergySpectrum find_spectrum(const DotParameters& params, const ScanSpec& scan = {}) {
  params.validate();
  scan.validate();
  EnergySpectrum spectrum;
  spectrum.params = params;
  spectrum.window_lo = params.window_lower();
  spectrum.window_hi = params.window_upper();

  const double lo = spectrum.window_lo + scan.margin;
  double hi = spectrum.window_hi - scan.margin;
  if (scan.energy_cap) hi = std::min(hi, *scan.energy_cap);
  if (!(lo < hi)) return spectrum;

  std::vector<std::pair<double, double>> found;  // (level, residual)
  auto collect = [&](const detail::ScanResult& r) {
    for (std::size_t i = 0; i < r.roots.size(); ++i) found.emplace_back(r.roots[i], r.residuals[i]);
    spectrum.diagnostics.insert(spectrum.diagnostics.end(), r.suspects.begin(), r.suspects.end());
  };

  if (params.beta == 0.0) {
    for (int n : {params.m, params.m + 1}) {
      collect(detail::scan_for_roots([&](double e) { return channel_function(n, e, params.v); }, lo, hi, scan));
    }
  } else {
    collect(detail::scan_for_roots([&](double e) { return search_determinant(params, e); }, lo, hi, scan));
  }

  std::sort(found.begin(), found.end());
  std::sort(spectrum.diagnostics.begin(), spectrum.diagnostics.end(),
            [](const SuspectRoot& a, const SuspectRoot& b) { return a.e < b.e; });
  for (const auto& [level, residual] : found) {
    if (!spectrum.levels.empty() && level - spectrum.levels.back() <= 10.0 * scan.refine_tol) continue;
    spectrum.levels.push_back(level);
    spectrum.level_residuals.push_back(residual);
  }
  return spectrum;
}

}  // namespace rashba_dot
