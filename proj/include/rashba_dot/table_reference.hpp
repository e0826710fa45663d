#pragma once

// Reference energy levels for the finite circular well with Rashba coupling,
// for v in {25, 49, 100}, beta in {0, 0.2 sqrt(v), sqrt(v), 2 sqrt(v)} and
// m in {0, 1, 2}. Values are kept exactly as tabulated (two decimals); blank cells
// are absent levels.

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace rashba_dot {

struct ReferenceRow {
  int m;
  double v;
  double beta_factor;  ///< beta = beta_factor * sqrt(v)
  std::vector<double> levels;

  double beta() const { return beta_factor * std::sqrt(v); }
};

inline const std::vector<ReferenceRow>& reference_table() {
  static const std::vector<ReferenceRow> rows{
      {0, 25, 0.0, {3.98, 9.94, 19.61}},
      {0, 25, 0.2, {3.49, 9.81, 19.15}},
      {0, 25, 1.0, {-4.40, 2.83, 13.40}},
      {0, 25, 2.0, {-23.25, -18.31, -9.67}},
      {0, 49, 0.0, {4.41, 11.13, 22.75, 35.91}},
      {0, 49, 0.2, {3.49, 11.03, 21.87, 35.79}},
      {0, 49, 1.0, {-10.40, -3.71, 9.55, 24.22}},
      {0, 49, 2.0, {-47.11, -41.45, -32.19, -19.60, -2.25}},
      {0, 100, 0.0, {4.77, 12.09, 24.97, 40.08, 60.28, 81.84}},
      {0, 100, 0.2, {2.97, 11.75, 23.30, 39.73, 58.65, 81.42}},
      {0, 100, 1.0, {-21.91, -16.95, -4.88, 14.82, 35.04, 56.69}},
      {0, 100, 2.0, {-97.96, -91.83, -81.75, -67.58, -49.91, -28.53, -1.66}},

      {1, 25, 0.0, {9.94, 17.46}},
      {1, 25, 0.2, {9.02, 17.85}},
      {1, 25, 1.0, {-2.52, 9.26}},
      {1, 25, 2.0, {-23.22, -17.29, -4.85}},
      {1, 49, 0.0, {11.13, 19.85, 35.91}},
      {1, 49, 0.2, {9.41, 20.50, 34.28}},
      {1, 49, 1.0, {-9.62, 1.84, 20.95, 36.73}},
      {1, 49, 2.0, {-47.04, -41.12, -31.51, -13.33}},
      {1, 100, 0.0, {12.09, 21.66, 40.08, 57.25, 81.84}},
      {1, 100, 0.2, {8.85, 22.59, 37.08, 58.13, 79.02}},
      {1, 100, 1.0, {-22.91, -14.79, 4.24, 31.61, 55.83, 74.93}},
      {1, 100, 2.0, {-97.91, -91.72, -81.26, -66.83, -48.24, -17.86}},

      {2, 25, 0.0, {17.46}},
      {2, 25, 0.2, {16.13}},
      {2, 25, 1.0, {1.30, 16.08}},
      {2, 25, 2.0, {-22.86, -13.35, -0.20}},
      {2, 49, 0.0, {19.85, 30.35}},
      {2, 49, 0.2, {17.37, 31.72}},
      {2, 49, 1.0, {-6.88, 10.11, 32.20}},
      {2, 49, 2.0, {-44.83, -40.77, -26.05, -4.15}},
      {2, 100, 0.0, {21.66, 33.34, 57.25, 76.20}},
      {2, 100, 0.2, {17.08, 35.51, 52.95, 78.21}},
      {2, 100, 1.0, {-22.12, -8.70, 16.99, 49.86, 74.91}},
      {2, 100, 2.0, {-97.84, -91.39, -80.29, -65.52, -37.69, -3.45}},
  };
  return rows;
}

enum class CellStatus { Pass, Fail, Missing, Extra };

constexpr const char* to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Pass: return "pass";
    case CellStatus::Fail: return "fail";
    case CellStatus::Missing: return "missing";
    case CellStatus::Extra: return "extra";
  }
  return "?";
}

/// One position of a row: computed and/or reference level at the same index.
struct CellComparison {
  std::size_t index = 0;
  bool has_computed = false;
  bool has_reference = false;
  double computed = 0.0;
  double reference = 0.0;
  CellStatus status = CellStatus::Pass;
};

/// Index-aligned comparison of ascending level lists. Every position is judged
/// on its own: |computed - reference| <= tol passes, a reference value with no
/// computed counterpart is missing, a computed value past the tabulated ones is
/// extra.
inline std::vector<CellComparison> compare_levels(std::span<const double> computed,
                                                  std::span<const double> reference, double tol) {
  std::vector<CellComparison> cells;
  const std::size_t n = std::max(computed.size(), reference.size());
  for (std::size_t i = 0; i < n; ++i) {
    CellComparison c;
    c.index = i;
    c.has_computed = i < computed.size();
    c.has_reference = i < reference.size();
    if (c.has_computed) c.computed = computed[i];
    if (c.has_reference) c.reference = reference[i];
    if (!c.has_computed) {
      c.status = CellStatus::Missing;
    } else if (!c.has_reference) {
      c.status = CellStatus::Extra;
    } else {
      c.status = std::abs(c.computed - c.reference) <= tol ? CellStatus::Pass : CellStatus::Fail;
    }
    cells.push_back(c);
  }
  return cells;
}

}  // namespace rashba_dot
