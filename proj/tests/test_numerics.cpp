#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rashba_dot/numerics.hpp"

using namespace rashba_dot;

namespace {

double cofactor_determinant(const Matrix4& a) {
  auto det3 = [&](int skip_row, int skip_col) {
    double m[3][3];
    int ri = 0;
    for (int i = 0; i < 4; ++i) {
      if (i == skip_row) continue;
      int ci = 0;
      for (int j = 0; j < 4; ++j) {
        if (j == skip_col) continue;
        m[ri][ci++] = a[i][j];
      }
      ++ri;
    }
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  double d = 0.0;
  for (int j = 0; j < 4; ++j) d += ((j % 2) ? -1.0 : 1.0) * a[0][j] * det3(0, j);
  return d;
}

Matrix4 random_rank3(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  double left[4][3], right[3][4];
  for (auto& row : left) for (double& x : row) x = g(rng);
  for (auto& row : right) for (double& x : row) x = g(rng);
  Matrix4 m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 3; ++k) m[i][j] += left[i][k] * right[k][j];
  return m;
}

}  // namespace

TEST(RefineRoot, FindsSqrtTwo) {
  auto f = [](double x) { return x * x - 2.0; };
  const double root = refine_root(f, make_bracket(f, 1.0, 2.0), 1e-12);
  EXPECT_NEAR(root, std::numbers::sqrt2, 1e-12);
}

TEST(RefineRoot, FindsPiFromSine) {
  auto f = [](double x) { return std::sin(x); };
  EXPECT_NEAR(refine_root(f, make_bracket(f, 3.0, 4.0), 1e-12), std::numbers::pi, 1e-12);
}

TEST(RefineRoot, LinearFunctionNeedsOneInterpolationStep) {
  int calls = 0;
  auto f = [&](double x) {
    ++calls;
    return x;
  };
  const Bracket b = make_bracket(f, -1.0, 2.0);
  const double root = refine_root(f, b, 1e-12);
  EXPECT_EQ(root, 0.0);
  EXPECT_LE(calls, 3);
}

TEST(RefineRoot, RejectsBracketWithoutSignChange) {
  auto f = [](double x) { return x * x + 1.0; };
  EXPECT_THROW(
      {
        try {
          refine_root(f, make_bracket(f, -1.0, 1.0), 1e-10);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::BracketInvalid);
          throw;
        }
      },
      Error);
  EXPECT_FALSE(make_bracket(f, 1.0, -1.0).valid());
}

TEST(RefineRoot, ReportsIterationExhaustion) {
  auto f = [](double x) { return std::tanh(50.0 * (x - 0.3)); };
  try {
    refine_root(f, make_bracket(f, -10.0, 10.0), 1e-15, 2);
    FAIL() << "expected NoConvergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
  }
}

TEST(RefineRoot, DeterministicAndBracketIndependent) {
  auto f = [](double x) { return std::cos(x) - x; };
  const double a = refine_root(f, make_bracket(f, 0.0, 1.0), 1e-13);
  const double b = refine_root(f, make_bracket(f, 0.0, 1.0), 1e-13);
  const double c = refine_root(f, make_bracket(f, -2.0, 1.5), 1e-13);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(a, c, 2e-13);
  EXPECT_NEAR(a, 0.7390851332151607, 1e-13);
}

TEST(Determinant, AgreesWithCofactorExpansion) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix4 a;
    for (auto& row : a) for (double& x : row) x = u(rng);
    const double ref = cofactor_determinant(a);
    EXPECT_NEAR(determinant_4x4(a), ref, 1e-12 * std::max(1.0, frobenius_norm(a) * frobenius_norm(a) *
                                                                     frobenius_norm(a) * frobenius_norm(a)));
  }
}

TEST(Nullspace, DiagonalMatrixWithZeroEntry) {
  const Matrix4 m{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 0}}};
  const NullspaceResult r = nullspace_4x4(m);
  EXPECT_FALSE(r.rank_deficiency2);
  EXPECT_NEAR(r.vector[0], 0.0, 1e-15);
  EXPECT_NEAR(r.vector[1], 0.0, 1e-15);
  EXPECT_NEAR(r.vector[2], 0.0, 1e-15);
  EXPECT_NEAR(r.vector[3], 1.0, 1e-15);
}

TEST(Nullspace, FlagsTwoDimensionalKernel) {
  const Matrix4 m{{{1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}};
  EXPECT_TRUE(nullspace_4x4(m).rank_deficiency2);
}

TEST(Nullspace, RejectsRegularAndZeroMatrices) {
  const Matrix4 identity{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
  try {
    nullspace_4x4(identity);
    FAIL() << "expected NotSingular";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSingular);
  }
  EXPECT_THROW(nullspace_4x4(Matrix4{}), Error);
}

TEST(Nullspace, RandomRankThreeMatrices) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix4 m = random_rank3(rng);
    const NullspaceResult r = nullspace_4x4(m);
    EXPECT_FALSE(r.rank_deficiency2);
    EXPECT_NEAR(euclidean_norm(r.vector), 1.0, 1e-14);
    EXPECT_LE(euclidean_norm(multiply(m, r.vector)) / frobenius_norm(m), 1e-12);
    double biggest = 0.0;
    for (double x : r.vector) if (std::abs(x) > std::abs(biggest)) biggest = x;
    EXPECT_GT(biggest, 0.0);
  }
}

TEST(Nullspace, BadlyScaledColumns) {
  std::mt19937_64 rng(3);
  Matrix4 m = random_rank3(rng);
  const double scales[4] = {1e-6, 1.0, 1e5, 1e-3};
  for (auto& row : m)
    for (int j = 0; j < 4; ++j) row[j] *= scales[j];
  const NullspaceResult r = nullspace_4x4(m);
  // Judge the residual row by row against the size of the terms it sums.
  double residual = 0.0, size = 0.0;
  for (int i = 0; i < 4; ++i) {
    double s = 0.0, a = 0.0;
    for (int j = 0; j < 4; ++j) {
      s += m[i][j] * r.vector[j];
      a += std::abs(m[i][j] * r.vector[j]);
    }
    residual = std::max(residual, std::abs(s));
    size = std::max(size, a);
  }
  EXPECT_LE(residual / size, 1e-12);
}

TEST(GaussLegendre, WeightsAndPolynomialExactness) {
  for (int n : {2, 5, 16, 24}) {
    const GaussLegendreRule rule = gauss_legendre(n);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    EXPECT_NEAR(sum, 2.0, 1e-14) << n;
    for (int degree = 0; degree <= 2 * n - 1; ++degree) {
      double q = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) q += rule.weights[i] * std::pow(rule.nodes[i], degree);
      const double exact = (degree % 2) ? 0.0 : 2.0 / (degree + 1);
      EXPECT_NEAR(q, exact, 1e-14) << "n=" << n << " degree=" << degree;
    }
  }
}

TEST(IntegratePanel, ElementaryIntegrals) {
  EXPECT_NEAR(integrate_panel([](double r) { return r; }, 0.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(integrate_panel([](double x) { return 4.0 / (1.0 + x * x); }, 0.0, 1.0), std::numbers::pi, 1e-12);
  EXPECT_NEAR(integrate_panel([](double x) { return std::exp(-x * x); }, -6.0, 6.0), std::sqrt(std::numbers::pi),
              1e-12);
}

TEST(IntegratePanel, AgreesWithFineTrapezoid) {
  auto f = [](double r) {
    const double c = std::cos(5.0 * r);
    return c * c * r * std::exp(-r);
  };
  const double quad = integrate_panel(f, 0.0, 1.0);
  // Trapezoid with endpoint correction (Euler-Maclaurin to h^4).
  const int n = 20000;
  const double h = 1.0 / n;
  double t = 0.5 * (f(0.0) + f(1.0));
  for (int i = 1; i < n; ++i) t += f(i * h);
  t *= h;
  auto df = [&](double x) { return (f(x + 1e-5) - f(x - 1e-5)) / 2e-5; };
  t -= h * h / 12.0 * (df(1.0) - df(0.0));
  EXPECT_NEAR(quad, t, 1e-10);
}

TEST(IntegratePanel, ReportsDepthExhaustion) {
  auto kink = [](double x) { return std::sqrt(std::abs(x - 1.0 / 3.0)); };
  try {
    integrate_panel(kink, 0.0, 1.0, QuadratureSpec{16, 1e-15, 1e-300}, 3);
    FAIL() << "expected NoConvergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
  }
}

TEST(IntegratePanel, RejectsInvalidArguments) {
  EXPECT_THROW(integrate_panel([](double x) { return x; }, 1.0, 1.0), Error);
  EXPECT_THROW(integrate_panel([](double x) { return x; }, 0.0, 1.0, QuadratureSpec{1, 1e-12, 1e-14}), Error);
  EXPECT_THROW(integrate_panel([](double x) { return x; }, 0.0, 1.0, QuadratureSpec{16, 0.0, 1e-14}), Error);
}

TEST(IntegrateTail, ExponentialTails) {
  EXPECT_NEAR(integrate_tail([](double r) { return std::exp(-r); }, 1.0, 1.0), std::exp(-1.0), 1e-12);
  // int_0^inf e^{-2r} cos r dr = 2/5
  EXPECT_NEAR(integrate_tail([](double r) { return std::exp(-2.0 * r) * std::cos(r); }, 0.0, 2.0, {},
                             std::numbers::pi),
              0.4, 1e-12);
  // int_0^inf r e^{-3r} sin(20 r) dr = 2*3*20 / (9 + 400)^2
  EXPECT_NEAR(integrate_tail([](double r) { return r * std::exp(-3.0 * r) * std::sin(20.0 * r); }, 0.0, 2.5, {},
                             std::numbers::pi / 20.0),
              120.0 / (409.0 * 409.0), 1e-12);
}

TEST(IntegrateTail, SplitPointDoesNotMatter) {
  auto f = [](double r) { return std::exp(-1.5 * r) * (1.0 + std::sin(3.0 * r)); };
  const double reference = integrate_tail(f, 0.0, 1.5, {}, 1.0);
  for (double b : {0.5, 1.0, 2.0, 3.7}) {
    const double split = integrate_panel(f, 0.0, b) + integrate_tail(f, b, 1.5, {}, 1.0);
    EXPECT_NEAR(split, reference, 1e-12) << b;
  }
}

TEST(IntegrateTail, DetectsSlowerDecayThanDeclared) {
  try {
    integrate_tail([](double r) { return std::exp(-r); }, 0.0, 10.0);
    FAIL() << "expected DecayViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DecayViolation);
  }
  EXPECT_THROW(integrate_tail([](double r) { return std::exp(-r); }, 0.0, 0.0), Error);
}
