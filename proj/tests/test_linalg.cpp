#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "pillai/linalg.hpp"

namespace pillai {
namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  const auto inst = oracle::gaussian_instance(rows, cols, seed);
  return Matrix(rows, cols, inst.y);
}

TEST(Matrix, RejectsNonFiniteEntries) {
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Matrix(1, 2, {1.0, inf}), NonFiniteValue);
  EXPECT_THROW(Matrix(1, 1, {nan}), NonFiniteValue);
  EXPECT_THROW(Vector({0.0, nan}), NonFiniteValue);
}

TEST(Matrix, RejectsBadShapes) {
  EXPECT_THROW(Matrix(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
  EXPECT_THROW(Matrix(0, 2, {}), std::invalid_argument);
  EXPECT_THROW(Vector(std::vector<double>{}), std::invalid_argument);
}

TEST(CenterColumns, Examples) {
  EXPECT_EQ(center_columns(Matrix{{1}, {2}, {3}}), (Matrix{{-1}, {0}, {1}}));
  EXPECT_EQ(center_columns(Matrix{{0}, {1}, {0}, {3}}),
            (Matrix{{-1}, {0}, {-1}, {2}}));
  for (double c : {0.0, 1.0, -3.5, 1e6}) {
    EXPECT_EQ(center_columns(Matrix{{c}, {c}, {c}}), Matrix::zeros(3, 1));
  }
}

TEST(CenterColumns, IdempotentAndMeanZero) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix m = random_matrix(15, 4, seed);
    const Matrix once = center_columns(m);
    const Matrix twice = center_columns(once);
    EXPECT_LE(max_abs_difference(once, twice), 1e-14);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      EXPECT_NEAR(mean(once.column(j)), 0.0, 1e-15);
    }
  }
}

TEST(Gram, Examples) {
  EXPECT_EQ(gram(Matrix{{3}, {4}}), (Matrix{{25}}));
  EXPECT_EQ(gram(Matrix::identity(2)), Matrix::identity(2));
  EXPECT_EQ(gram(Matrix{{1, 1}, {1, 2}, {1, 3}}), (Matrix{{3, 6}, {6, 14}}));
}

TEST(Gram, ExactlySymmetric) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix g = gram(random_matrix(30, 6, seed));
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) EXPECT_EQ(g(i, j), g(j, i));
  }
}

TEST(SpdSolve, Examples) {
  EXPECT_EQ(spd_solve(Matrix{{4}}, Matrix{{2}}), (Matrix{{0.5}}));
  const Matrix rhs = random_matrix(3, 2, 7);
  EXPECT_LE(max_abs_difference(spd_solve(Matrix::identity(3), rhs), rhs), 0.0);
  const Matrix x = spd_solve(Matrix{{2, 1}, {1, 2}}, Matrix{{1}, {1}});
  EXPECT_NEAR(x(0, 0), 1.0 / 3.0, 4e-16);
  EXPECT_NEAR(x(1, 0), 1.0 / 3.0, 4e-16);
}

TEST(SpdSolve, ResidualBound) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t k = 1 + seed % 12;
    const Matrix a = random_matrix(3 * k + 5, k, seed);
    const Matrix s = gram(a);
    const Matrix rhs = random_matrix(k, 3, seed + 1000);
    const Matrix x = spd_solve(s, rhs);
    const double residual = max_abs_difference(multiply(s, x), rhs);
    EXPECT_LE(residual, 1e-10 * (1.0 + max_abs(rhs.entries()))) << "seed " << seed;
  }
}

TEST(SpdSolve, ReportsFailingPivot) {
  // Second column duplicates the first.
  const Matrix s = gram(Matrix{{1, 1, 0}, {2, 2, 1}, {3, 3, 5}, {4, 4, 2}});
  try {
    spd_solve(s, Matrix::identity(3));
    FAIL() << "expected NotPositiveDefinite";
  } catch (const NotPositiveDefinite& e) {
    EXPECT_EQ(e.pivot(), 1u);
  }
  EXPECT_THROW(spd_solve(Matrix{{-1}}, Matrix{{1}}), NotPositiveDefinite);
  EXPECT_THROW(spd_solve(Matrix{{0, 0}, {0, 0}}, Matrix{{1}, {1}}),
               NotPositiveDefinite);
}

TEST(SpdSolve, PivotToleranceIsScaleRelative) {
  // Well conditioned but tiny: must factor.
  EXPECT_NO_THROW(spd_solve(Matrix{{1e-20, 0}, {0, 2e-20}}, Matrix{{1}, {1}}));
  // Pivot ratio below 1e-12 of the largest diagonal: must fail.
  EXPECT_THROW(spd_solve(Matrix{{1.0, 0}, {0, 1e-13}}, Matrix{{1}, {1}}),
               NotPositiveDefinite);
}

TEST(SpdSolve, RejectsAsymmetric) {
  EXPECT_THROW(spd_solve(Matrix{{2, 1}, {0, 2}}, Matrix{{1}, {1}}),
               std::invalid_argument);
}

TEST(CenteredGramInverseApply, Examples) {
  EXPECT_NEAR(centered_gram_inverse_apply(Matrix{{-1}, {0}, {1}}, Matrix{{1}})(0, 0), 0.5,
              4e-16);

  // Centered orthonormal columns: T = I.
  const double a = 1.0 / std::sqrt(2.0);
  const double b = 1.0 / std::sqrt(6.0);
  const Matrix q{{a, b}, {-a, b}, {0, -2 * b}};
  const Matrix rhs{{3, -1}, {2, 5}};
  EXPECT_LE(max_abs_difference(centered_gram_inverse_apply(q, rhs), rhs), 1e-15);
}

TEST(CenteredGramInverseApply, MatchesCofactorInverse) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Matrix y = random_matrix(4, 2, seed);
    const Matrix t = centered_gram(y);
    const std::vector<double> expected =
        oracle::inverse_2x2({t(0, 0), t(0, 1), t(1, 0), t(1, 1)});
    const Matrix got = centered_gram_inverse_apply(y, Matrix::identity(2));
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(got.entries()[i], expected[i],
                  1e-10 * (1.0 + std::abs(expected[i])));
    }
  }
}

TEST(CenteredGramInverseApply, RecoversIdentity) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t k = 1 + seed % 10;
    const Matrix y = random_matrix(2 * k + 3, k, seed);
    const Matrix got = centered_gram_inverse_apply(y, centered_gram(y));
    EXPECT_LE(max_abs_difference(got, Matrix::identity(k)), 1e-8) << "seed " << seed;
  }
}

TEST(CenteredGramInverseApply, CollinearAfterCentering) {
  // Column 1 = 2 * column 0 + 5: collinear once centered.
  const Matrix y{{1, 7}, {2, 9}, {4, 13}, {3, 11}};
  EXPECT_THROW(centered_gram_inverse_apply(y, Matrix::identity(2)),
               NotPositiveDefinite);
}

TEST(IsConstant, DetectsRoundingLevelSpread) {
  EXPECT_TRUE(is_constant(Vector{0.1, 0.1, 0.1}));
  EXPECT_TRUE(is_constant(Vector{0.0, 0.0}));
  EXPECT_FALSE(is_constant(Vector{1.0, 1.0 + 1e-9}));
}

}  // namespace
}  // namespace pillai
