#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pieri/numeric.hpp"
#include "pieri/rng.hpp"

using namespace pieri;

namespace {

CMatrix random_matrix(std::size_t n, Lcg& rng) {
  CMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return a;
}

oracle::Dense to_dense(const CMatrix& a) {
  oracle::Dense d(a.rows(), std::vector<Complex>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) d[r][c] = a(r, c);
  return d;
}

double frobenius(const CMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

TEST(LuSolve, Identity) {
  const CVector x = lu_solve(CMatrix::identity(2), CVector{3.0, 4.0});
  EXPECT_EQ(x[0], Complex(3.0));
  EXPECT_EQ(x[1], Complex(4.0));
}

TEST(LuSolve, Permutation) {
  const CMatrix a{{0.0, 1.0}, {1.0, 0.0}};
  const CVector x = lu_solve(a, CVector{1.0, 2.0});
  EXPECT_EQ(x[0], Complex(2.0));
  EXPECT_EQ(x[1], Complex(1.0));
}

TEST(LuSolve, SingularThrows) {
  const CMatrix a{{1.0, 2.0}, {2.0, 4.0}};
  EXPECT_THROW(lu_solve(a, CVector{1.0, 1.0}), SingularMatrix);
  const CMatrix tiny{{1.0, 0.0}, {0.0, 1e-15}};
  EXPECT_THROW(lu_solve(tiny, CVector{1.0, 1.0}), SingularMatrix);
}

TEST(LuSolve, ResidualBoundOnRandomSystems) {
  Lcg rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 8;
    CMatrix a = random_matrix(n, rng);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 2.0;  // keep it well conditioned
    CVector b(n);
    for (auto& z : b) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const CVector x = lu_solve(a, b);
    const CVector ax = multiply(a, x);
    CVector r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = ax[i] - b[i];
    EXPECT_LE(norm2(r), 1e-12 * (frobenius(a) * norm2(x) + norm2(b))) << "trial " << trial;
  }
}

TEST(LuSolve, DimensionMismatch) {
  EXPECT_THROW(lu_solve(CMatrix(2, 3), CVector{1.0, 1.0}), DimensionMismatch);
  EXPECT_THROW(lu_solve(CMatrix::identity(2), CVector{1.0}), DimensionMismatch);
}

TEST(Det, IdentityAndRepeatedRow) {
  EXPECT_EQ(det(CMatrix::identity(3)), Complex(1.0));
  const CMatrix a{{1.0, Complex(2, 1), 3.0}, {0.5, 4.0, Complex(0, 1)}, {1.0, Complex(2, 1), 3.0}};
  EXPECT_EQ(det(a), Complex(0.0));
}

TEST(Det, MatchesCofactorExpansion) {
  Lcg rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix a = random_matrix(4, rng);
    const Complex want = oracle::cofactor_det(to_dense(a));
    EXPECT_LE(std::abs(det(a) - want), 1e-10 * std::abs(want)) << trial;
  }
}

TEST(Det, ColumnLinearity) {
  Lcg rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 5, col = trial % n;
    CMatrix a = random_matrix(n, rng), b = a, c = a;
    const Complex alpha(rng.uniform(-1, 1), rng.uniform(-1, 1)), beta(rng.uniform(-1, 1), rng.uniform(-1, 1));
    for (std::size_t r = 0; r < n; ++r) {
      b(r, col) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
      c(r, col) = alpha * a(r, col) + beta * b(r, col);
    }
    const Complex want = alpha * det(a) + beta * det(b);
    EXPECT_LE(std::abs(det(c) - want), 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST(DetGradient, ClosedForms) {
  const Complex a(1, 2), b(3, -1), c(0.5, 0.5), d(-2, 1);
  const CMatrix m{{a, b}, {c, d}};
  const std::vector<std::pair<std::size_t, std::size_t>> pos{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const DetGradient g = det_with_gradient(m, pos);
  EXPECT_LE(std::abs(g.value - (a * d - b * c)), 1e-14);
  EXPECT_LE(std::abs(g.gradient[0] - d), 1e-14);
  EXPECT_LE(std::abs(g.gradient[1] + c), 1e-14);
  EXPECT_LE(std::abs(g.gradient[2] + b), 1e-14);
  EXPECT_LE(std::abs(g.gradient[3] - a), 1e-14);

  const std::vector<std::pair<std::size_t, std::size_t>> mid{{1, 1}};
  EXPECT_LE(std::abs(det_with_gradient(CMatrix::identity(3), mid).gradient[0] - 1.0), 1e-15);
}

TEST(DetGradient, MatchesFiniteDifferences) {
  Lcg rng(21);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_matrix(5, rng);
    std::vector<std::pair<std::size_t, std::size_t>> pos;
    for (std::size_t r = 0; r < 5; ++r)
      for (std::size_t c = 0; c < 5; ++c) pos.emplace_back(r, c);
    const DetGradient g = det_with_gradient(a, pos);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      CMatrix ap = a, am = a;
      ap(pos[i].first, pos[i].second) += h;
      am(pos[i].first, pos[i].second) -= h;
      const Complex fd = (det(ap) - det(am)) / (2.0 * h);
      EXPECT_LE(std::abs(g.gradient[i] - fd), 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(DetGradient, SingularMatrixUsesMinors) {
  // rank n-1: adjugate is non-zero even though det = 0
  const CMatrix a{{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}, {0.0, 1.0, Complex(0, 1)}};
  std::vector<std::pair<std::size_t, std::size_t>> pos;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) pos.emplace_back(r, c);
  const DetGradient g = det_with_gradient(a, pos);
  EXPECT_LE(std::abs(g.value), 1e-14);
  const oracle::Dense d = to_dense(a);
  for (std::size_t i = 0; i < pos.size(); ++i)
    EXPECT_LE(std::abs(g.gradient[i] - oracle::cofactor(d, pos[i].first, pos[i].second)), 1e-13);
}

TEST(NumericRank, DetectsDeficiency) {
  EXPECT_EQ(numeric_rank(CMatrix{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}, 1e-10), 2u);
  EXPECT_EQ(numeric_rank(CMatrix{{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}}, 1e-10), 1u);
  EXPECT_EQ(numeric_rank(CMatrix(2, 3), 1e-10), 0u);
}
