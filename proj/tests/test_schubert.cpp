#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pieri/schubert.hpp"

using namespace pieri;

namespace {

SimpleSchubertProblem make(int k, int n, std::vector<int> lambda, std::vector<int> mu) {
  return SimpleSchubertProblem(GrassmannianShape(k, n), Partition(std::move(lambda), k), Partition(std::move(mu), k));
}

SimpleSchubertProblem all_simple(int k, int n) {
  return SimpleSchubertProblem(GrassmannianShape(k, n), Partition::box(k), Partition::box(k));
}

oracle::Dense to_dense(const CMatrix& a) {
  oracle::Dense d(a.rows(), std::vector<Complex>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) d[r][c] = a(r, c);
  return d;
}

CVector random_point(int n, Lcg& rng) {
  CVector x(n);
  for (auto& z : x) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return x;
}

// Every partition with k parts bounded by cols.
void partitions_in_box(int k, int cols, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  const int top = cur.empty() ? cols : cur.back();
  for (int p = 0; p <= top; ++p) {
    cur.push_back(p);
    partitions_in_box(k, cols, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> partitions_in_box(int k, int cols) {
  std::vector<int> cur;
  std::vector<std::vector<int>> out;
  partitions_in_box(k, cols, cur, out);
  return out;
}

int weight(const std::vector<int>& l, const std::vector<int>& m) {
  int w = 0;
  for (int x : l) w += x;
  for (int x : m) w += x;
  return w;
}

CMatrix worked24_plane(std::initializer_list<std::initializer_list<Complex>> rows) { return CMatrix(rows); }

}  // namespace

TEST(Partition, Validation) {
  EXPECT_EQ(Partition({2, 1}, 3).parts(), (std::vector<int>{2, 1, 0}));
  EXPECT_EQ(Partition({2, 1, 0, 0}, 2).parts(), (std::vector<int>{2, 1}));
  EXPECT_THROW(Partition({1, 2}, 2), InvalidInput);
  EXPECT_THROW(Partition({1, -1}, 2), InvalidInput);
  EXPECT_THROW(Partition({1, 1, 1}, 2), InvalidInput);
  EXPECT_THROW(GrassmannianShape(0, 3), InvalidInput);
  EXPECT_THROW(GrassmannianShape(3, 3), InvalidInput);
  EXPECT_THROW(make(2, 4, {3, 0}, {0, 0}), InvalidInput);
  EXPECT_THROW(make(2, 4, {2, 2}, {1, 0}), InvalidInput);  // |lambda| + |mu| > k(n-k)
  EXPECT_EQ(make(3, 7, {2, 1}, {1, 1}).num_conditions(), 7);
}

TEST(Chart, SimpleOnG24) {
  const SkewChart c = chart(all_simple(2, 4));
  EXPECT_EQ(c.render(), "1*00\n001*\n");
  EXPECT_EQ(c.num_vars(), 2);
  EXPECT_EQ(c.cell(0, 1).var, 0);
  EXPECT_EQ(c.cell(1, 3).var, 1);
  EXPECT_EQ(c.rightmost_col(0), 1);
  EXPECT_EQ(c.rightmost_col(1), 3);
}

TEST(Chart, SkewOnG37) {
  // a b c / d e / f g
  const SkewChart c = chart(make(3, 7, {2, 1, 0}, {1, 1, 0}));
  EXPECT_EQ(c.render(), "1***000\n001**00\n00001**\n");
  EXPECT_EQ(c.num_vars(), 7);
  const std::vector<SkewChart::Position> want{{0, 1}, {0, 2}, {0, 3}, {1, 3}, {1, 4}, {2, 5}, {2, 6}};
  EXPECT_EQ(c.var_positions(), want);
  EXPECT_EQ(c.rightmost_var(0), 2);  // c
  EXPECT_EQ(c.rightmost_var(1), 4);  // e
  EXPECT_EQ(c.rightmost_var(2), 6);  // g
}

TEST(Chart, ZeroVariableChart) {
  const SkewChart c = chart(make(2, 4, {2, 1}, {1, 0}));
  EXPECT_EQ(c.num_vars(), 0);
  EXPECT_EQ(c.render(), "0100\n0001\n");
  const CMatrix e = c.instantiate(CVector{});
  EXPECT_EQ(e(0, 1), Complex(1.0));
  EXPECT_EQ(e(1, 3), Complex(1.0));
}

TEST(Chart, Errors) {
  // complementary weight but not complementary shape
  EXPECT_THROW(chart(make(2, 4, {2, 0}, {1, 1})), EmptyProblem);
  // incompatible with simple conditions left
  EXPECT_THROW(chart(make(3, 7, {3, 0, 0}, {2, 2, 2})), IncompatibleConditions);
  EXPECT_FALSE(make(3, 7, {3, 0, 0}, {2, 2, 2}).compatible());
  EXPECT_EQ(count_solutions(make(3, 7, {3, 0, 0}, {2, 2, 2})), 0u);
  EXPECT_THROW(chart(all_simple(2, 4)).instantiate(CVector{1.0}), DimensionMismatch);
}

TEST(Chart, MatchesEntryRuleAndCountsVariables) {
  for (int n = 2; n <= 9; ++n)
    for (int k = 1; k < n; ++k) {
      if (k * (n - k) > 20) continue;
      const auto parts = partitions_in_box(k, n - k);
      for (const auto& l : parts)
        for (const auto& m : parts) {
          if (weight(l, m) > k * (n - k)) continue;
          const SimpleSchubertProblem p = make(k, n, l, m);
          if (p.num_conditions() < 0 || !p.compatible()) continue;
          if (p.num_conditions() == 0 && count_solutions(p) == 0) continue;
          const SkewChart c = chart(p);
          ASSERT_EQ(c.num_vars(), p.num_conditions());
          const oracle::ChartPattern o(k, n, p.lambda.parts(), p.mu.parts());
          ASSERT_EQ(o.free_cells.size(), c.var_positions().size());
          for (std::size_t v = 0; v < o.free_cells.size(); ++v) {
            EXPECT_EQ(static_cast<int>(c.var_positions()[v].first), o.free_cells[v].first);
            EXPECT_EQ(static_cast<int>(c.var_positions()[v].second), o.free_cells[v].second);
          }
          for (int r = 0; r < k; ++r) EXPECT_EQ(c.one_col(r), o.one_col[r]);
        }
    }
}

TEST(Count, KnownValues) {
  EXPECT_EQ(count_solutions(all_simple(2, 4)), 2u);
  EXPECT_EQ(count_solutions(all_simple(3, 8)), 6006u);
  EXPECT_EQ(count_solutions(all_simple(3, 5)), 5u);
  EXPECT_EQ(count_solutions(make(4, 8, {2, 1}, {1})), 8580u);
  EXPECT_EQ(count_solutions(make(3, 9, {2, 1}, {2})), 17589u);
  EXPECT_EQ(count_solutions(make(2, 4, {2, 1}, {1, 0})), 1u);
  EXPECT_EQ(count_solutions(make(2, 4, {2, 0}, {2, 0})), 1u);
  EXPECT_EQ(count_solutions(make(2, 4, {2, 0}, {1, 1})), 0u);
}

TEST(Count, HookLengthForAllSimpleProblems) {
  for (int n = 2; n <= 22; ++n)
    for (int k = 1; k < n; ++k) {
      if (k * (n - k) > 21) continue;
      const std::uint64_t want = oracle::hook_length_rectangle(k, n - k);
      const GrassmannianShape shape(k, n);
      EXPECT_EQ(count_solutions(SimpleSchubertProblem(shape, Partition::empty(k), Partition::empty(k))), want);
      if (k * (n - k) >= 2) {
        EXPECT_EQ(count_solutions(all_simple(k, n)), want) << "G(" << k << "," << n << ")";
      }
    }
}

TEST(Count, SymmetricInLambdaAndMu) {
  Lcg rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(4));
    const int k = 1 + static_cast<int>(rng.below(n - 1));
    const auto parts = partitions_in_box(k, n - k);
    const auto& l = parts[rng.below(parts.size())];
    const auto& m = parts[rng.below(parts.size())];
    if (weight(l, m) > k * (n - k)) continue;
    EXPECT_EQ(count_solutions(make(k, n, l, m)), count_solutions(make(k, n, m, l)));
  }
}

TEST(Count, SumsOverChildren) {
  const SimpleSchubertProblem p = make(3, 7, {2, 1, 0}, {1, 1, 0});
  std::uint64_t total = 0;
  for (const Partition& nu : children(p.mu, p.shape))
    total += count_solutions(SimpleSchubertProblem(p.shape, p.lambda, nu));
  EXPECT_EQ(count_solutions(p), total);
  EXPECT_GT(total, 0u);
}

TEST(Children, Examples) {
  const GrassmannianShape g37(3, 7), g24(2, 4);
  const auto c = children(Partition({1, 1, 0}, 3), g37);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].parts(), (std::vector<int>{2, 1, 0}));
  EXPECT_EQ(c[1].parts(), (std::vector<int>{1, 1, 1}));
  const auto one = children(Partition::empty(2), g24);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].parts(), (std::vector<int>{1, 0}));
  EXPECT_TRUE(children(Partition({2, 2}, 2), g24).empty());
}

TEST(SpecialPlane, Examples) {
  const CMatrix g = special_plane(Partition({1, 1, 0}, 3), GrassmannianShape(3, 7));
  ASSERT_EQ(g.rows(), 4u);
  const int cols[] = {0, 1, 2, 5};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 7; ++c) EXPECT_EQ(g(r, c), Complex(c == cols[r] ? 1.0 : 0.0));
  EXPECT_EQ(special_plane(Partition::empty(2), GrassmannianShape(2, 4)), (CMatrix{{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}}));
}

TEST(SpecialPlane, ProductOfRightmostEntries) {
  // |det| always equals the product; the sign is (-1)^(k(n-k)-|mu|)
  Lcg rng(17);
  for (int n = 3; n <= 7; ++n)
    for (int k = 1; k < n; ++k) {
      const GrassmannianShape shape(k, n);
      const auto parts = partitions_in_box(k, n - k);
      for (const auto& l : parts)
        for (const auto& m : parts) {
          if (weight(l, m) > k * (n - k)) continue;
          const SimpleSchubertProblem p = make(k, n, l, m);
          // children of a compatible node are what the homotopy degenerates to
          if (p.num_conditions() < 1 || !p.compatible()) continue;
          const SkewChart c = chart(p);
          const CVector x = random_point(c.num_vars(), rng);
          const Complex d = oracle::cofactor_det(to_dense(stack(c.instantiate(x), special_plane(p.mu, shape))));
          const Complex prod = c.rightmost_product(x);
          EXPECT_LE(std::abs(d - special_plane_sign(p.mu, shape) * prod), 1e-12 * (1.0 + std::abs(prod)));
        }
    }
  // G(3,7), (210,110): all three rows end in a variable, even sign
  const SimpleSchubertProblem p = make(3, 7, {2, 1, 0}, {1, 1, 0});
  EXPECT_EQ(special_plane_sign(p.mu, p.shape), 1.0);
}

TEST(SpecialPlane, VanishesWhenARightmostEntryIsZero) {
  const SimpleSchubertProblem p = make(3, 7, {2, 1, 0}, {1, 1, 0});
  const SkewChart c = chart(p);
  CVector x(7, Complex(0.3, -0.2));
  x[4] = 0.0;  // e
  const CMatrix g[] = {special_plane(p.mu, p.shape)};
  EXPECT_EQ(eval_system(c, g, x).values[0], Complex(0.0));
  const CVector zero(7);
  EXPECT_EQ(eval_system(c, g, zero).values[0], Complex(0.0));
}

TEST(EvalSystem, Worked24AtReferenceSolution) {
  const SkewChart c = chart(all_simple(2, 4));
  const std::vector<CMatrix> planes{
      worked24_plane({{{-55, -8}, {17, 15}, {40, 99}, {-17, -38}}, {{-67, 25}, {-82, -55}, {-99, -80}, {-21, -85}}}),
      worked24_plane({{{66, 53}, {-73, -14}, {85, 5}, {67, 16}}, {{-53, -85}, {36, -25}, {2, 81}, {-58, 35}}})};
  const CVector m1{{-0.23714, -0.0028980}, {-0.51680, -0.10520}};
  const SystemValue v = eval_system(c, planes, m1);
  // five-digit reference values leave a residual proportional to the entry scale (~1e4)
  const CVector rough{{-0.3, 0.1}, {-0.4, -0.2}};
  const double off = norm_inf(eval_system(c, planes, rough).values);
  for (const auto& z : v.values) EXPECT_LT(std::abs(z), 1e-3 * off);
}

TEST(EvalSystem, JacobianMatchesFiniteDifferences) {
  Lcg rng(23);
  const SimpleSchubertProblem p = make(3, 7, {2, 1, 0}, {1, 1, 0});
  const ProblemInstance inst = ProblemInstance::random(p, 4);
  const SkewChart c = chart(p);
  const double h = 1e-6;
  for (int trial = 0; trial < 10; ++trial) {
    const CVector x = random_point(c.num_vars(), rng);
    const SystemValue v = eval_system(c, inst.planes, x);
    for (int var = 0; var < c.num_vars(); ++var) {
      CVector xp = x, xm = x;
      xp[var] += h;
      xm[var] -= h;
      const CVector fp = eval_system(c, inst.planes, xp).values, fm = eval_system(c, inst.planes, xm).values;
      for (std::size_t j = 0; j < fp.size(); ++j) {
        const Complex fd = (fp[j] - fm[j]) / (2.0 * h);
        EXPECT_LE(std::abs(v.jacobian(j, var) - fd), 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST(EvalSystem, LinearInEachPlaneRow) {
  Lcg rng(29);
  const SimpleSchubertProblem p = all_simple(3, 6);
  const SkewChart c = chart(p);
  for (int trial = 0; trial < 30; ++trial) {
    const CVector x = random_point(c.num_vars(), rng);
    const CMatrix g = random_plane(p.shape, rng), h = random_plane(p.shape, rng);
    const int row = trial % 3;
    const Complex alpha(rng.uniform(-1, 1), rng.uniform(-1, 1)), beta(rng.uniform(-1, 1), rng.uniform(-1, 1));
    CMatrix gh = g, mix = g;
    for (int col = 0; col < 6; ++col) {
      gh(row, col) = h(row, col);
      mix(row, col) = alpha * g(row, col) + beta * h(row, col);
    }
    const std::vector<CMatrix> planes{g, gh, mix};
    const CVector v = eval_system(c, planes, x).values;
    EXPECT_LE(std::abs(v[2] - (alpha * v[0] + beta * v[1])), 1e-12 * (1.0 + std::abs(v[2])));
  }
}

TEST(Instance, RandomPlanesAreSeededAndFullRank) {
  const SimpleSchubertProblem p = all_simple(2, 5);
  const ProblemInstance a = ProblemInstance::random(p, 7), b = ProblemInstance::random(p, 7),
                        c = ProblemInstance::random(p, 8);
  ASSERT_EQ(a.planes.size(), 4u);
  EXPECT_EQ(a.planes, b.planes);
  EXPECT_NE(a.planes, c.planes);
  for (const auto& g : a.planes) {
    EXPECT_TRUE(full_row_rank(g));
    for (const auto& z : g.entries()) {
      EXPECT_LE(std::abs(z.real()), 1.0);
      EXPECT_LE(std::abs(z.imag()), 1.0);
    }
  }
  std::vector<CMatrix> bad = a.planes;
  bad[0] = CMatrix(3, 5);
  EXPECT_THROW(ProblemInstance::with_planes(p, bad, 0), InvalidInput);
  bad.pop_back();
  EXPECT_THROW(ProblemInstance::with_planes(p, bad, 0), InvalidInput);
}
