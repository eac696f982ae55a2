#pragma once

// Simple Schubert problems (lambda, mu, box, ..., box) on G(k, n): partitions,
// the skew chart E_{lambda,mu}, solution counts, child problems, the special
// plane G_mu and evaluation of the determinantal system.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pieri/errors.hpp"
#include "pieri/numeric.hpp"
#include "pieri/rng.hpp"

namespace pieri {

struct GrassmannianShape {
  int k = 0;
  int n = 0;

  GrassmannianShape() = default;
  GrassmannianShape(int k_, int n_) : k(k_), n(n_) {
    if (!(0 < k && k < n)) {
      throw InvalidInput("Grassmannian G(" + std::to_string(k) + "," + std::to_string(n) +
                         ") needs 0 < k < n");
    }
  }

  int codim() const { return n - k; }
  int dim() const { return k * (n - k); }

  auto operator<=>(const GrassmannianShape&) const = default;
};

/// Weakly decreasing sequence of non-negative parts, zero-padded to length k.
class Partition {
 public:
  Partition() = default;

  Partition(std::vector<int> parts, int k) : parts_(std::move(parts)) {
    if (static_cast<int>(parts_.size()) > k) {
      // Trailing zeros beyond k are tolerated.
      for (std::size_t i = k; i < parts_.size(); ++i)
        if (parts_[i] != 0) throw InvalidInput("partition has more than k non-zero parts");
      parts_.resize(k);
    }
    parts_.resize(k, 0);
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] < 0) throw InvalidInput("partition has a negative part");
      if (i > 0 && parts_[i] > parts_[i - 1]) throw InvalidInput("partition is not weakly decreasing");
    }
  }

  static Partition empty(int k) { return Partition({}, k); }
  /// (1, 0, ..., 0)
  static Partition box(int k) { return Partition({1}, k); }

  int size() const { return static_cast<int>(parts_.size()); }
  int operator[](int i) const { return parts_[i]; }
  const std::vector<int>& parts() const { return parts_; }

  int weight() const {
    int s = 0;
    for (int p : parts_) s += p;
    return s;
  }

  bool fits(const GrassmannianShape& shape) const {
    return size() == shape.k && (parts_.empty() || parts_[0] <= shape.codim());
  }

  std::string to_string() const {
    std::string s;
    bool wide = false;
    for (int p : parts_) wide = wide || p > 9;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (wide && i > 0) s += ',';
      s += std::to_string(parts_[i]);
    }
    return s;
  }

  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<int> parts_;
};

struct SimpleSchubertProblem {
  GrassmannianShape shape;
  Partition lambda;
  Partition mu;

  SimpleSchubertProblem() = default;
  SimpleSchubertProblem(GrassmannianShape shape_, Partition lambda_, Partition mu_)
      : shape(shape_), lambda(std::move(lambda_)), mu(std::move(mu_)) {
    if (!lambda.fits(shape) || !mu.fits(shape))
      throw InvalidInput("partition does not fit in a " + std::to_string(shape.k) + "x" +
                         std::to_string(shape.codim()) + " rectangle");
    if (num_conditions() < 0) throw InvalidInput("|lambda| + |mu| exceeds k(n-k)");
  }

  /// Number m of simple conditions (general planes G_1..G_m).
  int num_conditions() const { return shape.dim() - lambda.weight() - mu.weight(); }

  /// lambda_{k+1-i} + mu_i <= n-k for every row i.
  bool compatible() const {
    for (int r = 0; r < shape.k; ++r)
      if (lambda[shape.k - 1 - r] + mu[r] > shape.codim()) return false;
    return true;
  }

  bool operator==(const SimpleSchubertProblem&) const = default;
};

enum class CellKind { Zero, One, Var };

struct Cell {
  CellKind kind = CellKind::Zero;
  int var = -1;
};

/// k x n echelon pattern of E_{lambda,mu}; variables numbered row-major.
class SkewChart {
 public:
  using Position = std::pair<std::size_t, std::size_t>;

  SkewChart() = default;

  const SimpleSchubertProblem& problem() const { return problem_; }
  const GrassmannianShape& shape() const { return problem_.shape; }
  int k() const { return problem_.shape.k; }
  int n() const { return problem_.shape.n; }
  int num_vars() const { return static_cast<int>(var_positions_.size()); }

  const Cell& cell(int row, int col) const { return cells_[row * n() + col]; }
  /// 0-based column of the leading one in each row.
  int one_col(int row) const { return one_col_[row]; }
  /// 0-based column of the last non-zero entry in each row (n-k+i-mu_i, 1-based).
  int rightmost_col(int row) const { return rightmost_[row]; }
  /// Variable index at the rightmost cell of a row, or -1 when that cell is the one.
  int rightmost_var(int row) const { return cell(row, rightmost_[row]).var; }

  const std::vector<Position>& var_positions() const { return var_positions_; }

  /// The k x n matrix for a point x.
  CMatrix instantiate(std::span<const Complex> x) const {
    if (static_cast<int>(x.size()) != num_vars())
      throw DimensionMismatch("chart: expected " + std::to_string(num_vars()) + " coordinates");
    CMatrix e(k(), n());
    for (int r = 0; r < k(); ++r) e(r, one_col_[r]) = 1.0;
    for (std::size_t v = 0; v < var_positions_.size(); ++v)
      e(var_positions_[v].first, var_positions_[v].second) = x[v];
    return e;
  }

  /// Product of the rightmost entries of the rows.
  Complex rightmost_product(std::span<const Complex> x) const {
    Complex p = 1.0;
    for (int r = 0; r < k(); ++r) {
      const int v = rightmost_var(r);
      if (v >= 0) p *= x[v];
    }
    return p;
  }

  std::string render() const {
    std::string s;
    for (int r = 0; r < k(); ++r) {
      for (int c = 0; c < n(); ++c) {
        const Cell& x = cell(r, c);
        s += x.kind == CellKind::One ? '1' : x.kind == CellKind::Var ? '*' : '0';
      }
      s += '\n';
    }
    return s;
  }

 private:
  friend SkewChart chart(const SimpleSchubertProblem& problem);

  SimpleSchubertProblem problem_;
  std::vector<Cell> cells_;
  std::vector<int> one_col_;
  std::vector<int> rightmost_;
  std::vector<Position> var_positions_;
};

/// Entry rule: row i has a one at column i + lambda_{k+1-i}, free entries up to and
/// including column n-k+i-mu_i, zeros elsewhere.
inline SkewChart chart(const SimpleSchubertProblem& problem) {
  const int k = problem.shape.k, n = problem.shape.n;
  SkewChart c;
  c.problem_ = problem;
  c.cells_.assign(static_cast<std::size_t>(k) * n, Cell{});
  c.one_col_.resize(k);
  c.rightmost_.resize(k);
  for (int r = 0; r < k; ++r) {
    const int one = r + problem.lambda[k - 1 - r];
    const int right = n - k + r - problem.mu[r];
    if (one > right) {
      if (problem.num_conditions() == 0)
        throw EmptyProblem("lambda and mu are not complementary; no k-plane satisfies both");
      throw IncompatibleConditions("row " + std::to_string(r + 1) +
                                   ": leading one lies right of the last free column");
    }
    c.one_col_[r] = one;
    c.rightmost_[r] = right;
  }
  for (int r = 0; r < k; ++r) {
    c.cells_[r * n + c.one_col_[r]].kind = CellKind::One;
    for (int col = c.one_col_[r] + 1; col <= c.rightmost_[r]; ++col) {
      Cell& cell = c.cells_[r * n + col];
      cell.kind = CellKind::Var;
      cell.var = static_cast<int>(c.var_positions_.size());
      c.var_positions_.emplace_back(r, col);
    }
  }
  return c;
}

/// All nu with mu ⋖ nu that still fit in the k x (n-k) rectangle.
inline std::vector<Partition> children(const Partition& mu, const GrassmannianShape& shape) {
  std::vector<Partition> out;
  for (int r = 0; r < mu.size(); ++r) {
    if (mu[r] + 1 > shape.codim()) continue;
    if (r > 0 && mu[r - 1] == mu[r]) continue;
    std::vector<int> parts = mu.parts();
    ++parts[r];
    out.emplace_back(std::move(parts), shape.k);
  }
  return out;
}

namespace detail {

inline std::uint64_t count_recursive(const GrassmannianShape& shape, const Partition& lambda,
                                     const Partition& nu,
                                     std::map<std::vector<int>, std::uint64_t>& memo) {
  for (int r = 0; r < shape.k; ++r)
    if (lambda[shape.k - 1 - r] + nu[r] > shape.codim()) return 0;
  if (lambda.weight() + nu.weight() == shape.dim()) return 1;
  if (auto it = memo.find(nu.parts()); it != memo.end()) return it->second;
  std::uint64_t total = 0;
  for (const Partition& child : children(nu, shape)) {
    const std::uint64_t c = count_recursive(shape, lambda, child, memo);
    if (__builtin_add_overflow(total, c, &total))
      throw Error("count_solutions: count exceeds 64 bits");
  }
  memo.emplace(nu.parts(), total);
  return total;
}

}  // namespace detail

/// d(lambda, mu) via d(lambda, mu) = sum over mu ⋖ nu of d(lambda, nu).
inline std::uint64_t count_solutions(const SimpleSchubertProblem& problem) {
  std::map<std::vector<int>, std::uint64_t> memo;
  return detail::count_recursive(problem.shape, problem.lambda, problem.mu, memo);
}

/// G_mu: rows e_i for every column i not of the form n-k+j-mu_j, increasing i.
inline CMatrix special_plane(const Partition& mu, const GrassmannianShape& shape) {
  const int k = shape.k, n = shape.n;
  std::vector<bool> excluded(n, false);
  for (int r = 0; r < k; ++r) {
    const int col = n - k + r - mu[r];
    if (col < 0 || col >= n) throw InvalidInput("special_plane: partition does not fit");
    excluded[col] = true;
  }
  CMatrix g(shape.codim(), n);
  int row = 0;
  for (int c = 0; c < n; ++c)
    if (!excluded[c]) g(row++, c) = 1.0;
  return g;
}

/// Sign s with det[E_{lambda,mu}; G_mu] = s * (product of rightmost entries),
/// namely (-1)^(k(n-k) - |mu|) from moving the rightmost columns to the front.
inline double special_plane_sign(const Partition& mu, const GrassmannianShape& shape) {
  return ((shape.dim() - mu.weight()) % 2 == 0) ? 1.0 : -1.0;
}

struct SystemValue {
  CVector values;
  CMatrix jacobian;  // equations x variables
};

/// det[E(x); G] and its gradient with respect to the chart variables.
inline DetGradient eval_condition(const SkewChart& chart, const CMatrix& e, const CMatrix& plane) {
  if (plane.rows() != static_cast<std::size_t>(chart.shape().codim()) ||
      plane.cols() != static_cast<std::size_t>(chart.n()))
    throw DimensionMismatch("plane must be (n-k) x n");
  return det_with_gradient(stack(e, plane), chart.var_positions());
}

/// Values det[E(x); G_j] for every plane and their Jacobian.
inline SystemValue eval_system(const SkewChart& chart, std::span<const CMatrix> planes,
                               std::span<const Complex> x) {
  const CMatrix e = chart.instantiate(x);
  SystemValue out;
  out.values.resize(planes.size());
  out.jacobian = CMatrix(planes.size(), chart.num_vars());
  for (std::size_t j = 0; j < planes.size(); ++j) {
    DetGradient dg = eval_condition(chart, e, planes[j]);
    out.values[j] = dg.value;
    std::copy(dg.gradient.begin(), dg.gradient.end(), out.jacobian.row(j).begin());
  }
  return out;
}

/// Full-rank test used for generated and loaded planes.
inline bool full_row_rank(const CMatrix& plane) {
  return numeric_rank(plane, 1e-10) == plane.rows();
}

/// (n-k) x n plane with real and imaginary parts uniform in [-1, 1], row-major.
inline CMatrix random_plane(const GrassmannianShape& shape, Lcg& rng) {
  for (;;) {
    CMatrix g(shape.codim(), shape.n);
    for (int r = 0; r < shape.codim(); ++r)
      for (int c = 0; c < shape.n; ++c) {
        const double re = rng.uniform(-1.0, 1.0);
        const double im = rng.uniform(-1.0, 1.0);
        g(r, c) = Complex(re, im);
      }
    if (full_row_rank(g)) return g;
  }
}

/// A simple Schubert problem with its m general planes G_1..G_m.
struct ProblemInstance {
  SimpleSchubertProblem problem;
  std::vector<CMatrix> planes;
  std::uint64_t seed = 0;

  static ProblemInstance random(const SimpleSchubertProblem& problem, std::uint64_t seed) {
    ProblemInstance inst;
    inst.problem = problem;
    inst.seed = seed;
    Lcg rng(seed);
    for (int j = 0; j < problem.num_conditions(); ++j)
      inst.planes.push_back(random_plane(problem.shape, rng));
    return inst;
  }

  static ProblemInstance with_planes(const SimpleSchubertProblem& problem,
                                     std::vector<CMatrix> planes, std::uint64_t seed) {
    if (static_cast<int>(planes.size()) != problem.num_conditions())
      throw InvalidInput("expected " + std::to_string(problem.num_conditions()) + " planes, got " +
                         std::to_string(planes.size()));
    for (const auto& g : planes) {
      if (g.rows() != static_cast<std::size_t>(problem.shape.codim()) ||
          g.cols() != static_cast<std::size_t>(problem.shape.n))
        throw InvalidInput("plane must be (n-k) x n");
      if (!full_row_rank(g)) throw InvalidInput("plane is rank deficient");
    }
    ProblemInstance inst;
    inst.problem = problem;
    inst.planes = std::move(planes);
    inst.seed = seed;
    return inst;
  }
};

}  // namespace pieri
