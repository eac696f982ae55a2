#pragma once

// Dense complex linear algebra used by equation evaluation and path tracking.
// Matrices here are tiny (n <= ~12), so everything is plain row-major storage
// with partial pivoting by maximal modulus.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pieri/errors.hpp"

namespace pieri {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionMismatch("CMatrix: entry count " + std::to_string(data_.size()) +
                              " != " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionMismatch("CMatrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const Complex> entries() const { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Vertical concatenation [top; bottom].
inline CMatrix stack(const CMatrix& top, const CMatrix& bottom) {
  if (top.cols() != bottom.cols()) throw DimensionMismatch("stack: column counts differ");
  CMatrix out(top.rows() + bottom.rows(), top.cols());
  for (std::size_t r = 0; r < top.rows(); ++r)
    std::copy(top.row(r).begin(), top.row(r).end(), out.row(r).begin());
  for (std::size_t r = 0; r < bottom.rows(); ++r)
    std::copy(bottom.row(r).begin(), bottom.row(r).end(), out.row(top.rows() + r).begin());
  return out;
}

inline CVector multiply(const CMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("multiply: size mismatch");
  CVector y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Complex s = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) s += a(r, c) * x[c];
    y[r] = s;
  }
  return y;
}

inline double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline double norm_inf(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

inline double distance2(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw DimensionMismatch("distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

/// Relative pivot threshold below which a matrix is treated as singular.
inline constexpr double kSingularPivot = 1e-14;

/// PA = LU with unit lower L stored below the diagonal.
struct LuFactorization {
  CMatrix lu;
  std::vector<std::size_t> perm;  // row i of PA is row perm[i] of A
  int sign = 1;
  double scale = 0.0;  // max |a_ij| of the input
  double min_pivot = 0.0;
  double max_pivot = 0.0;

  bool singular() const { return min_pivot < kSingularPivot * scale || scale == 0.0; }

  Complex determinant() const {
    Complex d = static_cast<double>(sign);
    for (std::size_t i = 0; i < lu.rows(); ++i) d *= lu(i, i);
    return d;
  }

  /// Solves A x = b. Caller checks singular() first.
  CVector solve(std::span<const Complex> b) const {
    const std::size_t n = lu.rows();
    CVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = b[perm[i]];
      for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
      x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      Complex s = x[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
      x[i] = s / lu(i, i);
    }
    return x;
  }
};

inline LuFactorization lu_factor(CMatrix a) {
  if (!a.square()) throw DimensionMismatch("lu_factor: matrix is not square");
  const std::size_t n = a.rows();
  LuFactorization f;
  f.scale = a.max_abs();
  f.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
  f.min_pivot = n == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  f.max_pivot = 0.0;
  if (n == 0) f.scale = 1.0;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      const double v = std::abs(a(r, k));
      if (v > best) {
        best = v;
        p = r;
      }
    }
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(p, c));
      std::swap(f.perm[k], f.perm[p]);
      f.sign = -f.sign;
    }
    f.min_pivot = std::min(f.min_pivot, best);
    f.max_pivot = std::max(f.max_pivot, best);
    if (best == 0.0) continue;
    const Complex inv = 1.0 / a(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const Complex l = a(r, k) * inv;
      a(r, k) = l;
      if (l == Complex{}) continue;
      for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= l * a(k, c);
    }
  }
  f.lu = std::move(a);
  return f;
}

/// Solves A x = b with partial pivoting; throws SingularMatrix on a tiny pivot.
inline CVector lu_solve(const CMatrix& a, std::span<const Complex> b) {
  if (!a.square() || a.rows() != b.size()) throw DimensionMismatch("lu_solve: size mismatch");
  LuFactorization f = lu_factor(a);
  if (f.singular()) throw SingularMatrix("lu_solve: pivot below relative threshold");
  return f.solve(b);
}

inline Complex det(const CMatrix& a) { return lu_factor(a).determinant(); }

struct DetGradient {
  Complex value;
  CVector gradient;  // one entry per requested position
};

namespace detail {

inline CMatrix minor_matrix(const CMatrix& a, std::size_t skip_row, std::size_t skip_col) {
  const std::size_t n = a.rows();
  CMatrix m(n - 1, n - 1);
  for (std::size_t r = 0, mr = 0; r < n; ++r) {
    if (r == skip_row) continue;
    for (std::size_t c = 0, mc = 0; c < n; ++c) {
      if (c == skip_col) continue;
      m(mr, mc++) = a(r, c);
    }
    ++mr;
  }
  return m;
}

// Below this pivot spread the adjugate det(A)*inv(A) loses too many digits,
// so cofactors are taken from explicit minors instead.
inline constexpr double kAdjugatePivotSpread = 1e-6;

}  // namespace detail

/// Determinant and its partial derivatives at the given (row, col) entries.
/// The derivative with respect to a_rc is the (r, c) cofactor.
inline DetGradient det_with_gradient(const CMatrix& a,
                                     std::span<const std::pair<std::size_t, std::size_t>> positions) {
  if (!a.square()) throw DimensionMismatch("det_with_gradient: matrix is not square");
  const std::size_t n = a.rows();
  for (const auto& [r, c] : positions)
    if (r >= n || c >= n) throw DimensionMismatch("det_with_gradient: position out of range");

  DetGradient out;
  out.gradient.resize(positions.size());
  LuFactorization f = lu_factor(a);
  out.value = f.determinant();
  if (positions.empty()) return out;

  if (n == 1) {
    for (auto& g : out.gradient) g = 1.0;
    return out;
  }

  const bool well_conditioned =
      f.max_pivot > 0.0 && f.min_pivot >= detail::kAdjugatePivotSpread * f.max_pivot;
  if (well_conditioned) {
    // cofactor(r, c) = det * inv(A)(c, r); column r of inv(A) solves A y = e_r.
    std::vector<CVector> inv_cols(n);
    CVector unit(n);
    for (std::size_t i = 0; i < positions.size(); ++i) {
      const auto [r, c] = positions[i];
      if (inv_cols[r].empty()) {
        std::fill(unit.begin(), unit.end(), Complex{});
        unit[r] = 1.0;
        inv_cols[r] = f.solve(unit);
      }
      out.gradient[i] = out.value * inv_cols[r][c];
    }
    return out;
  }

  for (std::size_t i = 0; i < positions.size(); ++i) {
    const auto [r, c] = positions[i];
    const double sign = ((r + c) % 2 == 0) ? 1.0 : -1.0;
    out.gradient[i] = sign * det(detail::minor_matrix(a, r, c));
  }
  return out;
}

/// Numerical rank by Gaussian elimination with complete pivoting.
inline std::size_t numeric_rank(CMatrix a, double rel_tol) {
  const double scale = a.max_abs();
  if (scale == 0.0) return 0;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t rank = 0;
  for (std::size_t k = 0; k < std::min(rows, cols); ++k) {
    std::size_t pr = k, pc = k;
    double best = 0.0;
    for (std::size_t r = k; r < rows; ++r)
      for (std::size_t c = k; c < cols; ++c)
        if (std::abs(a(r, c)) > best) {
          best = std::abs(a(r, c));
          pr = r;
          pc = c;
        }
    if (best <= rel_tol * scale) break;
    for (std::size_t c = 0; c < cols; ++c) std::swap(a(k, c), a(pr, c));
    for (std::size_t r = 0; r < rows; ++r) std::swap(a(r, k), a(r, pc));
    for (std::size_t r = k + 1; r < rows; ++r) {
      const Complex l = a(r, k) / a(k, k);
      for (std::size_t c = k; c < cols; ++c) a(r, c) -= l * a(k, c);
    }
    ++rank;
  }
  return rank;
}

}  // namespace pieri
