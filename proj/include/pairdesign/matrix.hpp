#ifndef PAIRDESIGN_MATRIX_HPP
#define PAIRDESIGN_MATRIX_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pairdesign/errors.hpp"

namespace pairdesign {

/// Small square matrix, row-major. Deliberately plain: the dimensions here
/// top out at p = 92 (K = 8), so a naive dense representation is enough.
class DenseMatrix {
 public:
  explicit DenseMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {
    if (n < 1) throw std::domain_error("DenseMatrix: dimension must be >= 1");
  }

  static DenseMatrix identity(int n) {
    DenseMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int size() const { return n_; }
  double& operator()(int r, int c) { return a_[idx(r, c)]; }
  double operator()(int r, int c) const { return a_[idx(r, c)]; }

 private:
  std::size_t idx(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(c);
  }
  int n_;
  std::vector<double> a_;
};

namespace detail {

inline constexpr double kPivotThreshold = 1e-12;

struct LuFactors {
  DenseMatrix lu;          // L below the diagonal (unit), U on and above
  std::vector<int> perm;   // row permutation
  int sign = 1;
  bool singular = false;   // some pivot below threshold

  explicit LuFactors(const DenseMatrix& m) : lu(m), perm(static_cast<std::size_t>(m.size())) {
    const int n = m.size();
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (int col = 0; col < n; ++col) {
      int pivot_row = col;
      double best = std::abs(lu(col, col));
      for (int r = col + 1; r < n; ++r) {
        const double v = std::abs(lu(r, col));
        if (v > best) {
          best = v;
          pivot_row = r;
        }
      }
      if (best < kPivotThreshold) {
        singular = true;
        continue;
      }
      if (pivot_row != col) {
        for (int c = 0; c < n; ++c) std::swap(lu(col, c), lu(pivot_row, c));
        std::swap(perm[static_cast<std::size_t>(col)],
                  perm[static_cast<std::size_t>(pivot_row)]);
        sign = -sign;
      }
      const double pivot = lu(col, col);
      for (int r = col + 1; r < n; ++r) {
        const double factor = lu(r, col) / pivot;
        lu(r, col) = factor;
        for (int c = col + 1; c < n; ++c) lu(r, c) -= factor * lu(col, c);
      }
    }
  }

  // Solves A x = b for one right-hand side.
  std::vector<double> solve(const std::vector<double>& b) const {
    const int n = lu.size();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) x[static_cast<std::size_t>(i)] -= lu(i, j) * x[static_cast<std::size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[static_cast<std::size_t>(i)] -= lu(i, j) * x[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(i)] /= lu(i, i);
    }
    return x;
  }
};

}  // namespace detail

/// Determinant via LU with partial pivoting; a vanishing pivot yields 0.
inline double dense_det(const DenseMatrix& m) {
  detail::LuFactors f(m);
  if (f.singular) return 0.0;
  double det = f.sign;
  for (int i = 0; i < m.size(); ++i) det *= f.lu(i, i);
  return det;
}

/// Inverse via LU; throws SingularError when a pivot falls below 1e-12.
inline DenseMatrix dense_inverse(const DenseMatrix& m) {
  detail::LuFactors f(m);
  if (f.singular) throw SingularError("dense_inverse: matrix is singular");
  const int n = m.size();
  DenseMatrix inv(n);
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  for (int c = 0; c < n; ++c) {
    e[static_cast<std::size_t>(c)] = 1.0;
    const std::vector<double> col = f.solve(e);
    e[static_cast<std::size_t>(c)] = 0.0;
    for (int r = 0; r < n; ++r) inv(r, c) = col[static_cast<std::size_t>(r)];
  }
  return inv;
}

/// Solves m x = rhs; throws SingularError on a vanishing pivot.
inline std::vector<double> dense_solve(const DenseMatrix& m, const std::vector<double>& rhs) {
  if (static_cast<int>(rhs.size()) != m.size())
    throw std::domain_error("dense_solve: dimension mismatch");
  detail::LuFactors f(m);
  if (f.singular) throw SingularError("dense_solve: matrix is singular");
  return f.solve(rhs);
}

}  // namespace pairdesign

#endif  // PAIRDESIGN_MATRIX_HPP
