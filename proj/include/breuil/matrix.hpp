#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "breuil/error.hpp"

namespace breuil {

namespace detail {
// Outside the class so that the member Matrix::inverse does not hide the
// entry-level inverse found by argument-dependent lookup.
template <class T>
T invert_entry(const T& x) {
  return inverse(x);
}
}  // namespace detail

/// Dense matrix over a commutative ring whose elements carry their own ring
/// (SeriesElem, WittVec, TElem). Entries are found by ADL for is_unit,
/// inverse, zero_like and one_like. Matrices always have at least one entry.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, const T& fill) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n, const T& proto) {
    Matrix m(n, n, zero_like(proto));
    for (int i = 0; i < n; ++i) m(i, i) = one_like(proto);
    return m;
  }

  /// Matrix from row-major nested vectors.
  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    if (rows.empty() || rows[0].empty()) throw Error("Matrix::from_rows: empty matrix");
    Matrix m;
    m.rows_ = static_cast<int>(rows.size());
    m.cols_ = static_cast<int>(rows[0].size());
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != m.cols_) throw Error("Matrix::from_rows: ragged rows");
      m.a_.insert(m.a_.end(), row.begin(), row.end());
    }
    return m;
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix operator+(const Matrix& o) const {
    check_same_shape(o, "add");
    Matrix out = *this;
    for (size_t k = 0; k < a_.size(); ++k) out.a_[k] = a_[k] + o.a_[k];
    return out;
  }

  Matrix operator-(const Matrix& o) const {
    check_same_shape(o, "sub");
    Matrix out = *this;
    for (size_t k = 0; k < a_.size(); ++k) out.a_[k] = a_[k] - o.a_[k];
    return out;
  }

  Matrix operator-() const {
    Matrix out = *this;
    for (auto& x : out.a_) x = -x;
    return out;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw Error("Matrix::mul: shape mismatch");
    Matrix out(rows_, o.cols_, zero_like(a_.front()));
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < o.cols_; ++j) {
        T acc = zero_like(a_.front());
        for (int k = 0; k < cols_; ++k) acc = acc + (*this)(i, k) * o(k, j);
        out(i, j) = std::move(acc);
      }
    }
    return out;
  }

  /// Every entry multiplied by a scalar of the same ring.
  Matrix scaled(const T& s) const {
    Matrix out = *this;
    for (auto& x : out.a_) x = s * x;
    return out;
  }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const auto& x : a_) {
      if (!x.is_zero()) return false;
    }
    return true;
  }

  /// Entry-wise image under f.
  template <class F>
  auto map(F&& f) const -> Matrix<std::decay_t<decltype(f(std::declval<const T&>()))>> {
    using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
    std::vector<std::vector<U>> rows(rows_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) rows[i].push_back(f((*this)(i, j)));
    }
    return Matrix<U>::from_rows(rows);
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_, a_.front());
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    }
    return out;
  }

  /// Submatrix of the given row and column ranges [r0, r0+nr) x [c0, c0+nc).
  Matrix block(int r0, int c0, int nr, int nc) const {
    Matrix out(nr, nc, a_.front());
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    }
    return out;
  }

  /// Determinant by Laplace expansion along rows with memoised minors over
  /// column subsets: division-free, so valid over any commutative ring.
  T det() const {
    if (!square()) throw Error("Matrix::det: not square");
    if (rows_ > 20) throw Error("Matrix::det: matrix too large");
    std::unordered_map<unsigned, T> memo;
    return minor_det(0, (1u << cols_) - 1u, memo);
  }

  /// Adjugate: adj(M)·M = M·adj(M) = det(M)·I.
  Matrix adjugate() const {
    if (!square()) throw Error("Matrix::adjugate: not square");
    const int n = rows_;
    Matrix out(n, n, zero_like(a_.front()));
    if (n == 1) {
      out(0, 0) = one_like(a_.front());
      return out;
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Matrix sub(n - 1, n - 1, a_.front());
        for (int r = 0, rr = 0; r < n; ++r) {
          if (r == i) continue;
          for (int c = 0, cc = 0; c < n; ++c) {
            if (c == j) continue;
            sub(rr, cc++) = (*this)(r, c);
          }
          ++rr;
        }
        T cof = sub.det();
        out(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
      }
    }
    return out;
  }

  /// Inverse by Gauss-Jordan elimination with unit pivots. Over a local ring
  /// a matrix is invertible iff some unit pivot exists in every column.
  Matrix inverse() const {
    if (!square()) throw Error("Matrix::inverse: not square");
    const int n = rows_;
    Matrix m = *this;
    Matrix inv = identity(n, a_.front());
    for (int col = 0; col < n; ++col) {
      int piv = -1;
      for (int r = col; r < n; ++r) {
        if (is_unit(m(r, col))) {
          piv = r;
          break;
        }
      }
      if (piv < 0) throw ArithmeticError("Matrix::inverse: matrix is not invertible");
      if (piv != col) {
        m.swap_rows(piv, col);
        inv.swap_rows(piv, col);
      }
      T s = detail::invert_entry(m(col, col));
      for (int j = 0; j < n; ++j) {
        m(col, j) = s * m(col, j);
        inv(col, j) = s * inv(col, j);
      }
      for (int r = 0; r < n; ++r) {
        if (r == col || m(r, col).is_zero()) continue;
        T f = m(r, col);
        for (int j = 0; j < n; ++j) {
          m(r, j) = m(r, j) - f * m(col, j);
          inv(r, j) = inv(r, j) - f * inv(col, j);
        }
      }
    }
    return inv;
  }

  void swap_rows(int i, int j) {
    for (int k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
  }

  void swap_cols(int i, int j) {
    for (int k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
  }

  const std::vector<T>& entries() const noexcept { return a_; }

 private:
  void check_same_shape(const Matrix& o, const char* where) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(std::string("Matrix::") + where + ": shape mismatch");
  }

  T minor_det(int row, unsigned mask, std::unordered_map<unsigned, T>& memo) const {
    if (row == rows_) return one_like(a_.front());
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    T acc = zero_like(a_.front());
    int sign_index = 0;
    for (int c = 0; c < cols_; ++c) {
      if (!(mask & (1u << c))) continue;
      const T& x = (*this)(row, c);
      if (!x.is_zero()) {
        T term = x * minor_det(row + 1, mask & ~(1u << c), memo);
        acc = (sign_index % 2 == 0) ? acc + term : acc - term;
      }
      ++sign_index;
    }
    memo.emplace(mask, acc);
    return acc;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> a_;
};

/// Block-diagonal matrix from two square blocks (either may be empty, given
/// as size 0 with the prototype element).
template <class T>
Matrix<T> block_diag(const Matrix<T>& a, const Matrix<T>& b, const T& proto) {
  const int n = a.rows() + b.rows();
  Matrix<T> out(n, n, zero_like(proto));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  }
  for (int i = 0; i < b.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
  }
  return out;
}

/// diag(x·I_d, y·I_c).
template <class T>
Matrix<T> diag2(int d, const T& x, int c, const T& y) {
  Matrix<T> out(d + c, d + c, zero_like(x));
  for (int i = 0; i < d; ++i) out(i, i) = x;
  for (int i = 0; i < c; ++i) out(d + i, d + i) = y;
  return out;
}

}  // namespace breuil
