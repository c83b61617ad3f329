#pragma once

// Dense row-major matrices over a Field.

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "normlab/core.hpp"

namespace normlab {

template <Field S>
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, S fill = S{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw PreconditionViolation("matrix must be non-empty");
  }

  Matrix(std::initializer_list<std::initializer_list<S>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    if (rows_ == 0 || cols_ == 0) throw PreconditionViolation("matrix must be non-empty");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix from_rows(const std::vector<Vector<S>>& rows) {
    if (rows.empty() || rows.front().empty()) {
      throw PreconditionViolation("matrix must be non-empty");
    }
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      detail::require_same_dim(rows[i], rows.front(), "from_rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_columns(const std::vector<Vector<S>>& cols) {
    if (cols.empty() || cols.front().empty()) {
      throw PreconditionViolation("matrix must be non-empty");
    }
    Matrix m(cols.front().size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      detail::require_same_dim(cols[j], cols.front(), "from_columns");
      for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S{1};
    return m;
  }

  static Matrix diag(const Vector<S>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  const std::vector<S>& data() const& { return data_; }
  std::vector<S> data() && { return std::move(data_); }

  S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector<S> row(std::size_t i) const {
    return Vector<S>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  Vector<S> column(std::size_t j) const {
    Vector<S> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  void set_column(std::size_t j, const Vector<S>& c) {
    if (c.size() != rows_) throw DimensionMismatch("set_column");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, modulus(x));
    return m;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b, "+");
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
    return c;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b, "-");
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
    return c;
  }

  friend Matrix operator*(S s, const Matrix& a) {
    Matrix c = a;
    for (auto& x : c.data_) x *= s;
    return c;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw DimensionMismatch("product " + a.shape() + " * " + b.shape());
    }
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S aik = a(i, k);
        if (aik == S{}) continue;
        const S* brow = &b.data_[k * b.cols_];
        S* crow = &c.data_[i * c.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
      }
    }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string shape() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  void require_same_shape(const Matrix& b, const char* op) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) {
      throw DimensionMismatch(std::string(op) + " " + shape() + " vs " + b.shape());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

template <Field S>
Vector<S> apply(const Matrix<S>& t, const Vector<S>& v) {
  if (t.cols() != v.size()) {
    throw DimensionMismatch("apply " + t.shape() + " to dim " + std::to_string(v.size()));
  }
  Vector<S> out(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    S s{};
    for (std::size_t j = 0; j < t.cols(); ++j) s += t(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

// Conjugate transpose.
template <Field S>
Matrix<S> adjoint(const Matrix<S>& t) {
  Matrix<S> a(t.cols(), t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) a(j, i) = conj_of(t(i, j));
  }
  return a;
}

// Plain transpose (the matrix of the dual map under the bilinear pairing).
template <Field S>
Matrix<S> transpose(const Matrix<S>& t) {
  Matrix<S> a(t.cols(), t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) a(j, i) = t(i, j);
  }
  return a;
}

template <Field S>
Matrix<S> outer(const Vector<S>& a, const Vector<S>& b) {
  Matrix<S> m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * conj_of(b[j]);
  }
  return m;
}

// Solves A x = b by Gaussian elimination with partial pivoting. Throws
// PreconditionViolation when a pivot falls below rel_tol * max|A|.
template <Field S>
Vector<S> solve(Matrix<S> a, Vector<S> b, double rel_tol = 1e-13) {
  if (!a.square()) throw DimensionMismatch("solve needs a square matrix");
  if (b.size() != a.rows()) throw DimensionMismatch("solve right-hand side");
  const std::size_t n = a.rows();
  const double floor = rel_tol * std::max(a.max_abs(), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (modulus(a(i, k)) > modulus(a(piv, k))) piv = i;
    }
    if (modulus(a(piv, k)) <= floor) throw PreconditionViolation("singular system");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const S f = a(i, k) / a(k, k);
      if (f == S{}) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  Vector<S> x(n);
  for (std::size_t k = n; k-- > 0;) {
    S s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

// Rank of the family by elimination with relative tolerance.
template <Field S>
std::size_t rank_of(const std::vector<Vector<S>>& vs, double rel_tol = 1e-10) {
  if (vs.empty()) return 0;
  Matrix<S> m = Matrix<S>::from_rows(vs);
  const double floor = rel_tol * std::max(m.max_abs(), 1e-300);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t piv = rank;
    for (std::size_t i = rank + 1; i < m.rows(); ++i) {
      if (modulus(m(i, c)) > modulus(m(piv, c))) piv = i;
    }
    if (modulus(m(piv, c)) <= floor) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(rank, j), m(piv, j));
    for (std::size_t i = rank + 1; i < m.rows(); ++i) {
      const S f = m(i, c) / m(rank, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

}  // namespace normlab
