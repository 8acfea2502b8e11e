#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace obstrukt {

using BigInt = mpz_class;
using Rational = mpq_class;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Dense row-major matrix. Zero rows or columns are allowed.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionMismatch("ragged matrix literal");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const {
    for (const auto& x : data_)
      if (x != 0) return false;
    return true;
  }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix s(idx.size(), cols_);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t j = 0; j < cols_; ++j) s(a, j) = (*this)(idx[a], j);
    return s;
  }
  Matrix select_cols(const std::vector<std::size_t>& idx) const {
    Matrix s(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t b = 0; b < idx.size(); ++b) s(i, b) = (*this)(i, idx[b]);
    return s;
  }

  // Columns of `other` appended on the right.
  Matrix hcat(const Matrix& other) const {
    if (rows_ != other.rows_) throw DimensionMismatch("hcat row mismatch");
    Matrix r(rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < other.cols_; ++j) r(i, cols_ + j) = other(i, j);
    }
    return r;
  }
  Matrix vcat(const Matrix& other) const {
    if (cols_ != other.cols_) throw DimensionMismatch("vcat column mismatch");
    Matrix r(rows_ + other.rows_, cols_);
    std::copy(data_.begin(), data_.end(), r.data_.begin());
    std::copy(other.data_.begin(), other.data_.end(), r.data_.begin() + data_.size());
    return r;
  }

  static Matrix from_columns(std::size_t rows, const std::vector<std::vector<T>>& cols) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw DimensionMismatch("column length");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += c * row[src]
  void add_row(std::size_t dst, std::size_t src, const T& c) {
    if (c == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += c * (*this)(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const T& c) {
    if (c == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += c * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix sum");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix difference");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix-vector product");
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (v[j] != 0) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<BigInt>;
using RatMatrix = Matrix<Rational>;
using IntVector = std::vector<BigInt>;
using RatVector = std::vector<Rational>;

RatMatrix to_rational(const IntMatrix& m);
// Throws std::domain_error if an entry is not integral.
IntMatrix to_integer(const RatMatrix& m);
RatVector to_rational(const IntVector& v);
IntVector to_integer(const RatVector& v);
bool is_integral(const RatVector& v);

std::string to_string(const IntMatrix& m);
std::string to_string(const RatMatrix& m);

}  // namespace obstrukt
