#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stylo {

/// Dense row-major matrix of doubles. Rows are samples throughout the
/// library, columns are features.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<double> column(std::size_t c) const;

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  Matrix transposed() const;
  Matrix select_rows(std::span<const std::size_t> idx) const;
  Matrix select_columns(std::span<const std::size_t> idx) const;
  /// Appends the columns of `other` (same row count) to the right.
  Matrix hconcat(const Matrix& other) const;

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

Matrix multiply(const Matrix& a, const Matrix& b);
/// a * b^T without materializing the transpose.
Matrix multiply_bt(const Matrix& a, const Matrix& b);
/// a^T * a.
Matrix gram_columns(const Matrix& a);
/// a * a^T.
Matrix gram_rows(const Matrix& a);

/// Eigen-decomposition of a symmetric matrix. `values` sorted descending;
/// row i of `vectors` is the unit eigenvector for values[i].
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

SymmetricEigen symmetric_eigen(const Matrix& a);

/// Solves a x = b for symmetric positive definite a (Cholesky). b may have
/// several right-hand-side columns.
Matrix cholesky_solve(const Matrix& a, const Matrix& b);

std::vector<double> column_means(const Matrix& m);

}  // namespace stylo
