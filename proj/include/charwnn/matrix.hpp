#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace charwnn {

using Vector = std::vector<double>;

// Sparse gradient storage for embedding tables: column index -> gradient.
using SparseColumns = std::map<int, Vector>;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void fill(double value);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// y = M x + bias (bias may be empty).
void affine(const Matrix& m, std::span<const double> x, std::span<const double> bias,
            std::span<double> y);

// y += M^T x
void add_transposed_product(const Matrix& m, std::span<const double> x, std::span<double> y);

// m += a b^T
void add_outer(Matrix& m, std::span<const double> a, std::span<const double> b);

// y += scale * x
void axpy(double scale, std::span<const double> x, std::span<double> y);

}  // namespace charwnn
