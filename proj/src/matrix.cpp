#include "charwnn/matrix.hpp"

#include <algorithm>
#include <cassert>

namespace charwnn {

void Matrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

void affine(const Matrix& m, std::span<const double> x, std::span<const double> bias,
            std::span<double> y) {
  assert(x.size() == m.cols() && y.size() == m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    double acc = bias.empty() ? 0.0 : bias[r];
    for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

void add_transposed_product(const Matrix& m, std::span<const double> x, std::span<double> y) {
  assert(x.size() == m.rows() && y.size() == m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) y[c] += row[c] * xr;
  }
}

void add_outer(Matrix& m, std::span<const double> a, std::span<const double> b) {
  assert(a.size() == m.rows() && b.size() == m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double ar = a[r];
    if (ar == 0.0) continue;
    auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += ar * b[c];
  }
}

void axpy(double scale, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += scale * x[i];
}

}  // namespace charwnn
