#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace easp {

// Dense row-major f64 matrix. The only tensor type in the project; shapes
// are validated at operation boundaries, not on element access.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // rows * cols, row-major

  Matrix() = default;
  Matrix(int r, int c)
      : rows(r), cols(c), data(static_cast<size_t>(r) * static_cast<size_t>(c), 0.0) {}
  Matrix(std::initializer_list<std::initializer_list<double>> init);

  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  double* row(int r) { return data.data() + static_cast<size_t>(r) * cols; }
  const double* row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }

  size_t size() const { return data.size(); }
  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
  bool all_finite() const;
  void fill(double v);

  std::string shape_str() const;  // "3x4"
};

}  // namespace easp
