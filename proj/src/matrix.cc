#include "easp/matrix.h"

#include <cmath>
#include <stdexcept>

namespace easp {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> init) {
  rows = static_cast<int>(init.size());
  cols = rows > 0 ? static_cast<int>(init.begin()->size()) : 0;
  data.reserve(static_cast<size_t>(rows) * static_cast<size_t>(cols));
  for (const auto& r : init) {
    if (static_cast<int>(r.size()) != cols) {
      throw std::invalid_argument("Matrix: ragged initializer list");
    }
    data.insert(data.end(), r.begin(), r.end());
  }
}

bool Matrix::all_finite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Matrix::fill(double v) {
  for (double& x : data) x = v;
}

std::string Matrix::shape_str() const {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace easp
