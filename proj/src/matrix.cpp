#include "albench/matrix.hpp"

#include <cmath>

namespace albench {

int argmax(std::span<const double> values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

bool is_distribution(std::span<const double> row, double tol) {
  double sum = 0.0;
  for (double v : row) {
    if (v < 0.0 || !std::isfinite(v)) return false;
    sum += v;
  }
  return std::fabs(sum - 1.0) <= tol;
}

Matrix uniform_rows(int rows, int cols) {
  return Matrix(rows, cols, cols > 0 ? 1.0 / cols : 0.0);
}

}  // namespace albench
