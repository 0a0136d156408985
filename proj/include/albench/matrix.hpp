#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace albench {

// Dense row-major matrix of doubles; holds feature rows and per-example
// class-probability rows.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<size_t>(r) * static_cast<size_t>(c), fill) {}

  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  std::span<double> row(int r) {
    return {data.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)};
  }
  std::span<const double> row(int r) const {
    return {data.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)};
  }
};

// Index of the largest entry; ties resolve to the smallest index.
int argmax(std::span<const double> values);

// Entries nonnegative and summing to 1 within tol.
bool is_distribution(std::span<const double> row, double tol = 1e-9);

Matrix uniform_rows(int rows, int cols);

}  // namespace albench
