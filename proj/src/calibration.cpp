#include "albench/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace albench {

namespace {

constexpr double kProbFloor = 1e-12;

void scaled_softmax_row(std::span<const double> row, double temperature,
                        CalibrationOptions::Input input, std::span<double> out) {
  const int K = static_cast<int>(row.size());
  double max_z = -1e300;
  std::vector<double> z(K);
  for (int k = 0; k < K; ++k) {
    double v = row[k];
    if (input == CalibrationOptions::Input::Logits) v = std::log(std::max(v, kProbFloor));
    z[k] = v / temperature;
    max_z = std::max(max_z, z[k]);
  }
  for (int k = 0; k < K; ++k) out[k] = std::exp(z[k] - max_z);
  // Accumulate in value order so rows that permute each other calibrate to
  // bit-identical outputs (class-permutation equivariance down to ties).
  std::vector<double> addends(out.begin(), out.end());
  std::sort(addends.begin(), addends.end());
  double sum = 0.0;
  for (double a : addends) sum += a;
  for (int k = 0; k < K; ++k) out[k] /= sum;
}

}  // namespace

std::vector<double> temperature_grid(const CalibrationOptions& opts) {
  if (opts.grid_points < 1 || opts.grid_min <= 0.0 || opts.grid_max < opts.grid_min)
    throw std::invalid_argument("invalid temperature grid");
  std::vector<double> grid(opts.grid_points);
  if (opts.grid_points == 1) {
    grid[0] = opts.grid_min;
    return grid;
  }
  const double lo = std::log10(opts.grid_min);
  const double hi = std::log10(opts.grid_max);
  for (int i = 0; i < opts.grid_points; ++i)
    grid[i] = std::pow(10.0, lo + (hi - lo) * i / (opts.grid_points - 1));
  return grid;
}

double calibration_objective(const Matrix& preds, const Matrix& empirical, double temperature,
                             const CalibrationOptions& opts) {
  if (preds.rows != empirical.rows || preds.cols != empirical.cols)
    throw std::invalid_argument("prediction/empirical shape mismatch");
  std::vector<double> scaled(preds.cols);
  double total = 0.0;
  for (int i = 0; i < preds.rows; ++i) {
    scaled_softmax_row(preds.row(i), temperature, opts.input, scaled);
    auto emp = empirical.row(i);
    for (int k = 0; k < preds.cols; ++k)
      total += emp[k] * std::log(std::max(scaled[k], kProbFloor));
  }
  return total;
}

double fit_temperature(const Matrix& preds, const Matrix& empirical, const CalibrationOptions& opts) {
  if (preds.rows == 0) throw std::invalid_argument("no labeled examples to calibrate against");
  auto grid = temperature_grid(opts);
  double best_t = grid[0];
  double best_obj = calibration_objective(preds, empirical, grid[0], opts);
  for (size_t i = 1; i < grid.size(); ++i) {
    double obj = calibration_objective(preds, empirical, grid[i], opts);
    if (obj > best_obj) {
      best_obj = obj;
      best_t = grid[i];
    }
  }
  return best_t;
}

Matrix apply_temperature(const Matrix& preds, double temperature, const CalibrationOptions& opts) {
  if (temperature <= 0.0) throw std::invalid_argument("temperature must be positive");
  Matrix out(preds.rows, preds.cols);
  for (int i = 0; i < preds.rows; ++i)
    scaled_softmax_row(preds.row(i), temperature, opts.input, out.row(i));
  return out;
}

}  // namespace albench
