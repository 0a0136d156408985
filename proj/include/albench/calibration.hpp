#pragma once

#include <vector>

#include "albench/matrix.hpp"

namespace albench {

// Temperature scaling of classifier outputs against the empirical annotation
// distributions. The default mode pushes the probability values themselves
// through the softmax; "logits" selects the conventional variant, recovering
// logits as log(p) (exact up to the softmax's shift invariance).
struct CalibrationOptions {
  enum class Input { Probabilities, Logits };
  bool enabled = true;
  Input input = Input::Probabilities;
  double grid_min = 0.01;
  double grid_max = 100.0;
  int grid_points = 61;
};

std::vector<double> temperature_grid(const CalibrationOptions& opts);

// Soft cross-entropy of the temperature-scaled rows against the empirical
// rows, summed over examples. Exposed for the grid-search tests.
double calibration_objective(const Matrix& preds, const Matrix& empirical, double temperature,
                             const CalibrationOptions& opts);

// Exhaustive search over the grid; objective ties resolve to the smaller
// temperature. preds/empirical must hold one aligned row per labeled example.
double fit_temperature(const Matrix& preds, const Matrix& empirical,
                       const CalibrationOptions& opts = {});

// Each row becomes softmax(row / T) (or softmax(log(row) / T) in logits
// mode). Rows stay strictly positive distributions; the per-row argmax never
// changes.
Matrix apply_temperature(const Matrix& preds, double temperature,
                         const CalibrationOptions& opts = {});

}  // namespace albench
