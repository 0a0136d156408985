#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "albench/matrix.hpp"

namespace albench {

struct ClassifierSpec {
  enum class Kind { Knn, SoftmaxRegression, External };
  Kind kind = Kind::Knn;
  int neighbors = 5;           // k-NN
  double learning_rate = 0.1;  // softmax regression
  int epochs = 300;
  double l2_penalty = 1e-4;
  uint64_t seed = 0;
  std::string predictions_path;  // External: CSV of per-example probabilities

  bool trainable() const { return kind != Kind::External; }
};

ClassifierSpec::Kind classifier_kind_from_name(const std::string& name);
std::string classifier_kind_name(ClassifierSpec::Kind kind);

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual Matrix predict_proba(const Matrix& features) const = 0;
};

// Deterministic fit given (spec, data). Throws on an empty training set or a
// non-trainable spec. Classes absent from the training labels are fine.
std::unique_ptr<Classifier> train(const ClassifierSpec& spec, const Matrix& features,
                                  const std::vector<int>& labels, int num_classes);

struct CrossValResult {
  Matrix out_of_sample;  // row i predicted by the fold model not trained on i
  std::vector<std::unique_ptr<Classifier>> fold_models;
  std::vector<int> fold_of;  // fold index per training row
  int folds_used = 0;
  bool folds_reduced = false;
};

// Seeded shuffle then contiguous split; folds are reduced (with a flag) when
// there are fewer examples than folds.
CrossValResult cross_val_oos(const ClassifierSpec& spec, const Matrix& features,
                             const std::vector<int>& labels, int num_classes, int folds,
                             uint64_t split_seed);

// Unweighted mean of the fold models' predictions; used for the unlabeled
// pool and the test set instead of retraining on the full labeled set.
Matrix predict_pool(std::span<const std::unique_ptr<Classifier>> fold_models,
                    const Matrix& features);

// Row-wise weighted average across models. All-zero (or empty) weights fall
// back to the unweighted mean.
Matrix ensemble_predict(const std::vector<Matrix>& per_model, std::span<const double> weights);

// Softmax-regression internals, exposed so the finite-difference gradient
// check can drive them directly.
struct SoftmaxParams {
  Matrix weights;            // d x K
  std::vector<double> bias;  // K
};
double softmax_nll(const SoftmaxParams& params, const Matrix& features,
                   const std::vector<int>& labels, double l2_penalty);
SoftmaxParams softmax_gradient(const SoftmaxParams& params, const Matrix& features,
                               const std::vector<int>& labels, double l2_penalty);

}  // namespace albench
